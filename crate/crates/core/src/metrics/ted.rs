use std::collections::HashMap;

use super::constituency::{truncate_depth, ConstituencyTree};

/// Postorder view of a tree's nonterminals.
struct Postorder<'a> {
    labels: Vec<&'a str>,
    /// Index of each node's leftmost leaf descendant.
    leftmost: Vec<usize>,
    keyroots: Vec<usize>,
}

impl<'a> Postorder<'a> {
    fn new(tree: &'a ConstituencyTree) -> Self {
        let mut p = Postorder {
            labels: Vec::new(),
            leftmost: Vec::new(),
            keyroots: Vec::new(),
        };
        p.visit(tree);
        let mut last: HashMap<usize, usize> = HashMap::new();
        for (i, &l) in p.leftmost.iter().enumerate() {
            last.insert(l, i);
        }
        p.keyroots = last.into_values().collect();
        p.keyroots.sort_unstable();
        p
    }

    fn visit(&mut self, node: &'a ConstituencyTree) -> usize {
        let mut first = None;
        for child in node.subtrees() {
            let i = self.visit(child);
            first.get_or_insert(self.leftmost[i]);
        }
        let me = self.labels.len();
        self.labels.push(&node.label);
        self.leftmost.push(first.unwrap_or(me));
        me
    }
}

/// Unit-cost ordered tree edit distance between the nonterminal skeletons
/// of `a` and `b`, by the Zhang–Shasha keyroot recurrence.
pub fn ted(a: &ConstituencyTree, b: &ConstituencyTree) -> usize {
    let a = Postorder::new(a);
    let b = Postorder::new(b);
    let (n, m) = (a.labels.len(), b.labels.len());
    let mut tree_dist = vec![vec![0usize; m]; n];
    let mut forest = vec![vec![0usize; m + 1]; n + 1];

    for &i in &a.keyroots {
        for &j in &b.keyroots {
            let (li, lj) = (a.leftmost[i], b.leftmost[j]);
            let rows = i - li + 1;
            let cols = j - lj + 1;
            forest[0][0] = 0;
            for x in 1..=rows {
                forest[x][0] = forest[x - 1][0] + 1;
            }
            for y in 1..=cols {
                forest[0][y] = forest[0][y - 1] + 1;
            }
            for x in 1..=rows {
                let s = li + x - 1;
                for y in 1..=cols {
                    let t = lj + y - 1;
                    let delete = forest[x - 1][y] + 1;
                    let insert = forest[x][y - 1] + 1;
                    if a.leftmost[s] == li && b.leftmost[t] == lj {
                        let relabel = usize::from(a.labels[s] != b.labels[t]);
                        let best = delete.min(insert).min(forest[x - 1][y - 1] + relabel);
                        forest[x][y] = best;
                        tree_dist[s][t] = best;
                    } else {
                        let p = a.leftmost[s] - li;
                        let q = b.leftmost[t] - lj;
                        forest[x][y] = delete.min(insert).min(forest[p][q] + tree_dist[s][t]);
                    }
                }
            }
        }
    }
    tree_dist[n - 1][m - 1]
}

/// Edit distance between the top three layers of each tree.
pub fn ted3(a: &ConstituencyTree, b: &ConstituencyTree) -> usize {
    ted(&truncate_depth(a, 3), &truncate_depth(b, 3))
}

/// Edit distance between the full trees.
pub fn tedf(a: &ConstituencyTree, b: &ConstituencyTree) -> usize {
    ted(a, b)
}
