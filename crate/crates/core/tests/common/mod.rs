//! Random generators and independent reference implementations shared by
//! the integration, property, and acceptance suites.

#![allow(dead_code)]

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reroot::metrics::{Constituent, ConstituencyTree};
use reroot::penman::{AmrGraph, Literal, Role, Triple, Variable};

const CONCEPTS: &[&str] = &[
    "want-01", "boy", "girl", "go-02", "and", "person", "name", "thing", "know-01", "city",
    "i", "they", "this", "need-01", "approve-01", "price-01", "statistic", "document-01",
];
const ROLES: &[&str] = &[
    "ARG0", "ARG1", "ARG2", "mod", "purpose", "domain", "location", "time", "ARG0-of",
    "ARG1-of", "consist-of", "op1", "op2", "poss",
];
const SYMBOLS: &[&str] = &["-", "+", "imperative", "expressive", "3", "1.5", "2024"];
const STRINGS: &[&str] = &["Bo", "New York", "say \\\"hi\\\"", "x:y (z)"];

fn variable_names(n: usize, rng: &mut impl Rng) -> Vec<Variable> {
    let scheme = rng.gen_range(0..3);
    (0..n)
        .map(|i| {
            let name = match scheme {
                0 => format!("z{}", i + 1),
                1 => format!("{}{}", (b'a' + (i % 26) as u8) as char, i / 26),
                _ => format!("v{}x", i * 7 + 2),
            };
            Variable::new(name).unwrap()
        })
        .collect()
}

/// A connected graph with `nodes` concept nodes, some re-entrant and
/// self-loop edges, and a few attributes. Edge and instance triples come
/// out in shuffled order.
pub fn random_graph_with(rng: &mut impl Rng, nodes: usize) -> AmrGraph {
    let vars = variable_names(nodes, rng);
    let mut instances: Vec<Triple> = vars
        .iter()
        .map(|v| Triple::instance(v.clone(), *CONCEPTS.choose(rng).unwrap()))
        .collect();
    let mut relations = Vec::new();
    let edge = |a: usize, b: usize, rng: &mut dyn rand::RngCore| {
        let role = Role::new(*ROLES.choose(rng).unwrap());
        if rng.gen_bool(0.5) {
            Triple::edge(vars[a].clone(), role, vars[b].clone())
        } else {
            Triple::edge(vars[b].clone(), role, vars[a].clone())
        }
    };
    for i in 1..nodes {
        let parent = rng.gen_range(0..i);
        relations.push(edge(parent, i, rng));
    }
    for _ in 0..rng.gen_range(0..=nodes / 2) {
        let a = rng.gen_range(0..nodes);
        let b = if rng.gen_bool(0.1) { a } else { rng.gen_range(0..nodes) };
        relations.push(edge(a, b, rng));
    }
    for _ in 0..rng.gen_range(0..=3) {
        let owner = vars[rng.gen_range(0..nodes)].clone();
        let role = Role::new(*["polarity", "quant", "mode", "name", "value"].choose(rng).unwrap());
        let lit = if rng.gen_bool(0.5) {
            Literal::Symbol(SYMBOLS.choose(rng).unwrap().to_string())
        } else {
            Literal::String(STRINGS.choose(rng).unwrap().to_string())
        };
        relations.push(Triple::attribute(owner, role, lit));
    }
    relations.shuffle(rng);
    let top = vars[0].clone();
    // The top's instance goes first; the rest are interleaved at random.
    let first = instances.remove(0);
    let mut triples = vec![first];
    let mut rest: Vec<Triple> = instances.into_iter().chain(relations).collect();
    rest.shuffle(rng);
    triples.extend(rest);
    AmrGraph::new(top, triples).expect("generator builds valid graphs")
}

pub fn random_graph(seed: u64, max_nodes: usize) -> AmrGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=max_nodes);
    random_graph_with(&mut rng, n)
}

/// A random ordered tree of `1..=max_nodes` nonterminals over a small
/// label alphabet, with occasional terminal tokens.
pub fn random_tree(rng: &mut impl Rng, max_nodes: usize) -> ConstituencyTree {
    let n = rng.gen_range(1..=max_nodes);
    let labels = ["A", "B", "C"];
    let parents: Vec<usize> = (1..n).map(|i| rng.gen_range(0..i)).collect();
    let mut nodes: Vec<ConstituencyTree> = (0..n)
        .map(|_| ConstituencyTree::new(*labels.choose(rng).unwrap(), Vec::new()))
        .collect();
    for i in (1..n).rev() {
        let child = std::mem::replace(&mut nodes[i], ConstituencyTree::new("_", Vec::new()));
        nodes[parents[i - 1]].children.insert(0, Constituent::Tree(child));
    }
    let mut root = nodes.swap_remove(0);
    sprinkle_tokens(&mut root, rng);
    root
}

fn sprinkle_tokens(t: &mut ConstituencyTree, rng: &mut impl Rng) {
    for c in &mut t.children {
        if let Constituent::Tree(sub) = c {
            sprinkle_tokens(sub, rng);
        }
    }
    if t.children.is_empty() && rng.gen_bool(0.5) {
        t.children.push(Constituent::Token(format!("w{}", rng.gen_range(0..5))));
    }
}

/// Postorder labels and ancestor sets of a tree's nonterminals.
struct Flat {
    labels: Vec<String>,
    /// `anc[i][j]`: node `j` is a proper ancestor of node `i`.
    anc: Vec<Vec<bool>>,
}

fn flatten(t: &ConstituencyTree) -> Flat {
    /// Returns the postorder indices of `t`'s subtree.
    fn go(t: &ConstituencyTree, labels: &mut Vec<String>, ancestors: &mut Vec<Vec<usize>>) -> Vec<usize> {
        let mut below = Vec::new();
        for sub in t.subtrees() {
            below.extend(go(sub, labels, ancestors));
        }
        let me = labels.len();
        labels.push(t.label.clone());
        ancestors.push(Vec::new());
        for &d in &below {
            ancestors[d].push(me);
        }
        below.push(me);
        below
    }
    let mut labels = Vec::new();
    let mut ancestors = Vec::new();
    go(t, &mut labels, &mut ancestors);
    let n = labels.len();
    let mut anc = vec![vec![false; n]; n];
    for (i, list) in ancestors.iter().enumerate() {
        for &a in list {
            anc[i][a] = true;
        }
    }
    Flat { labels, anc }
}

/// Minimum unit-cost edit script by enumerating every order- and
/// ancestry-preserving node mapping. Exponential; meant for trees of at
/// most about 8 nonterminals.
pub fn brute_force_ted(a: &ConstituencyTree, b: &ConstituencyTree) -> usize {
    let fa = flatten(a);
    let fb = flatten(b);
    let (n, m) = (fa.labels.len(), fb.labels.len());
    let mut best = n + m;
    let mut pairs: Vec<(usize, usize)> = Vec::new();

    fn search(i: usize, min_j: usize, fa: &Flat, fb: &Flat, pairs: &mut Vec<(usize, usize)>, best: &mut usize) {
        let (n, m) = (fa.labels.len(), fb.labels.len());
        if i == n {
            let relabels = pairs.iter().filter(|(x, y)| fa.labels[*x] != fb.labels[*y]).count();
            let cost = relabels + (n - pairs.len()) + (m - pairs.len());
            *best = (*best).min(cost);
            return;
        }
        search(i + 1, min_j, fa, fb, pairs, best);
        for j in min_j..m {
            let consistent = pairs
                .iter()
                .all(|&(x, y)| fa.anc[i][x] == fb.anc[j][y] && fa.anc[x][i] == fb.anc[y][j]);
            if consistent {
                pairs.push((i, j));
                search(i + 1, j + 1, fa, fb, pairs, best);
                pairs.pop();
            }
        }
    }
    search(0, 0, &fa, &fb, &mut pairs, &mut best);
    best
}

/// Tree edit distance by the textbook forest recursion, memoized on
/// (forest, forest) pairs. Forests are lists of subtree ids. Independent of
/// the keyroot formulation and fast enough for parse trees of a few dozen
/// nodes.
pub struct ForestOracle {
    labels_a: Vec<String>,
    kids_a: Vec<Vec<usize>>,
    labels_b: Vec<String>,
    kids_b: Vec<Vec<usize>>,
    memo: HashMap<(Vec<usize>, Vec<usize>), usize>,
}

fn index_tree(t: &ConstituencyTree, labels: &mut Vec<String>, kids: &mut Vec<Vec<usize>>) -> usize {
    let me = labels.len();
    labels.push(t.label.clone());
    kids.push(Vec::new());
    let children: Vec<usize> = t.subtrees().map(|s| index_tree(s, labels, kids)).collect();
    kids[me] = children;
    me
}

impl ForestOracle {
    pub fn distance(a: &ConstituencyTree, b: &ConstituencyTree) -> usize {
        let mut o = ForestOracle {
            labels_a: Vec::new(),
            kids_a: Vec::new(),
            labels_b: Vec::new(),
            kids_b: Vec::new(),
            memo: HashMap::new(),
        };
        let ra = index_tree(a, &mut o.labels_a, &mut o.kids_a);
        let rb = index_tree(b, &mut o.labels_b, &mut o.kids_b);
        o.forest(vec![ra], vec![rb])
    }

    fn size_a(&self, f: &[usize]) -> usize {
        f.iter().map(|&v| 1 + self.size_a(&self.kids_a[v])).sum()
    }

    fn size_b(&self, f: &[usize]) -> usize {
        f.iter().map(|&v| 1 + self.size_b(&self.kids_b[v])).sum()
    }

    fn forest(&mut self, f: Vec<usize>, g: Vec<usize>) -> usize {
        if f.is_empty() {
            return self.size_b(&g);
        }
        if g.is_empty() {
            return self.size_a(&f);
        }
        if let Some(&d) = self.memo.get(&(f.clone(), g.clone())) {
            return d;
        }
        let v = *f.last().unwrap();
        let w = *g.last().unwrap();
        let f_minus_v: Vec<usize> = f[..f.len() - 1].iter().chain(&self.kids_a[v]).copied().collect();
        let g_minus_w: Vec<usize> = g[..g.len() - 1].iter().chain(&self.kids_b[w]).copied().collect();
        let delete = self.forest(f_minus_v, g.clone()) + 1;
        let insert = self.forest(f.clone(), g_minus_w) + 1;
        let relabel = usize::from(self.labels_a[v] != self.labels_b[w]);
        let matched = self.forest(f[..f.len() - 1].to_vec(), g[..g.len() - 1].to_vec())
            + self.forest(self.kids_a[v].clone(), self.kids_b[w].clone())
            + relabel;
        let d = delete.min(insert).min(matched);
        self.memo.insert((f, g), d);
        d
    }
}

/// Constituency parses of one source sentence and two paraphrases of it:
/// one that keeps the source's structure (machine-translation style) and
/// one that moves the main clause to the front (AMR re-rooting style).
pub mod contrast {
    pub const SOURCE: &str = "I know for them to approve this price, they'll need statistical documentation.";
    pub const SOURCE_PARSE: &str = "(ROOT (S (NP (PRP I)) (VP (VBP know) (SBAR (S (SBAR (IN for) (S (NP (PRP them)) (VP (TO to) (VP (VB approve) (NP (DT this) (NN price)))))) (, ,) (NP (PRP they)) (VP (MD 'll) (VP (VB need) (NP (JJ statistical) (NN documentation))))))) (. .)))";
    pub const NMT: &str = "I know that in order to accept this award, they'll need a statistical analysis.";
    pub const NMT_PARSE: &str = "(ROOT (S (NP (PRP I)) (VP (VBP know) (SBAR (IN that) (S (SBAR (IN in) (NN order) (S (VP (TO to) (VP (VB accept) (NP (DT this) (NN award)))))) (, ,) (NP (PRP they)) (VP (MD 'll) (VP (VB need) (NP (DT a) (JJ statistical) (NN analysis))))))) (. .)))";
    pub const AMR: &str = "They need statistical documentation to approve these prices, I know.";
    pub const AMR_PARSE: &str = "(ROOT (S (S (NP (PRP They)) (VP (VBP need) (NP (JJ statistical) (NN documentation)) (S (VP (TO to) (VP (VB approve) (NP (DT these) (NNS prices))))))) (, ,) (NP (PRP I)) (VP (VBP know)) (. .)))";
}

const WORDS: &[&str] = &[
    "alpha", "bravo", "charlie", "delta", "echo", "foxtrot", "golf", "hotel", "india", "juliet",
    "kilo", "lima", "mike", "november", "oscar", "papa", "quebec", "romeo", "sierra", "tango",
    "uniform", "victor", "whiskey", "xray", "yankee", "zulu",
];

/// A sentence of `n` distinct words, capitalized and ending in a period.
pub fn sentence_of(n: usize, offset: usize) -> String {
    let words: Vec<&str> = (0..n).map(|i| WORDS[(i + offset) % WORDS.len()]).collect();
    let mut s = words.join(" ");
    s[..1].make_ascii_uppercase();
    s.push('.');
    s
}

/// Word counts of the ten-sentence mock corpus. Under the mock adapters a
/// sentence of `n` words becomes a star graph with `min(8, n - 1)` foci,
/// and each realization has `n + 1` tokens, so perplexity `10 (n + 1)`.
pub const CORPUS_LENGTHS: [usize; 10] = [3, 11, 12, 5, 13, 2, 1, 11, 4, 20];

pub fn mock_corpus() -> Vec<(String, String)> {
    CORPUS_LENGTHS
        .iter()
        .enumerate()
        .map(|(i, &n)| (format!("s{}", i + 1), sentence_of(n, i)))
        .collect()
}
