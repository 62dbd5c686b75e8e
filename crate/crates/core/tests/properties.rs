mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use reroot::metrics::{
    bleu, jaccard_diversity, parse_bracketed, ted, tokenize, truncate_depth, ConstituencyTree,
};
use reroot::penman::{
    graph_equal, invert_role, normalize_edge, parse_penman, parse_tree, serialize, token_stream,
    write_tree, BranchTarget, PenmanNode, Role, RoleRegistry, Style, Triple, Variable,
};
use reroot::refocus::{build_spanning_tree, enumerate_foci, linearize, refocus};

fn sorted<T: Ord + Clone>(v: &[T]) -> Vec<T> {
    let mut v = v.to_vec();
    v.sort();
    v
}

fn count_tree_edges(node: &PenmanNode) -> usize {
    node.children
        .iter()
        .map(|b| match &b.target {
            BranchTarget::Node(c) => 1 + count_tree_edges(c),
            _ => 0,
        })
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn penman_round_trip(seed in any::<u64>()) {
        let g = common::random_graph(seed, 20);
        for style in [Style::default(), Style::single_line(), Style { indent: Some(2) }] {
            let text = write_tree(&build_spanning_tree(&g, g.top()).unwrap(), style);
            let once = parse_penman(&text).unwrap();
            prop_assert!(graph_equal(&g, &once));
            prop_assert_eq!(once.top(), g.top());
            let tree = parse_tree(&text).unwrap();
            let again_text = serialize(&once, &tree, style).unwrap();
            prop_assert_eq!(token_stream(&again_text).unwrap(), token_stream(&text).unwrap());
            let twice = parse_penman(&again_text).unwrap();
            prop_assert_eq!(twice.normalized_key(), once.normalized_key());
            prop_assert_eq!(twice.top(), once.top());
        }
    }

    #[test]
    fn refocus_invariants(seed in any::<u64>()) {
        let g = common::random_graph(seed, 12);
        let attrs = sorted(&g.attributes().cloned().collect::<Vec<_>>());
        let vars = sorted(&g.variables().into_iter().cloned().collect::<Vec<_>>());
        for v in g.variables() {
            let tree = build_spanning_tree(&g, v).unwrap();
            let r = tree.to_graph().unwrap();
            prop_assert!(graph_equal(&g, &r));
            prop_assert_eq!(r.top(), v);
            prop_assert_eq!(r.instances().count(), g.instances().count());
            prop_assert_eq!(sorted(&r.attributes().cloned().collect::<Vec<_>>()), attrs.clone());
            prop_assert_eq!(sorted(&r.variables().into_iter().cloned().collect::<Vec<_>>()), vars.clone());
            prop_assert_eq!(sorted(&tree.expanded().into_iter().cloned().collect::<Vec<_>>()), vars.clone());
            let edges = g.edges().count();
            prop_assert_eq!(count_tree_edges(&tree.root), vars.len() - 1);
            prop_assert_eq!(tree.mentions().len(), edges - (vars.len() - 1));

            let lin = linearize(&g, v, Style::default()).unwrap();
            let prefix = format!("({v} /");
            prop_assert!(lin.linearized.starts_with(&prefix));
            prop_assert!(graph_equal(&parse_penman(&lin.linearized).unwrap(), &g));

            let back = refocus(&r, g.top()).unwrap();
            prop_assert!(graph_equal(&g, &back));
            prop_assert_eq!(back.top(), g.top());
        }
    }

    #[test]
    fn foci_sampling(seed in any::<u64>(), k in 1usize..15) {
        let g = common::random_graph(seed, 12);
        let picked = enumerate_foci(&g, k, seed);
        let eligible = g.variables().len() - 1;
        prop_assert_eq!(picked.len(), k.min(eligible));
        prop_assert!(!picked.contains(g.top()));
        prop_assert_eq!(sorted(&picked).windows(2).filter(|w| w[0] == w[1]).count(), 0);
        prop_assert_eq!(&picked, &enumerate_foci(&g, k, seed));
    }

    #[test]
    fn role_algebra(label in "[A-Za-z][A-Za-z0-9]{0,6}(-of)?") {
        let role = Role::new(label.as_str());
        if role.is_instance() {
            prop_assert!(invert_role(&role).is_err());
        } else {
            let inv = invert_role(&role).unwrap();
            prop_assert!(!inv.is_instance());
            prop_assert_ne!(inv.is_inverted(), role.is_inverted());
            prop_assert_eq!(invert_role(&inv).unwrap(), role.clone());
            let reg = RoleRegistry::with_non_invertible([label.as_str()]);
            prop_assert!(reg.invert(&role).is_err());
        }
        let a = Variable::new("a").unwrap();
        let b = Variable::new("b").unwrap();
        if !role.is_instance() {
            let t = Triple::edge(a.clone(), role.clone(), b.clone());
            let n = normalize_edge(&t);
            prop_assert_eq!(normalize_edge(&n), n.clone());
            let flipped = Triple::edge(b, invert_role(&role).unwrap(), a);
            prop_assert_eq!(normalize_edge(&flipped), n);
        }
    }

    #[test]
    fn tokenize_is_idempotent(text in "\\PC{0,40}") {
        let once = tokenize(&text);
        prop_assert_eq!(tokenize(&once.join(" ")), once);
    }

    #[test]
    fn lexical_ranges(a in prop::collection::vec("[a-d]", 0..12), b in prop::collection::vec("[a-d]", 0..12)) {
        let d = 1.0 - bleu(&a, &b);
        prop_assert!((0.0..=1.0).contains(&d));
        let j = jaccard_diversity(&a, &b);
        prop_assert!((0.0..=1.0).contains(&j));
        prop_assert_eq!(jaccard_diversity(&a, &a), 0.0);
        if !a.is_empty() {
            prop_assert_eq!(bleu(&a, &a), 1.0);
        }
    }

    #[test]
    fn ted_is_a_metric(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = common::random_tree(&mut rng, 10);
        let b = common::random_tree(&mut rng, 10);
        let c = common::random_tree(&mut rng, 10);
        prop_assert_eq!(ted(&a, &a), 0);
        prop_assert_eq!(ted(&a, &b), ted(&b, &a));
        prop_assert!(ted(&a, &c) <= ted(&a, &b) + ted(&b, &c));
        prop_assert!(ted(&a, &b) <= a.size() + b.size());
        if ted(&a, &b) == 0 {
            prop_assert_eq!(a.strip_terminals(), b.strip_terminals());
        }
    }

    #[test]
    fn truncation_and_bracket_round_trip(seed in any::<u64>(), d in 0usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = common::random_tree(&mut rng, 12);
        prop_assert_eq!(parse_bracketed(&t.to_string()).unwrap(), t.clone());
        let cut = truncate_depth(&t, d);
        prop_assert_eq!(truncate_depth(&cut, d), cut.clone());
        prop_assert!(cut.height() <= d.max(1));
        prop_assert!(is_prefix(&cut, &t));
        if d >= t.height() {
            prop_assert_eq!(cut, t);
        }
    }
}

fn is_prefix(small: &ConstituencyTree, big: &ConstituencyTree) -> bool {
    let s: Vec<_> = small.subtrees().collect();
    let b: Vec<_> = big.subtrees().collect();
    small.label == big.label
        && (s.is_empty() || (s.len() == b.len() && s.iter().zip(&b).all(|(x, y)| is_prefix(x, y))))
}
