//! Changing the focus of an AMR graph and linearizing the result.
//!
//! Re-rooting picks a spanning tree of the undirected graph from the new
//! focus. Tree edges that run against their stored direction are inverted
//! (`ARG1` becomes `ARG1-of`); every other edge keeps its orientation and is
//! written as a bare variable mention.
//!
//! The spanning tree is grown depth-first. From each expanded node, edges
//! stored as leaving that node are followed immediately, in triple order.
//! Edges stored as entering it are deferred and only followed, first in
//! first out, once nothing else is left to expand and only if the node at
//! the far end is still unvisited. Children are written in triple order,
//! stored-direction edges first, except at the focus itself where the
//! inverted edges lead.

use std::collections::{HashMap, VecDeque};

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::penman::{
    invert_role, serialize, AmrGraph, Branch, BranchTarget, Literal, PenmanError, PenmanNode,
    PenmanTree, Style, Target, Triple, Variable,
};

/// Variants generated per source graph when no count is given.
pub const DEFAULT_FOCI: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RefocusError {
    #[error("variable {0} does not occur in the graph")]
    UnknownVariable(String),
    #[error("{0} is a constant, not a concept node, and cannot be the focus")]
    NotFocusable(String),
    #[error("variables not reachable from {top}: {}", .missing.join(", "))]
    Unreachable { top: String, missing: Vec<String> },
    #[error(transparent)]
    Penman(#[from] PenmanError),
}

/// A re-rooted graph and its linearization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FocusVariant {
    pub focus: Variable,
    pub concept: String,
    pub graph: AmrGraph,
    pub linearized: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Side {
    Stored,
    Inverted,
}

#[derive(Debug, Clone, Copy)]
enum Incident {
    Out { triple: usize, other: usize },
    In { triple: usize, other: usize },
    Attr { triple: usize },
}

#[derive(Debug, Clone, Copy)]
enum Slot {
    Child(usize),
    Mention(usize),
    Literal,
}

#[derive(Debug, Clone, Copy)]
struct Placement {
    triple: usize,
    side: Side,
    slot: Slot,
}

struct Layout<'g> {
    graph: &'g AmrGraph,
    nodes: Vec<(&'g Variable, &'g str)>,
    incident: Vec<Vec<Incident>>,
    visited: Vec<bool>,
    placed: Vec<Vec<Placement>>,
    deferred: VecDeque<(usize, usize)>,
}

impl<'g> Layout<'g> {
    fn new(graph: &'g AmrGraph) -> Result<Self, RefocusError> {
        let mut nodes = Vec::new();
        let mut index: HashMap<&Variable, usize> = HashMap::new();
        for triple in graph.instances() {
            if let Target::Concept(concept) = &triple.target {
                index.entry(&triple.source).or_insert_with(|| {
                    nodes.push((&triple.source, concept.as_str()));
                    nodes.len() - 1
                });
            }
        }
        let lookup = |v: &Variable| {
            index
                .get(v)
                .copied()
                .ok_or_else(|| RefocusError::UnknownVariable(v.to_string()))
        };
        let mut incident = vec![Vec::new(); nodes.len()];
        for (i, triple) in graph.triples().iter().enumerate() {
            if triple.is_instance() {
                continue;
            }
            let source = lookup(&triple.source)?;
            match triple.target_variable() {
                Some(target) => {
                    let target = lookup(target)?;
                    incident[source].push(Incident::Out {
                        triple: i,
                        other: target,
                    });
                    if target != source {
                        incident[target].push(Incident::In {
                            triple: i,
                            other: source,
                        });
                    }
                }
                None => incident[source].push(Incident::Attr { triple: i }),
            }
        }
        let n = nodes.len();
        Ok(Layout {
            graph,
            nodes,
            incident,
            visited: vec![false; n],
            placed: vec![Vec::new(); n],
            deferred: VecDeque::new(),
        })
    }

    fn index_of(&self, v: &Variable) -> Option<usize> {
        self.nodes.iter().position(|(var, _)| *var == v)
    }

    fn expand(&mut self, node: usize, via: Option<usize>) {
        for k in 0..self.incident[node].len() {
            match self.incident[node][k] {
                Incident::Out { triple, .. } | Incident::In { triple, .. }
                    if Some(triple) == via => {}
                Incident::Out { triple, other } => {
                    if self.visited[other] {
                        self.place(node, triple, Side::Stored, Slot::Mention(other));
                    } else {
                        self.visited[other] = true;
                        self.place(node, triple, Side::Stored, Slot::Child(other));
                        self.expand(other, Some(triple));
                    }
                }
                Incident::In { triple, .. } => self.deferred.push_back((node, triple)),
                Incident::Attr { triple } => self.place(node, triple, Side::Stored, Slot::Literal),
            }
        }
    }

    fn place(&mut self, node: usize, triple: usize, side: Side, slot: Slot) {
        self.placed[node].push(Placement { triple, side, slot });
    }

    fn run(&mut self, top: usize) {
        self.visited[top] = true;
        self.expand(top, None);
        while let Some((node, triple)) = self.deferred.pop_front() {
            let other = self.incident[node]
                .iter()
                .find_map(|inc| match *inc {
                    Incident::In { triple: t, other } if t == triple => Some(other),
                    _ => None,
                })
                .expect("deferred edge is incident");
            if !self.visited[other] {
                self.visited[other] = true;
                self.place(node, triple, Side::Inverted, Slot::Child(other));
                self.expand(other, Some(triple));
            }
        }
    }

    fn build(&self, node: usize, top: usize) -> Result<PenmanNode, RefocusError> {
        let (variable, concept) = self.nodes[node];
        let mut placements = self.placed[node].clone();
        placements.sort_by_key(|p| {
            let leads = if node == top {
                p.side == Side::Inverted
            } else {
                p.side == Side::Stored
            };
            (!leads, p.triple)
        });
        let mut out = PenmanNode::new(variable.clone(), concept);
        for p in placements {
            let triple: &Triple = &self.graph.triples()[p.triple];
            let role = match p.side {
                Side::Stored => triple.role.clone(),
                Side::Inverted => invert_role(&triple.role)?,
            };
            let target = match p.slot {
                Slot::Child(child) => BranchTarget::Node(self.build(child, top)?),
                Slot::Mention(m) => BranchTarget::Mention(self.nodes[m].0.clone()),
                Slot::Literal => match &triple.target {
                    Target::Literal(l) => BranchTarget::Literal(l.clone()),
                    _ => unreachable!("attribute placement on a non-literal triple"),
                },
            };
            out.children.push(Branch { role, target });
        }
        Ok(out)
    }
}

fn check_focus(graph: &AmrGraph, focus: &Variable) -> Result<(), RefocusError> {
    if graph.has_variable(focus) {
        return Ok(());
    }
    let is_constant = graph.attributes().any(|t| {
        matches!(&t.target, Target::Literal(Literal::Symbol(s)) if s == focus.as_str())
    });
    if is_constant {
        Err(RefocusError::NotFocusable(focus.to_string()))
    } else {
        Err(RefocusError::UnknownVariable(focus.to_string()))
    }
}

/// The serialization tree of `graph` rooted at `top`.
pub fn build_spanning_tree(graph: &AmrGraph, top: &Variable) -> Result<PenmanTree, RefocusError> {
    check_focus(graph, top)?;
    let mut layout = Layout::new(graph)?;
    let root = layout
        .index_of(top)
        .ok_or_else(|| RefocusError::UnknownVariable(top.to_string()))?;
    layout.run(root);
    let missing: Vec<String> = layout
        .visited
        .iter()
        .enumerate()
        .filter(|(_, seen)| !**seen)
        .map(|(i, _)| layout.nodes[i].0.to_string())
        .collect();
    if !missing.is_empty() {
        return Err(RefocusError::Unreachable {
            top: top.to_string(),
            missing,
        });
    }
    Ok(PenmanTree::new(layout.build(root, root)?))
}

/// Re-roots `graph` at `new_top`. The result lists its triples in the order
/// its linearization writes them.
pub fn refocus(graph: &AmrGraph, new_top: &Variable) -> Result<AmrGraph, RefocusError> {
    Ok(build_spanning_tree(graph, new_top)?.to_graph()?)
}

/// Re-roots and linearizes `graph` at `focus`.
pub fn linearize(
    graph: &AmrGraph,
    focus: &Variable,
    style: Style,
) -> Result<FocusVariant, RefocusError> {
    let tree = build_spanning_tree(graph, focus)?;
    let refocused = tree.to_graph()?;
    let linearized = serialize(&refocused, &tree, style)?;
    Ok(FocusVariant {
        focus: focus.clone(),
        concept: tree.root.concept.clone(),
        graph: refocused,
        linearized,
    })
}

/// Up to `k` distinct foci, drawn uniformly without replacement from every
/// concept node except the current top.
pub fn enumerate_foci(graph: &AmrGraph, k: usize, seed: u64) -> Vec<Variable> {
    enumerate_foci_with(graph, k, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Foci for the `index`-th graph of a collection. Each graph draws from its
/// own stream of the seeded generator, so adding or removing one graph does
/// not change the foci picked for the others.
pub fn enumerate_foci_indexed(graph: &AmrGraph, k: usize, seed: u64, index: u64) -> Vec<Variable> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    enumerate_foci_with(graph, k, &mut rng)
}

pub fn enumerate_foci_with<R: rand::Rng + ?Sized>(
    graph: &AmrGraph,
    k: usize,
    rng: &mut R,
) -> Vec<Variable> {
    let eligible: Vec<&Variable> = graph
        .variables()
        .into_iter()
        .filter(|v| *v != graph.top())
        .collect();
    let amount = k.min(eligible.len());
    if amount == 0 {
        return Vec::new();
    }
    index::sample(rng, eligible.len(), amount)
        .into_iter()
        .map(|i| eligible[i].clone())
        .collect()
}

/// Linearizations of `graph` at each of `foci`, in order.
pub fn variants_for(
    graph: &AmrGraph,
    foci: &[Variable],
    style: Style,
) -> Result<Vec<FocusVariant>, RefocusError> {
    foci.iter().map(|f| linearize(graph, f, style)).collect()
}

/// Samples up to `k` foci and linearizes the graph at each.
pub fn variants(
    graph: &AmrGraph,
    k: usize,
    seed: u64,
    style: Style,
) -> Result<Vec<FocusVariant>, RefocusError> {
    variants_for(graph, &enumerate_foci(graph, k, seed), style)
}
