use std::collections::HashSet;

use super::graph::{AmrGraph, Literal, Triple, Variable};
use super::role::Role;
use super::PenmanError;

/// The serialization tree a PENMAN string denotes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PenmanTree {
    pub root: PenmanNode,
}

/// An expanded variable: `(variable / concept children…)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PenmanNode {
    pub variable: Variable,
    pub concept: String,
    pub children: Vec<Branch>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Branch {
    pub role: Role,
    pub target: BranchTarget,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BranchTarget {
    Node(PenmanNode),
    /// A bare reference to a variable expanded elsewhere.
    Mention(Variable),
    Literal(Literal),
}

impl PenmanNode {
    pub fn new(variable: Variable, concept: impl Into<String>) -> Self {
        PenmanNode {
            variable,
            concept: concept.into(),
            children: Vec::new(),
        }
    }

    fn collect_triples(&self, out: &mut Vec<Triple>) {
        out.push(Triple::instance(self.variable.clone(), self.concept.clone()));
        for branch in &self.children {
            match &branch.target {
                BranchTarget::Node(child) => {
                    out.push(Triple::edge(
                        self.variable.clone(),
                        branch.role.clone(),
                        child.variable.clone(),
                    ));
                    child.collect_triples(out);
                }
                BranchTarget::Mention(v) => out.push(Triple::edge(
                    self.variable.clone(),
                    branch.role.clone(),
                    v.clone(),
                )),
                BranchTarget::Literal(l) => out.push(Triple::attribute(
                    self.variable.clone(),
                    branch.role.clone(),
                    l.clone(),
                )),
            }
        }
    }

    fn walk<'a>(&'a self, f: &mut dyn FnMut(&'a PenmanNode)) {
        f(self);
        for branch in &self.children {
            if let BranchTarget::Node(child) = &branch.target {
                child.walk(f);
            }
        }
    }
}

impl PenmanTree {
    pub fn new(root: PenmanNode) -> Self {
        PenmanTree { root }
    }

    pub fn top(&self) -> &Variable {
        &self.root.variable
    }

    /// Triples in depth-first order, each edge in the orientation it is
    /// written in the tree.
    pub fn triples(&self) -> Vec<Triple> {
        let mut out = Vec::new();
        self.root.collect_triples(&mut out);
        out
    }

    /// Expanded variables in depth-first order.
    pub fn expanded(&self) -> Vec<&Variable> {
        let mut out = Vec::new();
        self.root.walk(&mut |n| out.push(&n.variable));
        out
    }

    /// Variables appearing as bare mentions, in depth-first order.
    pub fn mentions(&self) -> Vec<&Variable> {
        let mut out = Vec::new();
        self.root.walk(&mut |n| {
            for branch in &n.children {
                if let BranchTarget::Mention(v) = &branch.target {
                    out.push(v);
                }
            }
        });
        out
    }

    pub fn to_graph(&self) -> Result<AmrGraph, PenmanError> {
        AmrGraph::new(self.root.variable.clone(), self.triples())
    }

    /// Turns symbol constants naming an expanded variable into mentions.
    pub(crate) fn resolve_mentions(&mut self) {
        let expanded: HashSet<String> =
            self.expanded().into_iter().map(|v| v.as_str().to_owned()).collect();
        fn visit(node: &mut PenmanNode, expanded: &HashSet<String>) {
            for branch in &mut node.children {
                match &mut branch.target {
                    BranchTarget::Node(child) => visit(child, expanded),
                    BranchTarget::Literal(Literal::Symbol(s)) if expanded.contains(s.as_str()) => {
                        if let Ok(v) = Variable::new(s.clone()) {
                            branch.target = BranchTarget::Mention(v);
                        }
                    }
                    _ => {}
                }
            }
        }
        visit(&mut self.root, &expanded);
    }
}

/// Layout options for [`serialize`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Style {
    /// Spaces per depth level; `None` writes the whole graph on one line.
    pub indent: Option<usize>,
}

impl Default for Style {
    fn default() -> Self {
        Style { indent: Some(4) }
    }
}

impl Style {
    pub fn single_line() -> Self {
        Style { indent: None }
    }
}

/// Writes `tree` in PENMAN notation, one role per line under the default
/// style. Every variable in the tree must have an instance in `graph`.
pub fn serialize(graph: &AmrGraph, tree: &PenmanTree, style: Style) -> Result<String, PenmanError> {
    let known: HashSet<&Variable> = graph.variables().into_iter().collect();
    for v in tree.expanded().into_iter().chain(tree.mentions()) {
        if !known.contains(v) {
            return Err(PenmanError::UnknownVariable(v.to_string()));
        }
    }
    Ok(write_tree(tree, style))
}

/// Writes a tree without checking it against a graph.
pub fn write_tree(tree: &PenmanTree, style: Style) -> String {
    let mut out = String::new();
    write_node(&tree.root, 0, style, &mut out);
    out
}

fn write_node(node: &PenmanNode, depth: usize, style: Style, out: &mut String) {
    out.push('(');
    out.push_str(node.variable.as_str());
    out.push_str(" / ");
    out.push_str(&node.concept);
    for branch in &node.children {
        match style.indent {
            Some(width) => {
                out.push('\n');
                out.extend(std::iter::repeat_n(' ', width * (depth + 1)));
            }
            None => out.push(' '),
        }
        out.push_str(&branch.role.to_string());
        out.push(' ');
        match &branch.target {
            BranchTarget::Node(child) => write_node(child, depth + 1, style, out),
            BranchTarget::Mention(v) => out.push_str(v.as_str()),
            BranchTarget::Literal(l) => out.push_str(&l.to_string()),
        }
    }
    out.push(')');
}
