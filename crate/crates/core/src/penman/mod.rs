//! PENMAN notation: graph model, role inversion, parsing and serialization.

mod graph;
mod lexer;
mod parse;
mod role;
mod tree;

use thiserror::Error;

pub use graph::{
    graph_equal, normalize_edge, validate, AmrGraph, Literal, Target, Triple, Variable, Violation,
};
pub use lexer::token_stream;
pub use parse::{
    parse_document, parse_penman, parse_tree, parse_tree_at, AnnotatedGraph, DocumentEntry,
};
pub use role::{invert_role, Role, RoleRegistry};
pub use tree::{serialize, write_tree, Branch, BranchTarget, PenmanNode, PenmanTree, Style};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PenmanError {
    #[error("line {line}, column {column}: expected {expected}, found {found}")]
    Syntax {
        line: usize,
        column: usize,
        expected: String,
        found: String,
    },
    #[error("line {line}, column {column}: variable {variable} is instantiated more than once")]
    DuplicateInstance {
        variable: String,
        line: usize,
        column: usize,
    },
    #[error("empty input: no PENMAN expression found")]
    Empty,
    #[error("invalid graph: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("role :{0} cannot be inverted")]
    NonInvertibleRole(String),
    #[error("invalid variable name {0:?}")]
    InvalidVariable(String),
    #[error("variable {0} does not occur in the graph")]
    UnknownVariable(String),
}
