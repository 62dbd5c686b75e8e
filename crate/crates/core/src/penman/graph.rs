use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::role::{invert_role, Role};
use super::PenmanError;

/// A node identifier such as `z3`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Variable(String);

impl Variable {
    pub fn new(name: impl Into<String>) -> Result<Self, PenmanError> {
        let name = name.into();
        if name.is_empty()
            || name
                .chars()
                .any(|c| c.is_whitespace() || matches!(c, '(' | ')' | '/' | ':' | '"'))
        {
            return Err(PenmanError::InvalidVariable(name));
        }
        Ok(Variable(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for Variable {
    type Err = PenmanError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Variable::new(s)
    }
}

impl TryFrom<String> for Variable {
    type Error = PenmanError;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        Variable::new(value)
    }
}

impl From<Variable> for String {
    fn from(value: Variable) -> Self {
        value.0
    }
}

/// A constant that is not a concept.
///
/// String contents are kept exactly as written between the quotes, escapes
/// included, so serialization reproduces the input.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Literal {
    String(String),
    Symbol(String),
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::String(s) => write!(f, "\"{s}\""),
            Literal::Symbol(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Target {
    Variable(Variable),
    Concept(String),
    Literal(Literal),
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Variable(v) => v.fmt(f),
            Target::Concept(c) => f.write_str(c),
            Target::Literal(l) => l.fmt(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub source: Variable,
    pub role: Role,
    pub target: Target,
}

impl Triple {
    pub fn instance(variable: Variable, concept: impl Into<String>) -> Self {
        Triple {
            source: variable,
            role: Role::instance(),
            target: Target::Concept(concept.into()),
        }
    }

    pub fn edge(source: Variable, role: Role, target: Variable) -> Self {
        Triple {
            source,
            role,
            target: Target::Variable(target),
        }
    }

    pub fn attribute(source: Variable, role: Role, value: Literal) -> Self {
        Triple {
            source,
            role,
            target: Target::Literal(value),
        }
    }

    pub fn is_instance(&self) -> bool {
        self.role.is_instance()
    }

    pub fn is_edge(&self) -> bool {
        matches!(self.target, Target::Variable(_)) && !self.is_instance()
    }

    pub fn is_attribute(&self) -> bool {
        matches!(self.target, Target::Literal(_))
    }

    pub fn target_variable(&self) -> Option<&Variable> {
        match &self.target {
            Target::Variable(v) => Some(v),
            _ => None,
        }
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.source, self.role.as_str(), self.target)
    }
}

/// Rewrites an inverted edge into its base orientation; other triples pass
/// through unchanged.
pub fn normalize_edge(triple: &Triple) -> Triple {
    match &triple.target {
        Target::Variable(target) if triple.role.is_inverted() => match invert_role(&triple.role) {
            Ok(role) => Triple::edge(target.clone(), role, triple.source.clone()),
            Err(_) => triple.clone(),
        },
        _ => triple.clone(),
    }
}

/// A broken graph invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    MissingInstance { variable: Variable },
    DuplicateInstance { variable: Variable, count: usize },
    Unreachable { variable: Variable },
    TopNotSource { top: Variable },
    ConceptOutsideInstance { triple: Triple },
    InstanceWithoutConcept { triple: Triple },
    InvertedAttribute { triple: Triple },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MissingInstance { variable } => {
                write!(f, "missing-instance: variable {variable} has no instance triple")
            }
            Violation::DuplicateInstance { variable, count } => {
                write!(f, "duplicate-instance: variable {variable} has {count} instance triples")
            }
            Violation::Unreachable { variable } => {
                write!(f, "connectivity: variable {variable} is not reachable from the top")
            }
            Violation::TopNotSource { top } => {
                write!(f, "top: {top} is not the source of any triple")
            }
            Violation::ConceptOutsideInstance { triple } => {
                write!(f, "concept-target: {triple} has a concept target but is not an instance")
            }
            Violation::InstanceWithoutConcept { triple } => {
                write!(f, "instance-target: {triple} does not point at a concept")
            }
            Violation::InvertedAttribute { triple } => {
                write!(f, "inverted-attribute: {triple} inverts a constant-valued role")
            }
        }
    }
}

/// A rooted AMR graph: a top variable plus an ordered list of triples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AmrGraph {
    top: Variable,
    triples: Vec<Triple>,
}

impl AmrGraph {
    /// Builds a graph and checks every invariant.
    pub fn new(top: Variable, triples: Vec<Triple>) -> Result<Self, PenmanError> {
        let graph = AmrGraph { top, triples };
        let violations = validate(&graph);
        if violations.is_empty() {
            Ok(graph)
        } else {
            Err(PenmanError::Invalid(violations))
        }
    }

    /// Builds a graph without validation. Use [`validate`] to inspect it.
    pub fn new_unchecked(top: Variable, triples: Vec<Triple>) -> Self {
        AmrGraph { top, triples }
    }

    pub fn top(&self) -> &Variable {
        &self.top
    }

    pub fn triples(&self) -> &[Triple] {
        &self.triples
    }

    pub fn instances(&self) -> impl Iterator<Item = &Triple> {
        self.triples.iter().filter(|t| t.is_instance())
    }

    pub fn edges(&self) -> impl Iterator<Item = &Triple> {
        self.triples.iter().filter(|t| t.is_edge())
    }

    pub fn attributes(&self) -> impl Iterator<Item = &Triple> {
        self.triples.iter().filter(|t| t.is_attribute())
    }

    /// Instance-bearing variables in instance-triple order.
    pub fn variables(&self) -> Vec<&Variable> {
        self.instances().map(|t| &t.source).collect()
    }

    pub fn concept_of(&self, variable: &Variable) -> Option<&str> {
        self.instances()
            .find(|t| &t.source == variable)
            .and_then(|t| match &t.target {
                Target::Concept(c) => Some(c.as_str()),
                _ => None,
            })
    }

    pub fn has_variable(&self, variable: &Variable) -> bool {
        self.instances().any(|t| &t.source == variable)
    }

    /// The graph's normalized triples, sorted. Two graphs are equal under
    /// [`graph_equal`] iff their keys are.
    pub fn normalized_key(&self) -> Vec<Triple> {
        let mut key: Vec<Triple> = self.triples.iter().map(normalize_edge).collect();
        key.sort();
        key
    }

    /// A variable name `zN` not yet used, with N one past the largest
    /// existing `z` index.
    pub fn fresh_variable(&self) -> Variable {
        let next = self
            .triples
            .iter()
            .flat_map(|t| std::iter::once(&t.source).chain(t.target_variable()))
            .filter_map(|v| v.as_str().strip_prefix('z')?.parse::<u64>().ok())
            .max()
            .map_or(1, |n| n + 1);
        Variable(format!("z{next}"))
    }
}

/// True iff the normalized triple multisets match; top and order are ignored.
pub fn graph_equal(a: &AmrGraph, b: &AmrGraph) -> bool {
    a.triples.len() == b.triples.len() && a.normalized_key() == b.normalized_key()
}

/// Lists every broken graph invariant; empty when the graph is well formed.
pub fn validate(graph: &AmrGraph) -> Vec<Violation> {
    let mut violations = Vec::new();

    let mut mentioned: Vec<&Variable> = Vec::new();
    let mut seen = HashSet::new();
    for triple in &graph.triples {
        for v in std::iter::once(&triple.source).chain(triple.target_variable()) {
            if seen.insert(v) {
                mentioned.push(v);
            }
        }
    }

    let mut instance_count: HashMap<&Variable, usize> = HashMap::new();
    for triple in &graph.triples {
        match (&triple.target, triple.is_instance()) {
            (Target::Concept(_), true) => *instance_count.entry(&triple.source).or_default() += 1,
            (Target::Concept(_), false) => violations.push(Violation::ConceptOutsideInstance {
                triple: triple.clone(),
            }),
            (_, true) => violations.push(Violation::InstanceWithoutConcept {
                triple: triple.clone(),
            }),
            (Target::Literal(_), false) if triple.role.is_inverted() => {
                violations.push(Violation::InvertedAttribute {
                    triple: triple.clone(),
                })
            }
            _ => {}
        }
    }
    for v in &mentioned {
        match instance_count.get(v).copied().unwrap_or(0) {
            0 => violations.push(Violation::MissingInstance {
                variable: (*v).clone(),
            }),
            1 => {}
            count => violations.push(Violation::DuplicateInstance {
                variable: (*v).clone(),
                count,
            }),
        }
    }

    if !graph.triples.iter().any(|t| t.source == graph.top) {
        violations.push(Violation::TopNotSource {
            top: graph.top.clone(),
        });
    }

    let mut neighbours: HashMap<&Variable, Vec<&Variable>> = HashMap::new();
    for triple in graph.edges() {
        let target = triple.target_variable().expect("edge target");
        neighbours.entry(&triple.source).or_default().push(target);
        neighbours.entry(target).or_default().push(&triple.source);
    }
    let mut reached: HashSet<&Variable> = HashSet::new();
    let mut queue = VecDeque::from([&graph.top]);
    reached.insert(&graph.top);
    while let Some(v) = queue.pop_front() {
        for n in neighbours.get(v).into_iter().flatten() {
            if reached.insert(n) {
                queue.push_back(n);
            }
        }
    }
    for v in mentioned {
        if !reached.contains(v) {
            violations.push(Violation::Unreachable {
                variable: v.clone(),
            });
        }
    }

    violations
}
