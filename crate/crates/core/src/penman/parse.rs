use std::collections::HashSet;

use super::graph::{AmrGraph, Literal, Variable};
use super::lexer::{lex, Token, TokenKind};
use super::role::Role;
use super::tree::{Branch, BranchTarget, PenmanNode, PenmanTree};
use super::PenmanError;

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    end: (usize, usize),
    expanded: HashSet<String>,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn error(&self, expected: &str) -> PenmanError {
        match self.peek() {
            Some(tok) => PenmanError::Syntax {
                line: tok.line,
                column: tok.column,
                expected: expected.to_owned(),
                found: format!("'{}'", tok.kind),
            },
            None => PenmanError::Syntax {
                line: self.end.0,
                column: self.end.1,
                expected: expected.to_owned(),
                found: "end of input".to_owned(),
            },
        }
    }

    fn expect(&mut self, kind: &TokenKind, expected: &str) -> Result<(), PenmanError> {
        match self.peek() {
            Some(tok) if &tok.kind == kind => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.error(expected)),
        }
    }

    fn symbol(&mut self, expected: &str) -> Result<(String, usize, usize), PenmanError> {
        match self.peek() {
            Some(Token {
                kind: TokenKind::Symbol(s),
                line,
                column,
            }) => {
                let out = (s.clone(), *line, *column);
                self.pos += 1;
                Ok(out)
            }
            _ => Err(self.error(expected)),
        }
    }

    fn node(&mut self) -> Result<PenmanNode, PenmanError> {
        self.expect(&TokenKind::LParen, "'('")?;
        let (name, line, column) = self.symbol("variable")?;
        let variable = Variable::new(name.clone()).map_err(|_| PenmanError::Syntax {
            line,
            column,
            expected: "variable".into(),
            found: format!("'{name}'"),
        })?;
        if !self.expanded.insert(name) {
            return Err(PenmanError::DuplicateInstance {
                variable: variable.to_string(),
                line,
                column,
            });
        }
        self.expect(&TokenKind::Slash, "'/'")?;
        let (concept, _, _) = self.symbol("concept")?;
        let mut node = PenmanNode::new(variable, concept);
        loop {
            let role = match self.peek() {
                Some(Token {
                    kind: TokenKind::Role(r),
                    ..
                }) => Role::new(r),
                Some(Token {
                    kind: TokenKind::RParen,
                    ..
                }) => break,
                _ => return Err(self.error("role or ')'")),
            };
            self.pos += 1;
            let target = match self.peek().map(|t| &t.kind) {
                Some(TokenKind::LParen) => BranchTarget::Node(self.node()?),
                Some(TokenKind::Symbol(s)) => {
                    let lit = Literal::Symbol(s.clone());
                    self.pos += 1;
                    BranchTarget::Literal(lit)
                }
                Some(TokenKind::Str(s)) => {
                    let lit = Literal::String(s.clone());
                    self.pos += 1;
                    BranchTarget::Literal(lit)
                }
                _ => return Err(self.error("node, variable, or constant")),
            };
            node.children.push(Branch { role, target });
        }
        self.expect(&TokenKind::RParen, "')'")?;
        Ok(node)
    }
}

/// Parses one PENMAN expression into its serialization tree. `first_line`
/// is the line number error positions start from.
pub fn parse_tree_at(text: &str, first_line: usize) -> Result<PenmanTree, PenmanError> {
    let tokens = lex(text, first_line)?;
    if tokens.is_empty() {
        return Err(PenmanError::Empty);
    }
    let last_line = first_line + text.lines().count().saturating_sub(1);
    let last_col = text.lines().last().map_or(0, |l| l.chars().count()) + 1;
    let mut parser = Parser {
        tokens,
        pos: 0,
        end: (last_line, last_col),
        expanded: HashSet::new(),
    };
    let root = parser.node()?;
    if parser.peek().is_some() {
        return Err(parser.error("end of input"));
    }
    let mut tree = PenmanTree::new(root);
    tree.resolve_mentions();
    Ok(tree)
}

pub fn parse_tree(text: &str) -> Result<PenmanTree, PenmanError> {
    parse_tree_at(text, 1)
}

/// Parses a single PENMAN expression into a validated graph whose triples
/// follow first-encounter order in the text.
pub fn parse_penman(text: &str) -> Result<AmrGraph, PenmanError> {
    parse_tree(text)?.to_graph()
}

/// A graph together with the comment lines that preceded it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotatedGraph {
    pub comments: Vec<String>,
    pub graph: AmrGraph,
}

impl AnnotatedGraph {
    /// Value of a `# ::key value` metadata line.
    pub fn metadata(&self, key: &str) -> Option<&str> {
        let tag = format!("::{key}");
        self.comments.iter().find_map(|c| {
            let rest = c.trim_start_matches('#').trim_start();
            let rest = rest.strip_prefix(&tag)?;
            (rest.is_empty() || rest.starts_with(char::is_whitespace)).then(|| rest.trim())
        })
    }
}

/// One blank-line-separated block of a multi-graph file.
#[derive(Debug)]
pub struct DocumentEntry {
    /// 1-based line where the block starts.
    pub line: usize,
    pub result: Result<AnnotatedGraph, PenmanError>,
}

/// Splits a file into blank-line-separated graphs and parses each one
/// independently. Blocks holding only comments are skipped.
pub fn parse_document(text: &str) -> Vec<DocumentEntry> {
    let mut entries = Vec::new();
    let mut block: Vec<&str> = Vec::new();
    let mut start = 1;
    let lines: Vec<&str> = text.lines().collect();
    for (i, line) in lines.iter().enumerate() {
        if line.trim().is_empty() {
            flush(&mut block, start, &mut entries);
            start = i + 2;
        } else {
            block.push(line);
        }
    }
    flush(&mut block, start, &mut entries);
    entries
}

fn flush(block: &mut Vec<&str>, start: usize, entries: &mut Vec<DocumentEntry>) {
    if block.is_empty() {
        return;
    }
    let comments: Vec<String> = block
        .iter()
        .filter(|l| l.trim_start().starts_with('#'))
        .map(|l| l.trim().to_owned())
        .collect();
    if comments.len() == block.len() {
        block.clear();
        return;
    }
    let text = block.join("\n");
    let result = parse_tree_at(&text, start)
        .and_then(|tree| tree.to_graph())
        .map(|graph| AnnotatedGraph { comments, graph });
    entries.push(DocumentEntry {
        line: start,
        result,
    });
    block.clear();
}
