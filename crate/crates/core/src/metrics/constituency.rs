use std::fmt;

use super::MetricsError;

/// A labeled ordered tree read from a bracketed parse such as
/// `(ROOT (S (NP (PRP I)) (VP (VBP know))))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstituencyTree {
    pub label: String,
    pub children: Vec<Constituent>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Constituent {
    Tree(ConstituencyTree),
    /// A terminal token.
    Token(String),
}

impl ConstituencyTree {
    pub fn new(label: impl Into<String>, children: Vec<Constituent>) -> Self {
        ConstituencyTree {
            label: label.into(),
            children,
        }
    }

    pub fn subtrees(&self) -> impl Iterator<Item = &ConstituencyTree> {
        self.children.iter().filter_map(|c| match c {
            Constituent::Tree(t) => Some(t),
            Constituent::Token(_) => None,
        })
    }

    /// Number of nonterminal layers; a lone root has height 1.
    pub fn height(&self) -> usize {
        1 + self.subtrees().map(Self::height).max().unwrap_or(0)
    }

    /// Number of nonterminal nodes.
    pub fn size(&self) -> usize {
        1 + self.subtrees().map(Self::size).sum::<usize>()
    }

    pub fn terminals(&self) -> Vec<&str> {
        let mut out = Vec::new();
        fn walk<'a>(t: &'a ConstituencyTree, out: &mut Vec<&'a str>) {
            for c in &t.children {
                match c {
                    Constituent::Tree(sub) => walk(sub, out),
                    Constituent::Token(tok) => out.push(tok),
                }
            }
        }
        walk(self, &mut out);
        out
    }

    /// The same tree with every terminal token removed.
    pub fn strip_terminals(&self) -> ConstituencyTree {
        ConstituencyTree {
            label: self.label.clone(),
            children: self
                .subtrees()
                .map(|t| Constituent::Tree(t.strip_terminals()))
                .collect(),
        }
    }
}

impl fmt::Display for ConstituencyTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.label)?;
        for c in &self.children {
            match c {
                Constituent::Tree(t) => write!(f, " {t}")?,
                Constituent::Token(tok) => write!(f, " {tok}")?,
            }
        }
        f.write_str(")")
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok<'a> {
    Open,
    Close,
    Atom(&'a str),
}

fn lex(text: &str) -> Vec<(usize, Tok<'_>)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in text.char_indices() {
        if c == '(' || c == ')' || c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s, Tok::Atom(&text[s..i])));
            }
            match c {
                '(' => out.push((i, Tok::Open)),
                ')' => out.push((i, Tok::Close)),
                _ => {}
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s, Tok::Atom(&text[s..])));
    }
    out
}

/// Reads one bracketed tree. A bracket without a label, as in the outer
/// `( (S …) )` of treebank files, is labeled `ROOT`.
pub fn parse_bracketed(text: &str) -> Result<ConstituencyTree, MetricsError> {
    let tokens = lex(text);
    let err = |offset: usize, message: &str| MetricsError::Bracket {
        offset,
        message: message.to_owned(),
    };
    if tokens.is_empty() {
        return Err(err(0, "empty input"));
    }
    let mut stack: Vec<ConstituencyTree> = Vec::new();
    let mut done: Option<ConstituencyTree> = None;
    let mut i = 0;
    while i < tokens.len() {
        let (offset, tok) = &tokens[i];
        if done.is_some() {
            return Err(err(*offset, "text after the end of the tree"));
        }
        match tok {
            Tok::Open => {
                let label = match tokens.get(i + 1) {
                    Some((_, Tok::Atom(a))) => {
                        i += 1;
                        (*a).to_owned()
                    }
                    Some((_, Tok::Open)) => "ROOT".to_owned(),
                    Some((o, Tok::Close)) => return Err(err(*o, "empty brackets")),
                    None => return Err(err(text.len(), "unbalanced brackets")),
                };
                stack.push(ConstituencyTree::new(label, Vec::new()));
            }
            Tok::Close => {
                let node = stack.pop().ok_or_else(|| err(*offset, "unmatched ')'"))?;
                match stack.last_mut() {
                    Some(parent) => parent.children.push(Constituent::Tree(node)),
                    None => done = Some(node),
                }
            }
            Tok::Atom(a) => match stack.last_mut() {
                Some(parent) => parent.children.push(Constituent::Token((*a).to_owned())),
                None => return Err(err(*offset, "token outside brackets")),
            },
        }
        i += 1;
    }
    done.ok_or_else(|| err(text.len(), "unbalanced brackets"))
}

/// Keeps the top `d` layers of `tree` (the root is layer 1; `d = 0` is
/// treated as 1). Terminals survive only under nodes that are kept.
pub fn truncate_depth(tree: &ConstituencyTree, d: usize) -> ConstituencyTree {
    let d = d.max(1);
    ConstituencyTree {
        label: tree.label.clone(),
        children: tree
            .children
            .iter()
            .filter_map(|c| match c {
                Constituent::Tree(t) if d > 1 => Some(Constituent::Tree(truncate_depth(t, d - 1))),
                Constituent::Tree(_) => None,
                Constituent::Token(tok) => Some(Constituent::Token(tok.clone())),
            })
            .collect(),
    }
}
