//! Text format: `n` on the first line, then `n` space-separated parent ids
//! (`0` for the root) on the second, each line newline-terminated.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use super::{Tree, TreeError};

/// A parse failure with its 1-based line and 1-based position. For the
/// parent line the position is the entry index; otherwise it is a column.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("line {line}, position {position}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub position: usize,
    pub message: String,
    /// Set when the text was well-formed but does not describe a tree.
    pub structure: Option<TreeError>,
}

impl ParseError {
    pub(crate) fn new(line: usize, position: usize, message: impl Into<String>) -> Self {
        ParseError { line, position, message: message.into(), structure: None }
    }
}

/// Parses a non-negative decimal without sign or leading `+`.
pub(crate) fn parse_decimal(token: &str) -> Option<u64> {
    if token.is_empty() || !token.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    token.parse().ok()
}

impl Tree {
    pub fn parse(text: &str) -> Result<Tree, ParseError> {
        if !text.is_ascii() {
            let col = text.find(|c: char| !c.is_ascii()).unwrap_or(0) + 1;
            return Err(ParseError::new(1, col, "non-ASCII input"));
        }
        let body = text.strip_suffix('\n').unwrap_or(text);
        let mut lines = body.split('\n');
        let header = lines.next().unwrap_or("");
        let n = parse_decimal(header)
            .ok_or_else(|| ParseError::new(1, 1, format!("expected node count, found {header:?}")))?;
        if n == 0 {
            return Err(ParseError::new(1, 1, "node count must be at least 1"));
        }
        let Some(line) = lines.next() else {
            return Err(ParseError::new(2, 1, "missing parent line"));
        };
        if lines.next().is_some() {
            return Err(ParseError::new(3, 1, "unexpected content after the parent line"));
        }

        let mut parent = Vec::with_capacity(n.min(1 << 20) as usize);
        for (i, token) in line.split(' ').enumerate() {
            let value = parse_decimal(token).ok_or_else(|| {
                ParseError::new(2, i + 1, format!("expected a parent id, found {token:?}"))
            })?;
            if value > u32::MAX as u64 {
                return Err(ParseError::new(2, i + 1, format!("parent id {value} is too large")));
            }
            parent.push(value as u32);
        }
        if parent.len() as u64 != n {
            return Err(ParseError::new(
                2,
                parent.len().min(n as usize) + 1,
                format!("expected {n} parent entries, found {}", parent.len()),
            ));
        }
        Tree::from_parents(parent).map_err(|e| {
            let position = match &e {
                TreeError::MultipleRoots(_, second) => second.get() as usize,
                TreeError::SelfParent(x) | TreeError::Cycle(x) => x.get() as usize,
                TreeError::ParentOutOfRange { node, .. } => node.get() as usize,
                _ => 1,
            };
            ParseError { line: 2, position, message: e.to_string(), structure: Some(e) }
        })
    }

    /// The text form; `Tree::parse(&t.to_text()) == Ok(t)`.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.len())?;
        for (i, p) in self.parent.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{p}")?;
        }
        writeln!(f)
    }
}

impl FromStr for Tree {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Tree::parse(s)
    }
}
