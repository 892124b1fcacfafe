//! The push move, push sequences, and the ancestry order on trees that share
//! a node set and a root.
//!
//! `t.leq(s)` holds when every ancestor relation of `t` also holds in `s`.
//! That is the case exactly when `s` can be reached from `t` by pushes, and
//! [`Tree::push_witness`] builds such a sequence level by level: every
//! depth-one node of `t` that is not depth-one in `s` is pushed below its
//! unique depth-one ancestor in `s`, then each remaining subtree is handled
//! the same way.

use std::fmt;
use std::str::FromStr;

use super::text::{parse_decimal, ParseError};
use super::{NodeId, Tree, TreeError};

/// Reattach `node` below its sibling `target`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Push {
    pub node: NodeId,
    pub target: NodeId,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PushSequence {
    pub steps: Vec<Push>,
}

impl PushSequence {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn push(&mut self, node: NodeId, target: NodeId) {
        self.steps.push(Push { node, target });
    }

    /// Applies every step in order, failing at the first inapplicable one.
    pub fn apply(&self, t: &Tree) -> Result<Tree, TreeError> {
        let mut out = t.clone();
        for step in &self.steps {
            out.push_in_place(step.node, step.target)?;
        }
        Ok(out)
    }

    /// One `push x y` line per step.
    pub fn parse(text: &str) -> Result<PushSequence, ParseError> {
        let mut seq = PushSequence::new();
        for (i, line) in text.lines().enumerate() {
            let fields: Vec<&str> = line.split_whitespace().collect();
            let step = match fields.as_slice() {
                ["push", x, y] => parse_id(x).zip(parse_id(y)),
                _ => None,
            };
            let (node, target) = step
                .ok_or_else(|| ParseError::new(i + 1, 1, format!("expected `push x y`, found {line:?}")))?;
            seq.push(node, target);
        }
        Ok(seq)
    }
}

fn parse_id(token: &str) -> Option<NodeId> {
    parse_decimal(token)
        .and_then(|v| u32::try_from(v).ok())
        .and_then(NodeId::new)
}

impl fmt::Display for PushSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for step in &self.steps {
            writeln!(f, "push {} {}", step.node, step.target)?;
        }
        Ok(())
    }
}

impl FromStr for PushSequence {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PushSequence::parse(s)
    }
}

impl Tree {
    /// `self ⪯ other`: for every non-root `x`, the parent of `x` in `self` is
    /// a proper ancestor of `x` in `other`.
    pub fn leq(&self, other: &Tree) -> Result<bool, TreeError> {
        self.same_universe(other)?;
        Ok(self.nodes().all(|x| match self.parent(x) {
            None => true,
            Some(p) => other.parent(x).is_some_and(|q| other.is_ancestor(p, q)),
        }))
    }

    /// A push sequence turning `self` into `other`, or `None` when
    /// `self ⪯ other` fails.
    pub fn push_witness(&self, other: &Tree) -> Result<Option<PushSequence>, TreeError> {
        if !self.leq(other)? {
            return Ok(None);
        }
        let mut cur_parent: Vec<u32> = self.parent.clone();
        let mut cur_children = self.layout().children;
        let target_layout = other.layout();
        let mut seq = PushSequence::new();

        // Breadth-first over `other`: when a node is reached, its current
        // children are a superset of its children in `other`.
        for &r in target_layout.order() {
            let current = std::mem::take(&mut cur_children[r.index()]);
            let mut kept = Vec::with_capacity(current.len());
            for x in current {
                if other.parent(x) == Some(r) {
                    kept.push(x);
                    continue;
                }
                let mut y = other.parent(x).expect("non-root in the same universe");
                while other.parent(y) != Some(r) {
                    y = other.parent(y).expect("r is an ancestor of x in other");
                }
                debug_assert_eq!(cur_parent[y.index()], r.0);
                cur_parent[x.index()] = y.0;
                cur_children[y.index()].push(x);
                seq.push(x, y);
            }
            cur_children[r.index()] = kept;
        }
        debug_assert_eq!(cur_parent, other.parent);
        Ok(Some(seq))
    }
}
