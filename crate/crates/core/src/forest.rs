//! A reference disjoint-set forest with union-by-size and path compression.
//!
//! Every structural change it makes is a tree operation: `union` is a merge
//! of the larger tree with the smaller one (ties keep the root of the first
//! argument) and `find` is a collapse at the queried element.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::tree::{NodeId, Tree};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ForestError {
    #[error("a forest needs at least one element")]
    Empty,
    #[error("element {id} is outside 1..={len}")]
    OutOfRange { id: u32, len: usize },
    #[error("line {line}: {message}")]
    Script { line: usize, message: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Forest {
    // 0-based; roots point at themselves
    parent: Vec<usize>,
    // meaningful at roots only
    size: Vec<usize>,
}

/// One tree of the forest, renumbered densely.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snapshot {
    /// Number of operations executed before the snapshot was taken.
    pub step: usize,
    pub root: NodeId,
    /// `members[i]` is the forest element numbered `i + 1` in `tree`;
    /// ascending.
    pub members: Vec<NodeId>,
    pub tree: Tree,
}

impl Snapshot {
    /// Local id of a forest element, if it belongs to this snapshot.
    pub fn local(&self, element: NodeId) -> Option<NodeId> {
        self.members
            .binary_search(&element)
            .ok()
            .map(NodeId::from_index)
    }
}

impl Forest {
    pub fn new(n: usize) -> Result<Forest, ForestError> {
        if n == 0 {
            return Err(ForestError::Empty);
        }
        Ok(Forest { parent: (0..n).collect(), size: vec![1; n] })
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn index(&self, x: NodeId) -> Result<usize, ForestError> {
        let i = (x.get() as usize).wrapping_sub(1);
        if i < self.len() {
            Ok(i)
        } else {
            Err(ForestError::OutOfRange { id: x.get(), len: self.len() })
        }
    }

    /// Parent of `x`, `None` at a root.
    pub fn parent(&self, x: NodeId) -> Result<Option<NodeId>, ForestError> {
        let i = self.index(x)?;
        let p = self.parent[i];
        Ok((p != i).then(|| NodeId::from_index(p)))
    }

    fn root_index(&self, mut i: usize) -> usize {
        while self.parent[i] != i {
            i = self.parent[i];
        }
        i
    }

    /// Root of `x` without compressing.
    pub fn root_of(&self, x: NodeId) -> Result<NodeId, ForestError> {
        Ok(NodeId::from_index(self.root_index(self.index(x)?)))
    }

    /// Number of elements in the tree containing `x`.
    pub fn component_size(&self, x: NodeId) -> Result<usize, ForestError> {
        Ok(self.size[self.root_index(self.index(x)?)])
    }

    /// Returns the root of `x` and reattaches every element on the path from
    /// `x` directly below it.
    pub fn find(&mut self, x: NodeId) -> Result<NodeId, ForestError> {
        let start = self.index(x)?;
        let root = self.root_index(start);
        let mut cur = start;
        while cur != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        Ok(NodeId::from_index(root))
    }

    /// Links the trees of `a` and `b` (after finding both) and returns the
    /// surviving root. The smaller tree goes below the larger; on equal sizes
    /// the root of `b` goes below the root of `a`.
    pub fn union(&mut self, a: NodeId, b: NodeId) -> Result<NodeId, ForestError> {
        let ra = self.find(a)?.index();
        let rb = self.find(b)?.index();
        Ok(self.link_roots(ra, rb))
    }

    /// `union` without path compression: only the two roots change.
    pub fn link(&mut self, a: NodeId, b: NodeId) -> Result<NodeId, ForestError> {
        let ra = self.root_index(self.index(a)?);
        let rb = self.root_index(self.index(b)?);
        Ok(self.link_roots(ra, rb))
    }

    fn link_roots(&mut self, ra: usize, rb: usize) -> NodeId {
        if ra == rb {
            return NodeId::from_index(ra);
        }
        let (big, small) = if self.size[ra] >= self.size[rb] { (ra, rb) } else { (rb, ra) };
        self.parent[small] = big;
        self.size[big] += self.size[small];
        NodeId::from_index(big)
    }

    pub fn roots(&self) -> Vec<NodeId> {
        (0..self.len())
            .filter(|&i| self.parent[i] == i)
            .map(NodeId::from_index)
            .collect()
    }

    /// The tree containing `x`.
    pub fn snapshot(&self, x: NodeId) -> Result<Snapshot, ForestError> {
        let root = self.root_index(self.index(x)?);
        Ok(self.snapshot_root(root, 0))
    }

    fn snapshot_root(&self, root: usize, step: usize) -> Snapshot {
        let members: Vec<NodeId> = (0..self.len())
            .filter(|&i| self.root_index(i) == root)
            .map(NodeId::from_index)
            .collect();
        let mut local = vec![0u32; self.len()];
        for (k, m) in members.iter().enumerate() {
            local[m.index()] = k as u32 + 1;
        }
        let parent = members
            .iter()
            .map(|m| {
                let p = self.parent[m.index()];
                if p == m.index() {
                    0
                } else {
                    local[p]
                }
            })
            .collect();
        let tree = Tree::from_parents(parent).expect("forest components are trees");
        Snapshot { step, root: NodeId::from_index(root), members, tree }
    }

    /// One snapshot per tree, ordered by root.
    pub fn snapshots(&self, step: usize) -> Vec<Snapshot> {
        (0..self.len())
            .filter(|&i| self.parent[i] == i)
            .map(|r| self.snapshot_root(r, step))
            .collect()
    }

    pub fn apply(&mut self, op: Op) -> Result<(), ForestError> {
        match op {
            Op::Union(a, b) => self.union(a, b).map(drop),
            Op::Find(a) => self.find(a).map(drop),
            Op::Dump => Ok(()),
        }
    }

    /// Executes `script`, snapshotting every tree at each `dump`, after
    /// every `dump_every` operations when given, and once more at the end.
    pub fn run(
        &mut self,
        script: &OpScript,
        dump_every: Option<usize>,
    ) -> Result<Vec<Snapshot>, ForestError> {
        let mut out = Vec::new();
        for (i, &op) in script.ops.iter().enumerate() {
            self.apply(op)?;
            let step = i + 1;
            let periodic = dump_every.is_some_and(|k| k > 0 && step % k == 0);
            if op == Op::Dump || periodic {
                out.extend(self.snapshots(step));
            }
        }
        out.extend(self.snapshots(script.ops.len()));
        Ok(out)
    }
}

/// Executes `script` on `forest`; snapshots at each `dump` and at the end.
pub fn run_script(forest: &mut Forest, script: &OpScript) -> Result<Vec<Snapshot>, ForestError> {
    forest.run(script, None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    Union(NodeId, NodeId),
    Find(NodeId),
    Dump,
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Op::Union(a, b) => write!(f, "union {a} {b}"),
            Op::Find(a) => write!(f, "find {a}"),
            Op::Dump => f.write_str("dump"),
        }
    }
}

/// A sequence of forest operations. Text form: one of `union a b`,
/// `find a` or `dump` per line; `#` starts a comment; blank lines are
/// ignored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OpScript {
    pub ops: Vec<Op>,
}

impl OpScript {
    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Largest element id mentioned, 0 for scripts without ids.
    pub fn max_id(&self) -> u32 {
        self.ops
            .iter()
            .map(|op| match *op {
                Op::Union(a, b) => a.get().max(b.get()),
                Op::Find(a) => a.get(),
                Op::Dump => 0,
            })
            .max()
            .unwrap_or(0)
    }

    pub fn parse(text: &str) -> Result<OpScript, ForestError> {
        let mut ops = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| ForestError::Script { line: i + 1, message };
            let id = |tok: &str| {
                tok.parse::<u32>()
                    .ok()
                    .and_then(NodeId::new)
                    .ok_or_else(|| err(format!("invalid element id {tok:?}")))
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            let op = match fields.as_slice() {
                ["union", a, b] => Op::Union(id(a)?, id(b)?),
                ["find", a] => Op::Find(id(a)?),
                ["dump"] => Op::Dump,
                _ => return Err(err(format!("unrecognized operation {line:?}"))),
            };
            ops.push(op);
        }
        Ok(OpScript { ops })
    }
}

impl fmt::Display for OpScript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for op in &self.ops {
            writeln!(f, "{op}")?;
        }
        Ok(())
    }
}

impl FromStr for OpScript {
    type Err = ForestError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        OpScript::parse(s)
    }
}

/// `k` operations over elements `1..=n`, an even mix of unions and finds,
/// fully determined by `seed`.
pub fn random_script(n: usize, k: usize, seed: u64) -> OpScript {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = n.max(1) as u32;
    let ops = (0..k)
        .map(|_| {
            let a = NodeId(rng.random_range(1..=n));
            if rng.random_bool(0.5) {
                Op::Union(a, NodeId(rng.random_range(1..=n)))
            } else {
                Op::Find(a)
            }
        })
        .collect();
    OpScript { ops }
}
