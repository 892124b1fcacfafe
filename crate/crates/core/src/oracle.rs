//! Brute-force ground truth for small trees.
//!
//! Shapes are generated by closure under the defining operations rather
//! than by the recognizers, so the two can be compared.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use thiserror::Error;

use crate::forest::{Forest, Op, OpScript};
use crate::tree::{CanonicalCode, NodeId, Tree};

pub const MAX_ROOTED: usize = 10;
pub const MAX_UNION: usize = 9;
pub const MAX_UNION_FIND: usize = 8;
pub const MAX_PUSH_CLOSURE: usize = 6;
pub const MAX_PUSH_REACHABLE: usize = 16;
pub const MAX_LABELED: usize = 7;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("{what} supports 1 <= n <= {max}, got {n}")]
    Range { what: &'static str, n: usize, max: usize },
    #[error("trees differ in size or root")]
    Incomparable,
}

fn check_range(what: &'static str, n: usize, max: usize) -> Result<(), OracleError> {
    if n == 0 || n > max {
        return Err(OracleError::Range { what, n, max });
    }
    Ok(())
}

/// Tree shapes grouped by node count.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ShapeSet {
    by_size: BTreeMap<usize, BTreeSet<CanonicalCode>>,
}

impl ShapeSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, code: CanonicalCode) -> bool {
        self.by_size.entry(code.node_count()).or_default().insert(code)
    }

    pub fn contains(&self, code: &CanonicalCode) -> bool {
        self.by_size.get(&code.node_count()).is_some_and(|s| s.contains(code))
    }

    pub fn of_size(&self, n: usize) -> impl Iterator<Item = &CanonicalCode> {
        self.by_size.get(&n).into_iter().flatten()
    }

    pub fn count(&self, n: usize) -> usize {
        self.by_size.get(&n).map_or(0, BTreeSet::len)
    }

    pub fn len(&self) -> usize {
        self.by_size.values().map(BTreeSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = &CanonicalCode> {
        self.by_size.values().flatten()
    }

    pub fn is_subset(&self, other: &ShapeSet) -> bool {
        self.iter().all(|c| other.contains(c))
    }
}

/// Every rooted tree shape with at most `n` nodes, grown one leaf at a
/// time.
pub fn enum_rooted_trees(n: usize) -> Result<ShapeSet, OracleError> {
    check_range("enum_rooted_trees", n, MAX_ROOTED)?;
    let mut set = ShapeSet::new();
    set.insert(Tree::singleton().canonical_code());
    for k in 1..n {
        let grown: Vec<CanonicalCode> = set
            .of_size(k)
            .flat_map(|code| {
                let t = Tree::from_canonical_code(code);
                t.nodes()
                    .map(|x| {
                        let mut parent = t.parents().to_vec();
                        parent.push(x.get());
                        Tree::from_parents(parent).expect("adding a leaf keeps a tree").canonical_code()
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
        for code in grown {
            set.insert(code);
        }
    }
    Ok(set)
}

/// Every Union tree with at most `n` nodes: the closure of the singleton
/// under merges of a tree with one no larger than itself.
pub fn enum_union_trees(n: usize) -> Result<ShapeSet, OracleError> {
    check_range("enum_union_trees", n, MAX_UNION)?;
    let mut reps: Vec<Vec<Tree>> = vec![Vec::new(), vec![Tree::singleton()]];
    let mut set = ShapeSet::new();
    set.insert(Tree::singleton().canonical_code());
    for s in 2..=n {
        let mut layer = Vec::new();
        for big in s.div_ceil(2)..s {
            for t in &reps[big] {
                for u in &reps[s - big] {
                    let m = t.merge(u);
                    if set.insert(m.canonical_code()) {
                        layer.push(m);
                    }
                }
            }
        }
        reps.push(layer);
    }
    Ok(set)
}

/// Forest operations on elements `1..=n` whose last state is one tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionTrace {
    pub n: usize,
    pub script: OpScript,
}

impl ConstructionTrace {
    /// Runs the trace on a fresh forest and returns the resulting tree,
    /// labeled by element.
    pub fn replay(&self) -> Tree {
        let mut forest = Forest::new(self.n).expect("n >= 1");
        for &op in &self.script.ops {
            forest.apply(op).expect("trace ids are in range");
        }
        forest.snapshot(NodeId(1)).expect("element 1 exists").tree
    }

    fn shifted(&self, by: u32) -> impl Iterator<Item = Op> + '_ {
        self.script.ops.iter().map(move |&op| match op {
            Op::Union(a, b) => Op::Union(NodeId(a.0 + by), NodeId(b.0 + by)),
            Op::Find(a) => Op::Find(NodeId(a.0 + by)),
            Op::Dump => Op::Dump,
        })
    }
}

/// Union-Find shapes with a construction trace for each.
#[derive(Clone, Debug, Default)]
pub struct UfClosure {
    pub shapes: ShapeSet,
    /// Keyed by shape; replaying a trace yields a tree of that shape.
    pub traces: HashMap<CanonicalCode, ConstructionTrace>,
}

/// Closure of the singleton under size-respecting merges and collapses,
/// up to `n` nodes.
pub fn uf_closure(n: usize) -> Result<UfClosure, OracleError> {
    check_range("enum_uf_trees", n, MAX_UNION_FIND)?;
    let mut out = UfClosure::default();
    let single = Tree::singleton();
    out.shapes.insert(single.canonical_code());
    out.traces.insert(single.canonical_code(), ConstructionTrace { n: 1, script: OpScript::default() });
    let mut reps: Vec<Vec<(Tree, CanonicalCode)>> =
        vec![Vec::new(), vec![(single.clone(), single.canonical_code())]];
    for s in 2..=n {
        let mut layer: Vec<(Tree, CanonicalCode)> = Vec::new();
        for big in s.div_ceil(2)..s {
            let small = s - big;
            for (t, tc) in &reps[big] {
                for (u, uc) in &reps[small] {
                    let merged = t.merge(u);
                    let code = merged.canonical_code();
                    if !out.shapes.insert(code.clone()) {
                        continue;
                    }
                    let (tt, ut) = (&out.traces[tc], &out.traces[uc]);
                    let mut ops = tt.script.ops.clone();
                    ops.extend(ut.shifted(big as u32));
                    ops.push(Op::Union(t.root(), NodeId(u.root().0 + big as u32)));
                    out.traces.insert(code.clone(), ConstructionTrace { n: s, script: OpScript { ops } });
                    layer.push((merged, code));
                }
            }
        }
        let mut queue: VecDeque<usize> = (0..layer.len()).collect();
        while let Some(i) = queue.pop_front() {
            let (t, code) = layer[i].clone();
            for x in t.nodes() {
                let c = t.collapse(x).expect("x is a node");
                let cc = c.canonical_code();
                if out.shapes.insert(cc.clone()) {
                    let mut script = out.traces[&code].script.clone();
                    script.ops.push(Op::Find(x));
                    out.traces.insert(cc.clone(), ConstructionTrace { n: s, script });
                    layer.push((c, cc));
                    queue.push_back(layer.len() - 1);
                }
            }
        }
        reps.push(layer);
    }
    Ok(out)
}

/// Every Union-Find tree shape with at most `n` nodes.
pub fn enum_uf_trees(n: usize) -> Result<ShapeSet, OracleError> {
    uf_closure(n).map(|c| c.shapes)
}

/// Every labeled tree on `1..=n` rooted at `root`.
pub fn enum_labeled_trees(n: usize, root: NodeId) -> Result<Vec<Tree>, OracleError> {
    check_range("enum_labeled_trees", n, MAX_LABELED)?;
    assert!(root.get() >= 1 && root.get() as usize <= n, "root must be a node");
    let others: Vec<usize> = (1..=n).filter(|&i| i != root.get() as usize).collect();
    let mut out = Vec::new();
    let mut choice = vec![1u32; others.len()];
    loop {
        let mut parent = vec![0u32; n];
        for (k, &i) in others.iter().enumerate() {
            parent[i - 1] = choice[k];
        }
        if let Ok(t) = Tree::from_parents(parent) {
            out.push(t);
        }
        // odometer over parent choices
        let mut k = 0;
        loop {
            if k == choice.len() {
                return Ok(out);
            }
            if (choice[k] as usize) < n {
                choice[k] += 1;
                break;
            }
            choice[k] = 1;
            k += 1;
        }
    }
}

/// Every labeled tree reachable from `t` by pushes, `t` included.
pub fn push_closure(t: &Tree) -> Result<HashSet<Tree>, OracleError> {
    check_range("push_closure", t.len(), MAX_PUSH_CLOSURE)?;
    let mut seen = HashSet::from([t.clone()]);
    let mut queue = VecDeque::from([t.clone()]);
    while let Some(cur) = queue.pop_front() {
        for p in cur.nodes() {
            let kids = cur.children(p).expect("p is a node");
            for &x in &kids {
                for &y in &kids {
                    if x != y {
                        let next = cur.push(x, y).expect("siblings");
                        if seen.insert(next.clone()) {
                            queue.push_back(next);
                        }
                    }
                }
            }
        }
    }
    Ok(seen)
}

/// Whether some sequence of pushes turns `t` into `s` exactly.
///
/// Breadth-first over single pushes. A push only adds ancestor pairs, so
/// states with an ancestor pair missing from `s` are dropped; this keeps
/// the search inside the interval between `t` and `s`.
pub fn push_closure_reachable(t: &Tree, s: &Tree) -> Result<bool, OracleError> {
    check_range("push_closure_reachable", t.len(), MAX_PUSH_REACHABLE)?;
    if t.len() != s.len() || t.root() != s.root() {
        return Err(OracleError::Incomparable);
    }
    let n = t.len();
    let ancestors = |u: &Tree| {
        let mut m = vec![false; n * n];
        for x in u.nodes() {
            let mut a = u.parent(x);
            while let Some(p) = a {
                m[(p.get() as usize - 1) * n + x.get() as usize - 1] = true;
                a = u.parent(p);
            }
        }
        m
    };
    let target = ancestors(s);
    let inside = |u: &Tree| ancestors(u).iter().zip(&target).all(|(&a, &b)| !a || b);
    if !inside(t) {
        return Ok(false);
    }
    let mut seen = HashSet::from([t.clone()]);
    let mut queue = VecDeque::from([t.clone()]);
    while let Some(cur) = queue.pop_front() {
        if &cur == s {
            return Ok(true);
        }
        for p in cur.nodes() {
            let kids = cur.children(p).expect("p is a node");
            for &x in &kids {
                for &y in &kids {
                    if x == y {
                        continue;
                    }
                    let next = cur.push(x, y).expect("siblings");
                    if inside(&next) && seen.insert(next.clone()) {
                        queue.push_back(next);
                    }
                }
            }
        }
    }
    Ok(false)
}
