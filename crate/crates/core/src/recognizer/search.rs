//! Union-Find recognition by search over push sequences.
//!
//! A tree is a Union-Find tree iff some sequence of pushes turns it into a
//! Union tree. Every push strictly increases the sum of all subtree sizes,
//! which never exceeds `n²`, so the search space is a finite DAG. States are
//! deduplicated up to isomorphism, since both the moves and the target class
//! are invariant under relabeling.

use std::collections::{HashMap, HashSet};

use super::charge::ChargeContext;
use super::union::{layout_is_union, node_violation};
use crate::tree::{Layout, Push, PushSequence, ShapeInterner, Tree};

#[derive(Clone, Debug, Default)]
pub struct UfSearch {
    max_depth: Option<usize>,
    charge_pruning: Option<ChargeContext>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchReport {
    /// Pushes from the input to a Union tree, when one was found.
    pub witness: Option<PushSequence>,
    /// Distinct shapes expanded.
    pub states: usize,
    /// Some branch was cut by the depth cap, so a missing witness is not a
    /// proof of non-membership.
    pub depth_limited: bool,
}

struct Frame {
    tree: Tree,
    shape: u32,
    remaining: usize,
    moves: Vec<Push>,
    next: usize,
}

impl UfSearch {
    pub fn new() -> Self {
        Self::default()
    }

    /// Caps the number of pushes explored along one branch. The default,
    /// `n²`, never cuts a branch.
    pub fn max_depth(mut self, depth: usize) -> Self {
        self.max_depth = Some(depth);
        self
    }

    /// Discards states whose total charge at `ctx` is negative. Pushes never
    /// raise the total charge and Union trees have none negative, so such
    /// states cannot reach a Union tree.
    pub fn charge_pruning(mut self, ctx: ChargeContext) -> Self {
        self.charge_pruning = Some(ctx);
        self
    }

    pub fn run(&self, t: &Tree) -> SearchReport {
        let n = t.len();
        let budget = self.max_depth.unwrap_or(n * n);
        let mut report = SearchReport { witness: None, states: 0, depth_limited: false };

        let layout = t.layout();
        if layout_is_union(&layout, t) {
            report.witness = Some(PushSequence::new());
            return report;
        }
        if self.pruned(&layout, t) {
            return report;
        }
        if budget == 0 {
            report.depth_limited = true;
            return report;
        }

        let mut interner = ShapeInterner::new();
        // shape -> largest remaining depth with which it was exhausted
        let mut failed: HashMap<u32, usize> = HashMap::new();
        let classes = interner.classify(t);
        let mut stack = vec![Frame {
            shape: classes[t.root().index()],
            moves: ordered_moves(t, &layout, &classes),
            tree: t.clone(),
            remaining: budget,
            next: 0,
        }];
        report.states = 1;

        while let Some(top) = stack.last_mut() {
            if top.next == top.moves.len() {
                let done = stack.pop().expect("non-empty");
                let entry = failed.entry(done.shape).or_insert(0);
                *entry = (*entry).max(done.remaining);
                continue;
            }
            let mv = top.moves[top.next];
            top.next += 1;
            let remaining = top.remaining - 1;
            let child = top.tree.push(mv.node, mv.target).expect("moves are generated applicable");

            let classes = interner.classify(&child);
            let shape = classes[child.root().index()];
            if failed.get(&shape).is_some_and(|&r| r >= remaining) {
                continue;
            }
            let layout = child.layout();
            if layout_is_union(&layout, &child) {
                let steps = stack.iter().map(|f| f.moves[f.next - 1]).collect();
                report.witness = Some(PushSequence { steps });
                return report;
            }
            if self.pruned(&layout, &child) {
                failed.insert(shape, usize::MAX);
                continue;
            }
            if remaining == 0 {
                report.depth_limited = true;
                failed.entry(shape).or_insert(0);
                continue;
            }
            report.states += 1;
            stack.push(Frame {
                moves: ordered_moves(&child, &layout, &classes),
                tree: child,
                shape,
                remaining,
                next: 0,
            });
        }
        report
    }

    fn pruned(&self, layout: &Layout, t: &Tree) -> bool {
        self.charge_pruning.is_some_and(|ctx| ctx.total_in(layout, t) < 0)
    }
}

/// All applicable pushes, one per (parent, shape of x, shape of y), most
/// promising first: pushes of a node at least as large as the lightest
/// violating child of its parent, and pushes into a violating node, ranked
/// by the deficits involved.
fn ordered_moves(t: &Tree, layout: &Layout, classes: &[u32]) -> Vec<Push> {
    let deficit: Vec<Option<(usize, usize)>> = t
        .nodes()
        .map(|x| node_violation(layout, x).map(|v| (layout.size(v.child), v.deficit)))
        .collect();
    let mut scored = Vec::new();
    let mut seen = HashSet::new();
    for p in t.nodes() {
        let kids = layout.children(p);
        if kids.len() < 2 {
            continue;
        }
        seen.clear();
        for &x in kids {
            for &y in kids {
                if x == y || !seen.insert((classes[x.index()], classes[y.index()])) {
                    continue;
                }
                let mut score = 0;
                if let Some((vsize, d)) = deficit[p.index()] {
                    if layout.size(x) >= vsize {
                        score += d;
                    }
                }
                if let Some((_, d)) = deficit[y.index()] {
                    score += d;
                }
                scored.push((score, Push { node: x, target: y }));
            }
        }
    }
    scored.sort_by_key(|&(score, _)| std::cmp::Reverse(score));
    scored.into_iter().map(|(_, m)| m).collect()
}

/// A push sequence from `t` to a Union tree, or `None` when `t` is not a
/// Union-Find tree.
pub fn is_union_find_tree(t: &Tree) -> Option<PushSequence> {
    UfSearch::new().run(t).witness
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recognizer::union::is_union_tree;

    #[test]
    fn singleton_needs_no_pushes() {
        assert_eq!(is_union_find_tree(&Tree::singleton()), Some(PushSequence::new()));
    }

    #[test]
    fn chain_of_three_is_rejected() {
        assert_eq!(is_union_find_tree(&Tree::chain(3)), None);
    }

    /// Root with four leaves and a path of three nodes; a Union tree
    /// after one push at the root.
    fn root_with_path() -> Tree {
        Tree::from_parents(vec![0, 4, 2, 1, 1, 1, 1, 1]).unwrap()
    }

    #[test]
    fn short_path_is_accepted_with_a_valid_witness() {
        let t = root_with_path();
        let seq = is_union_find_tree(&t).expect("one push suffices");
        assert_eq!(seq.len(), 1);
        assert!(is_union_tree(&seq.apply(&t).unwrap()));
    }

    #[test]
    fn depth_cap_is_reported() {
        let t = root_with_path();
        assert!(!is_union_tree(&t));
        let report = UfSearch::new().max_depth(0).run(&t);
        assert!(report.witness.is_none() && report.depth_limited);
        let report = UfSearch::new().run(&t);
        assert!(report.witness.is_some() && !report.depth_limited);
    }

    #[test]
    fn charge_pruning_keeps_answers() {
        let ctx = ChargeContext::new(1).unwrap();
        for t in [Tree::chain(3), Tree::chain(4), Tree::star(3)] {
            let plain = UfSearch::new().run(&t).witness.is_some();
            let pruned = UfSearch::new().charge_pruning(ctx).run(&t).witness.is_some();
            assert_eq!(plain, pruned);
        }
    }
}
