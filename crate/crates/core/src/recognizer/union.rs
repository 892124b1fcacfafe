//! Union trees: a node satisfies the Union condition when, for each child
//! `y`, the children strictly smaller than `y` add up to at least
//! `size(y) - 1`. A tree is a Union tree iff every node does.

use crate::tree::{Layout, NodeId, Tree};

/// A node and its lightest child at which the Union condition fails.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Violation {
    pub node: NodeId,
    pub child: NodeId,
    /// `(size(child) - 1) - sumsize(node, size(child) - 1)`, always positive.
    pub deficit: usize,
}

/// True iff every element `a` has the elements strictly below it summing
/// to at least `a - 1`.
pub fn multiset_union_condition(sizes: &[usize]) -> bool {
    let mut sorted = sizes.to_vec();
    sorted.sort_unstable();
    first_failure(&sorted).is_none()
}

/// Index of the first element of sorted `sizes` that fails the condition.
fn first_failure(sorted: &[usize]) -> Option<(usize, usize)> {
    let mut below = 0usize;
    let mut i = 0;
    while i < sorted.len() {
        let a = sorted[i];
        if below + 1 < a {
            return Some((i, a - 1 - below));
        }
        let mut j = i;
        while j < sorted.len() && sorted[j] == a {
            below += a;
            j += 1;
        }
        i = j;
    }
    None
}

pub(crate) fn node_violation(layout: &Layout, x: NodeId) -> Option<Violation> {
    let mut kids: Vec<(usize, NodeId)> = layout
        .children(x)
        .iter()
        .map(|&c| (layout.size(c), c))
        .collect();
    if kids.is_empty() {
        return None;
    }
    kids.sort_unstable();
    let sizes: Vec<usize> = kids.iter().map(|k| k.0).collect();
    first_failure(&sizes).map(|(i, deficit)| Violation { node: x, child: kids[i].1, deficit })
}

/// Every node violating the Union condition, with its lightest violating
/// child (lowest id among equals), in increasing node order.
pub fn union_violations(t: &Tree) -> Vec<Violation> {
    let layout = t.layout();
    t.nodes().filter_map(|x| node_violation(&layout, x)).collect()
}

pub fn is_union_tree(t: &Tree) -> bool {
    let layout = t.layout();
    layout_is_union(&layout, t)
}

pub(crate) fn layout_is_union(layout: &Layout, t: &Tree) -> bool {
    t.nodes().all(|x| {
        let mut sizes: Vec<usize> = layout.children(x).iter().map(|&c| layout.size(c)).collect();
        sizes.sort_unstable();
        first_failure(&sizes).is_none()
    })
}
