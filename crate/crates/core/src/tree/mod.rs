//! Rooted trees over a dense universe of node ids `1..=n`.
//!
//! A [`Tree`] is stored as a parent array in the same shape as the on-disk
//! format: entry `i` holds the parent of node `i + 1`, or `0` for the root.
//! All transformations ([`Tree::merge`], [`Tree::collapse`], [`Tree::push`])
//! return new trees and leave their inputs untouched.

mod code;
mod order;
mod text;

use std::fmt;

use thiserror::Error;

pub use code::{CanonicalCode, ShapeInterner};
pub use order::{Push, PushSequence};
pub use text::ParseError;

/// A 1-based node identifier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

impl NodeId {
    /// Returns `None` for the reserved value `0`.
    pub fn new(id: u32) -> Option<Self> {
        (id > 0).then_some(NodeId(id))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub(crate) fn index(self) -> usize {
        (self.0 as usize).wrapping_sub(1)
    }

    #[inline]
    pub(crate) fn from_index(index: usize) -> Self {
        NodeId(index as u32 + 1)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<NodeId> for u32 {
    fn from(id: NodeId) -> u32 {
        id.0
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum TreeError {
    #[error("a tree needs at least one node")]
    Empty,
    #[error("nodes {0} and {1} are both roots")]
    MultipleRoots(NodeId, NodeId),
    #[error("node {0} is its own parent")]
    SelfParent(NodeId),
    #[error("parent {parent} of node {node} is outside 1..={len}")]
    ParentOutOfRange { node: NodeId, parent: u32, len: usize },
    #[error("parent links of node {0} form a cycle")]
    Cycle(NodeId),
    #[error("node {0} does not exist")]
    UnknownNode(u32),
    #[error("nodes {0} and {1} are not siblings")]
    NotSiblings(NodeId, NodeId),
    #[error("cannot push node {0} below itself")]
    SelfPush(NodeId),
    #[error("trees have different node counts ({0} and {1})")]
    NodeCountMismatch(usize, usize),
    #[error("trees have different roots ({0} and {1})")]
    RootMismatch(NodeId, NodeId),
}

/// A rooted tree whose nodes are exactly `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tree {
    parent: Vec<u32>,
    root: NodeId,
}

impl Tree {
    /// Builds a tree from a parent array (`0` marks the root) and verifies
    /// that there is a single root and no cycle.
    pub fn from_parents(parent: Vec<u32>) -> Result<Tree, TreeError> {
        let n = parent.len();
        if n == 0 {
            return Err(TreeError::Empty);
        }
        let mut root = None;
        for (i, &p) in parent.iter().enumerate() {
            let node = NodeId::from_index(i);
            if p == 0 {
                if let Some(first) = root {
                    return Err(TreeError::MultipleRoots(first, node));
                }
                root = Some(node);
            } else if p as usize > n {
                return Err(TreeError::ParentOutOfRange { node, parent: p, len: n });
            } else if p == node.0 {
                return Err(TreeError::SelfParent(node));
            }
        }
        let Some(root) = root else {
            // every node has a parent, so walking n steps lands on a cycle
            let mut cur = 0;
            for _ in 0..n {
                cur = parent[cur] as usize - 1;
            }
            return Err(TreeError::Cycle(NodeId::from_index(cur)));
        };

        // 0 = unvisited, 1 = on the current walk, 2 = known to reach the root
        let mut state = vec![0u8; n];
        state[root.index()] = 2;
        let mut walk = Vec::new();
        for start in 0..n {
            let mut cur = start;
            while state[cur] == 0 {
                state[cur] = 1;
                walk.push(cur);
                cur = parent[cur] as usize - 1;
            }
            if state[cur] == 1 {
                return Err(TreeError::Cycle(NodeId::from_index(cur)));
            }
            for i in walk.drain(..) {
                state[i] = 2;
            }
        }
        Ok(Tree { parent, root })
    }

    pub fn singleton() -> Tree {
        Tree { parent: vec![0], root: NodeId(1) }
    }

    /// Root `1` with `leaves` leaf children `2..=leaves + 1`.
    pub fn star(leaves: usize) -> Tree {
        let mut parent = vec![1u32; leaves + 1];
        parent[0] = 0;
        Tree { parent, root: NodeId(1) }
    }

    /// Path `1 <- 2 <- ... <- n` rooted at `1`.
    pub fn chain(n: usize) -> Tree {
        assert!(n >= 1, "chain needs at least one node");
        let parent = (0..n as u32).collect();
        Tree { parent, root: NodeId(1) }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.parent.len()
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn root(&self) -> NodeId {
        self.root
    }

    /// Raw parent array, `0` for the root.
    pub fn parents(&self) -> &[u32] {
        &self.parent
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.len()).map(NodeId::from_index)
    }

    pub fn contains(&self, x: NodeId) -> bool {
        x.0 >= 1 && x.index() < self.len()
    }

    fn check(&self, x: NodeId) -> Result<(), TreeError> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(TreeError::UnknownNode(x.0))
        }
    }

    /// Parent of `x`; `None` for the root or an unknown node.
    #[inline]
    pub fn parent(&self, x: NodeId) -> Option<NodeId> {
        self.parent.get(x.index()).copied().and_then(NodeId::new)
    }

    /// Children of `x` in increasing id order.
    pub fn children(&self, x: NodeId) -> Result<Vec<NodeId>, TreeError> {
        self.check(x)?;
        Ok(self.nodes().filter(|&c| self.parent(c) == Some(x)).collect())
    }

    /// Depth-one nodes, i.e. the children of the root.
    pub fn depth_one(&self) -> Vec<NodeId> {
        self.nodes()
            .filter(|&c| self.parent(c) == Some(self.root))
            .collect()
    }

    /// `a` is an ancestor of `x` (every node is its own ancestor).
    pub fn is_ancestor(&self, a: NodeId, x: NodeId) -> bool {
        let mut cur = Some(x);
        while let Some(c) = cur {
            if c == a {
                return true;
            }
            cur = self.parent(c);
        }
        false
    }

    /// Children lists, sizes and a root-first order computed in one pass.
    pub fn layout(&self) -> Layout {
        Layout::new(self)
    }

    pub fn size_of(&self, x: NodeId) -> Result<usize, TreeError> {
        self.check(x)?;
        Ok(self.layout().size(x))
    }

    /// Total size of the children of `x` whose size is at most `w`.
    pub fn sumsize(&self, x: NodeId, w: usize) -> Result<usize, TreeError> {
        self.check(x)?;
        Ok(self.layout().sumsize(x, w))
    }

    /// Attaches the root of `other` below the root of `self`. The nodes of
    /// `other` are renumbered to `self.len() + 1 ..` preserving their order.
    pub fn merge(&self, other: &Tree) -> Tree {
        let offset = self.len() as u32;
        let mut parent = Vec::with_capacity(self.len() + other.len());
        parent.extend_from_slice(&self.parent);
        parent.extend(other.parent.iter().map(|&p| {
            if p == 0 {
                self.root.0
            } else {
                p + offset
            }
        }));
        Tree { parent, root: self.root }
    }

    /// Reattaches every non-root ancestor of `x` (including `x` itself)
    /// directly below the root.
    pub fn collapse(&self, x: NodeId) -> Result<Tree, TreeError> {
        self.check(x)?;
        let mut out = self.clone();
        out.collapse_in_place(x);
        Ok(out)
    }

    pub(crate) fn collapse_in_place(&mut self, x: NodeId) {
        let root = self.root.0;
        let mut cur = x;
        while let Some(p) = self.parent(cur) {
            self.parent[cur.index()] = root;
            cur = p;
        }
    }

    /// Moves `x` one level deeper, below its sibling `y`.
    pub fn push(&self, x: NodeId, y: NodeId) -> Result<Tree, TreeError> {
        let mut out = self.clone();
        out.push_in_place(x, y)?;
        Ok(out)
    }

    pub(crate) fn push_in_place(&mut self, x: NodeId, y: NodeId) -> Result<(), TreeError> {
        self.check(x)?;
        self.check(y)?;
        if x == y {
            return Err(TreeError::SelfPush(x));
        }
        match (self.parent(x), self.parent(y)) {
            (Some(px), Some(py)) if px == py => {
                self.parent[x.index()] = y.0;
                Ok(())
            }
            _ => Err(TreeError::NotSiblings(x, y)),
        }
    }

    pub(crate) fn same_universe(&self, other: &Tree) -> Result<(), TreeError> {
        if self.len() != other.len() {
            return Err(TreeError::NodeCountMismatch(self.len(), other.len()));
        }
        if self.root != other.root {
            return Err(TreeError::RootMismatch(self.root, other.root));
        }
        Ok(())
    }

    /// The subtree rooted at `x`, renumbered densely in increasing id order.
    /// The second component maps new ids (by index) back to ids of `self`.
    pub fn subtree(&self, x: NodeId) -> Result<(Tree, Vec<NodeId>), TreeError> {
        self.check(x)?;
        let members: Vec<NodeId> = self.nodes().filter(|&y| self.is_ancestor(x, y)).collect();
        Ok((self.restrict(&members), members))
    }

    /// Restriction to `members` (sorted ascending, closed under parent up to
    /// a single top node), renumbered densely.
    pub(crate) fn restrict(&self, members: &[NodeId]) -> Tree {
        let mut local = vec![0u32; self.len()];
        for (i, m) in members.iter().enumerate() {
            local[m.index()] = i as u32 + 1;
        }
        let mut root = NodeId(1);
        let parent = members
            .iter()
            .enumerate()
            .map(|(i, &m)| match self.parent(m) {
                Some(p) if local[p.index()] != 0 => local[p.index()],
                _ => {
                    root = NodeId::from_index(i);
                    0
                }
            })
            .collect();
        Tree { parent, root }
    }
}

/// Derived structure of a tree: children lists, subtree sizes and a
/// breadth-first order starting at the root.
#[derive(Clone, Debug)]
pub struct Layout {
    children: Vec<Vec<NodeId>>,
    sizes: Vec<usize>,
    order: Vec<NodeId>,
}

impl Layout {
    fn new(t: &Tree) -> Layout {
        let n = t.len();
        let mut children = vec![Vec::new(); n];
        for x in t.nodes() {
            if let Some(p) = t.parent(x) {
                children[p.index()].push(x);
            }
        }
        let mut order = Vec::with_capacity(n);
        order.push(t.root());
        let mut head = 0;
        while head < order.len() {
            let x = order[head];
            head += 1;
            order.extend_from_slice(&children[x.index()]);
        }
        let mut sizes = vec![1usize; n];
        for &x in order.iter().rev() {
            if let Some(p) = t.parent(x) {
                sizes[p.index()] += sizes[x.index()];
            }
        }
        Layout { children, sizes, order }
    }

    #[inline]
    pub fn size(&self, x: NodeId) -> usize {
        self.sizes[x.index()]
    }

    #[inline]
    pub fn children(&self, x: NodeId) -> &[NodeId] {
        &self.children[x.index()]
    }

    pub fn sumsize(&self, x: NodeId, w: usize) -> usize {
        self.children(x)
            .iter()
            .map(|&c| self.size(c))
            .filter(|&s| s <= w)
            .sum()
    }

    /// Nodes in breadth-first order from the root.
    pub fn order(&self) -> &[NodeId] {
        &self.order
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn example_s() -> Tree {
        // r=1 with children 2, x=3, 4, 5; x has children 6, 7, z=8, 9
        Tree::from_parents(vec![0, 1, 1, 1, 1, 3, 3, 3, 3]).unwrap()
    }

    fn example_t() -> Tree {
        Tree::star(2)
    }

    #[test]
    fn from_parents_rejects_bad_shapes() {
        assert_eq!(Tree::from_parents(vec![]), Err(TreeError::Empty));
        assert!(matches!(Tree::from_parents(vec![2, 1]), Err(TreeError::Cycle(_))));
        assert_eq!(
            Tree::from_parents(vec![0, 0]),
            Err(TreeError::MultipleRoots(NodeId(1), NodeId(2)))
        );
        assert_eq!(Tree::from_parents(vec![0, 2]), Err(TreeError::SelfParent(NodeId(2))));
        assert!(matches!(
            Tree::from_parents(vec![0, 7]),
            Err(TreeError::ParentOutOfRange { parent: 7, .. })
        ));
        assert!(matches!(Tree::from_parents(vec![2, 3, 2]), Err(TreeError::Cycle(_))));
        assert!(matches!(Tree::from_parents(vec![0, 3, 2]), Err(TreeError::Cycle(_))));
    }

    #[test]
    fn sizes_and_sumsize() {
        let s = example_s();
        assert_eq!(s.size_of(NodeId(3)).unwrap(), 5);
        assert_eq!(s.size_of(NodeId(1)).unwrap(), 9);
        assert_eq!(Tree::singleton().size_of(NodeId(1)).unwrap(), 1);
        assert_eq!(s.sumsize(NodeId(6), 10).unwrap(), 0);
        // children sizes {1, 2}
        let t = Tree::from_parents(vec![0, 1, 1, 3]).unwrap();
        assert_eq!(t.sumsize(NodeId(1), 1).unwrap(), 1);
        assert_eq!(t.sumsize(NodeId(1), 2).unwrap(), 3);
        assert_eq!(t.size_of(NodeId(9)), Err(TreeError::UnknownNode(9)));
    }

    #[test]
    fn merge_collapse_push_walkthrough() {
        let merged = example_s().merge(&example_t());
        assert_eq!(merged.len(), 12);
        assert_eq!(merged.size_of(merged.root()).unwrap(), 12);
        let (x, y, z) = (NodeId(3), NodeId(10), NodeId(8));
        assert_eq!(merged.parent(y), Some(NodeId(1)));
        assert_eq!(merged.children(y).unwrap(), vec![NodeId(11), NodeId(12)]);

        let pushed = merged.push(x, y).unwrap();
        assert_eq!(pushed.parent(x), Some(y));
        assert_eq!(
            pushed.size_of(y).unwrap(),
            merged.size_of(x).unwrap() + merged.size_of(y).unwrap()
        );

        let collapsed = pushed.collapse(z).unwrap();
        assert_eq!(collapsed.parent(x), Some(NodeId(1)));
        assert_eq!(collapsed.parent(z), Some(NodeId(1)));
        assert_eq!(collapsed.parent(y), Some(NodeId(1)));
        assert_eq!(collapsed.children(x).unwrap(), vec![NodeId(6), NodeId(7), NodeId(9)]);
    }

    #[test]
    fn merge_of_singletons() {
        let t = Tree::singleton().merge(&Tree::singleton());
        assert_eq!(t.parents(), &[0, 1]);
    }

    #[test]
    fn collapse_at_root_or_depth_one_is_identity() {
        let s = example_s();
        assert_eq!(s.collapse(s.root()).unwrap(), s);
        assert_eq!(s.collapse(NodeId(3)).unwrap(), s);
        assert_eq!(s.collapse(NodeId(42)), Err(TreeError::UnknownNode(42)));
    }

    #[test]
    fn push_on_star() {
        let t = Tree::star(2);
        let pushed = t.push(NodeId(2), NodeId(3)).unwrap();
        assert_eq!(pushed.parents(), &[0, 3, 1]);
        assert_eq!(t.push(NodeId(2), NodeId(2)), Err(TreeError::SelfPush(NodeId(2))));
        assert_eq!(
            pushed.push(NodeId(2), NodeId(3)),
            Err(TreeError::NotSiblings(NodeId(2), NodeId(3)))
        );
    }

    #[test]
    fn subtree_renumbers_densely() {
        let (sub, map) = example_s().subtree(NodeId(3)).unwrap();
        assert_eq!(sub, Tree::star(4));
        assert_eq!(map, vec![NodeId(3), NodeId(6), NodeId(7), NodeId(8), NodeId(9)]);
    }
}
