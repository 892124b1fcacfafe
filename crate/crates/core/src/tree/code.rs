//! Isomorphism keys for rooted unordered trees.

use std::collections::HashMap;
use std::fmt;

use super::{NodeId, Tree};

/// Balanced-parenthesis encoding: a node is `(` followed by the sorted codes
/// of its children followed by `)`. Two trees have equal codes iff they are
/// isomorphic as rooted unordered trees.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalCode(Vec<u8>);

impl CanonicalCode {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    /// Number of nodes of the encoded tree.
    pub fn node_count(&self) -> usize {
        self.0.len() / 2
    }

    /// Accepts any balanced single-rooted parenthesis string and normalizes
    /// it, so the result is a valid canonical code.
    pub fn parse(text: &str) -> Option<CanonicalCode> {
        Tree::from_code_bytes(text.trim().as_bytes()).map(|t| t.canonical_code())
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // only ever contains b'(' and b')'
        f.write_str(std::str::from_utf8(&self.0).map_err(|_| fmt::Error)?)
    }
}

impl Tree {
    pub fn canonical_code(&self) -> CanonicalCode {
        let layout = self.layout();
        let mut codes: Vec<Vec<u8>> = vec![Vec::new(); self.len()];
        for &x in layout.order().iter().rev() {
            let mut kids: Vec<Vec<u8>> = layout
                .children(x)
                .iter()
                .map(|c| std::mem::take(&mut codes[c.index()]))
                .collect();
            kids.sort_unstable();
            let mut code = Vec::with_capacity(2 + kids.iter().map(Vec::len).sum::<usize>());
            code.push(b'(');
            for k in kids {
                code.extend_from_slice(&k);
            }
            code.push(b')');
            codes[x.index()] = code;
        }
        CanonicalCode(std::mem::take(&mut codes[self.root().index()]))
    }

    /// Decodes a canonical code into a tree whose ids follow preorder (the
    /// root is `1`).
    pub fn from_canonical_code(code: &CanonicalCode) -> Tree {
        Tree::from_code_bytes(&code.0).expect("canonical codes are balanced")
    }

    fn from_code_bytes(bytes: &[u8]) -> Option<Tree> {
        let mut parent = Vec::with_capacity(bytes.len() / 2);
        let mut stack: Vec<u32> = Vec::new();
        for (i, &b) in bytes.iter().enumerate() {
            match b {
                b'(' => {
                    if stack.is_empty() && i > 0 {
                        return None;
                    }
                    parent.push(stack.last().copied().unwrap_or(0));
                    stack.push(parent.len() as u32);
                }
                b')' => {
                    stack.pop()?;
                }
                _ => return None,
            }
        }
        if !stack.is_empty() || parent.is_empty() {
            return None;
        }
        Some(Tree { parent, root: NodeId(1) })
    }
}

/// Assigns every rooted unordered shape a small integer id, shared across
/// all trees classified by the same interner.
#[derive(Debug, Default)]
pub struct ShapeInterner {
    table: HashMap<Vec<u32>, u32>,
}

impl ShapeInterner {
    pub fn new() -> Self {
        Self::default()
    }

    /// Number of distinct shapes seen so far (subtrees included).
    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// Shape id of the subtree rooted at every node, indexed by `id - 1`.
    /// The whole tree's id is the entry of its root.
    pub fn classify(&mut self, t: &Tree) -> Vec<u32> {
        let layout = t.layout();
        let mut class = vec![0u32; t.len()];
        let mut key = Vec::new();
        for &x in layout.order().iter().rev() {
            key.clear();
            key.extend(layout.children(x).iter().map(|c| class[c.index()]));
            key.sort_unstable();
            let next = self.table.len() as u32;
            class[x.index()] = match self.table.get(&key) {
                Some(&id) => id,
                None => {
                    self.table.insert(key.clone(), next);
                    next
                }
            };
        }
        class
    }

    pub fn shape_of(&mut self, t: &Tree) -> u32 {
        self.classify(t)[t.root().index()]
    }
}
