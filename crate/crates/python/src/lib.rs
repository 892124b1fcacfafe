//! Python bindings. Node ids are the 1-based integers of the text format;
//! push sequences are lists of `(node, target)` pairs.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use uftree_core::forest::{Forest, OpScript};
use uftree_core::oracle::{enum_rooted_trees, enum_uf_trees, enum_union_trees};
use uftree_core::recognizer::{self, ChargeContext, NodeClass, UfSearch};
use uftree_core::reduction::{self, RawInstance};
use uftree_core::{gen, NodeId, PushSequence, Tree};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn node(x: u32) -> PyResult<NodeId> {
    NodeId::new(x).ok_or_else(|| err("node ids start at 1"))
}

fn ctx(h: usize) -> PyResult<ChargeContext> {
    ChargeContext::new(h).map_err(err)
}

fn pairs(seq: &PushSequence) -> Vec<(u32, u32)> {
    seq.steps.iter().map(|p| (p.node.get(), p.target.get())).collect()
}

/// A rooted tree on nodes `1..=n`.
#[pyclass(name = "Tree", module = "uftree", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyTree {
    inner: Tree,
}

impl From<Tree> for PyTree {
    fn from(inner: Tree) -> Self {
        PyTree { inner }
    }
}

#[pymethods]
impl PyTree {
    /// Builds a tree from parent ids, with 0 marking the root.
    #[new]
    fn new(parents: Vec<u32>) -> PyResult<Self> {
        Tree::from_parents(parents).map(Into::into).map_err(err)
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Tree::parse(text).map(Into::into).map_err(err)
    }

    #[staticmethod]
    fn singleton() -> Self {
        Tree::singleton().into()
    }

    #[staticmethod]
    fn star(leaves: usize) -> Self {
        Tree::star(leaves).into()
    }

    #[staticmethod]
    fn chain(n: usize) -> PyResult<Self> {
        if n == 0 {
            return Err(err("a chain has at least one node"));
        }
        Ok(Tree::chain(n).into())
    }

    #[staticmethod]
    fn from_code(code: &str) -> PyResult<Self> {
        let code = uftree_core::CanonicalCode::parse(code).ok_or_else(|| err("invalid canonical code"))?;
        Ok(Tree::from_canonical_code(&code).into())
    }

    #[staticmethod]
    #[pyo3(signature = (n, seed, kind = "any"))]
    fn random(n: usize, seed: u64, kind: &str) -> PyResult<Self> {
        if n == 0 {
            return Err(err("a tree has at least one node"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = match kind {
            "any" => gen::random_tree(n, &mut rng),
            "union" => gen::random_union_tree(n, &mut rng),
            "uf" => gen::random_uf_tree(n, &mut rng),
            other => return Err(err(format!("unknown kind {other:?}"))),
        };
        Ok(t.into())
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    #[getter]
    fn parents(&self) -> Vec<u32> {
        self.inner.parents().to_vec()
    }

    #[getter]
    fn root(&self) -> u32 {
        self.inner.root().get()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __hash__(&self) -> u64 {
        use std::hash::{DefaultHasher, Hash, Hasher};
        let mut h = DefaultHasher::new();
        self.inner.hash(&mut h);
        h.finish()
    }

    fn __repr__(&self) -> String {
        let p: Vec<String> = self.inner.parents().iter().map(u32::to_string).collect();
        format!("Tree([{}])", p.join(", "))
    }

    fn size_of(&self, x: u32) -> PyResult<usize> {
        self.inner.size_of(node(x)?).map_err(err)
    }

    fn children(&self, x: u32) -> PyResult<Vec<u32>> {
        Ok(self.inner.children(node(x)?).map_err(err)?.iter().map(|c| c.get()).collect())
    }

    fn canonical_code(&self) -> String {
        self.inner.canonical_code().to_string()
    }

    /// The other tree's root goes below this root; its ids are shifted by `len(self)`.
    fn merge(&self, other: &Self) -> Self {
        self.inner.merge(&other.inner).into()
    }

    fn collapse(&self, x: u32) -> PyResult<Self> {
        self.inner.collapse(node(x)?).map(Into::into).map_err(err)
    }

    fn push(&self, x: u32, y: u32) -> PyResult<Self> {
        self.inner.push(node(x)?, node(y)?).map(Into::into).map_err(err)
    }

    /// Applies `(node, target)` pushes in order.
    fn apply_pushes(&self, pushes: Vec<(u32, u32)>) -> PyResult<Self> {
        let mut seq = PushSequence::default();
        for (x, y) in pushes {
            seq.push(node(x)?, node(y)?);
        }
        seq.apply(&self.inner).map(Into::into).map_err(err)
    }

    /// Whether `other` is reachable from this tree by pushes.
    fn leq(&self, other: &Self) -> PyResult<bool> {
        self.inner.leq(&other.inner).map_err(err)
    }

    fn push_witness(&self, other: &Self) -> PyResult<Option<Vec<(u32, u32)>>> {
        Ok(self.inner.push_witness(&other.inner).map_err(err)?.as_ref().map(pairs))
    }

    fn is_union(&self) -> bool {
        recognizer::is_union_tree(&self.inner)
    }

    /// `(node, child, deficit)` for each child breaking the Union condition.
    fn union_violations(&self) -> Vec<(u32, u32, usize)> {
        recognizer::union_violations(&self.inner)
            .into_iter()
            .map(|v| (v.node.get(), v.child.get(), v.deficit))
            .collect()
    }

    /// Pushes reaching a Union tree, or `None` if there are none (or none
    /// within `max_depth`).
    #[pyo3(signature = (max_depth = None))]
    fn union_find_witness(&self, py: Python<'_>, max_depth: Option<usize>) -> Option<Vec<(u32, u32)>> {
        let t = self.inner.clone();
        py.detach(move || {
            let mut search = UfSearch::new();
            if let Some(d) = max_depth {
                search = search.max_depth(d);
            }
            search.run(&t).witness.as_ref().map(pairs)
        })
    }

    fn classify(&self, heaviness: usize, x: u32) -> PyResult<&'static str> {
        let class = ctx(heaviness)?.classify(&self.inner, node(x)?).map_err(err)?;
        Ok(match class {
            NodeClass::Light => "light",
            NodeClass::Heavy => "heavy",
            NodeClass::Basket => "basket",
            NodeClass::EmptyBasket => "empty-basket",
        })
    }

    fn charge(&self, heaviness: usize, x: u32) -> PyResult<i64> {
        ctx(heaviness)?.charge(&self.inner, node(x)?).map_err(err)
    }

    fn total_charge(&self, heaviness: usize) -> PyResult<i64> {
        Ok(ctx(heaviness)?.total_charge(&self.inner))
    }

    /// Number of empty baskets `K`; raises if the tree is not flat.
    fn flat_k(&self, heaviness: usize) -> PyResult<usize> {
        recognizer::is_flat(&self.inner, ctx(heaviness)?).map(|s| s.k()).map_err(err)
    }

    /// Groups of light depth-one nodes, one per basket plus the root's.
    fn flat_partition(&self, heaviness: usize) -> PyResult<Option<Vec<Vec<u32>>>> {
        let p = recognizer::decide_flat_uf(&self.inner, ctx(heaviness)?).map_err(err)?;
        Ok(p.map(|p| p.groups.iter().map(|g| g.iter().map(|x| x.get()).collect()).collect()))
    }
}

/// The flat tree of an instance with `m` triples, and its threshold `H`.
#[pyfunction]
#[pyo3(signature = (m, items, normalize = false))]
fn reduce(m: usize, items: Vec<usize>, normalize: bool) -> PyResult<(PyTree, usize)> {
    let raw = RawInstance { m, a: items };
    let inst = if normalize { raw.normalize() } else { raw.validate() }.map_err(err)?;
    let r = reduction::build_tree(&inst).map_err(err)?;
    Ok((r.tree.into(), r.ctx.heaviness()))
}

/// Index triples of one solution, or `None`.
#[pyfunction]
fn solve_3partition(m: usize, items: Vec<usize>) -> PyResult<Option<Vec<[usize; 3]>>> {
    let inst = reduction::validate_instance(m, &items).map_err(err)?;
    Ok(reduction::solve_3partition(&inst).map(|p| p.groups))
}

/// Runs a union/find script; returns `(step, root, members, tree)` per snapshot.
/// `(step, root, members, tree)`
type PySnapshot = (usize, u32, Vec<u32>, PyTree);

#[pyfunction]
#[pyo3(signature = (script, n = None))]
fn simulate(script: &str, n: Option<usize>) -> PyResult<Vec<PySnapshot>> {
    let script: OpScript = script.parse().map_err(err)?;
    let mut forest = Forest::new(n.unwrap_or(script.max_id() as usize)).map_err(err)?;
    let snaps = forest.run(&script, None).map_err(err)?;
    Ok(snaps
        .into_iter()
        .map(|s| (s.step, s.root.get(), s.members.iter().map(|m| m.get()).collect(), s.tree.into()))
        .collect())
}

/// Canonical codes of all shapes with `n` nodes in a class: "all", "union" or "uf".
#[pyfunction]
#[pyo3(signature = (n, class_ = "all"))]
fn enumerate(n: usize, class_: &str) -> PyResult<Vec<String>> {
    let set = match class_ {
        "all" => enum_rooted_trees(n),
        "union" => enum_union_trees(n),
        "uf" => enum_uf_trees(n),
        other => return Err(err(format!("unknown class {other:?}"))),
    }
    .map_err(err)?;
    Ok(set.of_size(n).map(|c| c.to_string()).collect())
}

#[pymodule]
fn uftree(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTree>()?;
    m.add_function(wrap_pyfunction!(reduce, m)?)?;
    m.add_function(wrap_pyfunction!(solve_3partition, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate, m)?)?;
    Ok(())
}
