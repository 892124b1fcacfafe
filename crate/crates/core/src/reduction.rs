//! 3-Partition′ instances and their flat trees.
//!
//! An instance is a sequence `a_1..a_3m` whose average triple sum
//! `B = Σa / m` has the form `2^D + d` with `D > 3` and `d ∈ {1, 2, 3}`, and
//! every element lies strictly between `B/4` and `B/2`. The flat tree built
//! from it is a Union-Find tree exactly when the elements split into `m`
//! triples each summing to `B`.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::recognizer::ChargeContext;
use crate::tree::{NodeId, Tree};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum InstanceError {
    #[error("m must be at least 1")]
    NoGroups,
    #[error("expected {expected} elements, found {found}")]
    Length { expected: usize, found: usize },
    #[error("element sum {sum} is not divisible by m = {m}")]
    NotDivisible { sum: usize, m: usize },
    #[error("target B = {0} is not of the form 2^D + d with D > 3 and d in 1..=3")]
    TargetForm(usize),
    #[error("element {index} = {value} is not strictly between B/4 and B/2 (B = {target})")]
    Window { index: usize, value: usize, target: usize },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("the reduction needs m >= 2, got m = 1")]
    TooFewGroups,
}

/// A raw instance as read from a file: `m` followed by `3m` integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawInstance {
    pub m: usize,
    pub a: Vec<usize>,
}

impl RawInstance {
    /// Line 1 holds `m`, the remaining lines the `3m` elements separated by
    /// whitespace.
    pub fn parse(text: &str) -> Result<Self, InstanceError> {
        let syntax = |line, message: &str| InstanceError::Syntax { line, message: message.into() };
        let mut lines = text.lines().enumerate();
        let (_, first) = lines.next().ok_or_else(|| syntax(1, "missing m"))?;
        let m = first.trim().parse::<usize>().map_err(|_| syntax(1, "m is not a decimal integer"))?;
        let mut a = Vec::new();
        for (i, line) in lines {
            for tok in line.split_whitespace() {
                a.push(tok.parse::<usize>().map_err(|_| syntax(i + 1, "element is not a decimal integer"))?);
            }
        }
        Ok(RawInstance { m, a })
    }

    pub fn validate(&self) -> Result<ThreePartitionInstance, InstanceError> {
        validate_instance(self.m, &self.a)
    }

    pub fn normalize(&self) -> Result<ThreePartitionInstance, InstanceError> {
        normalize(self.m, &self.a)
    }
}

impl fmt::Display for RawInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.m)?;
        let items: Vec<String> = self.a.iter().map(|v| v.to_string()).collect();
        writeln!(f, "{}", items.join(" "))
    }
}

/// A validated 3-Partition′ instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThreePartitionInstance {
    m: usize,
    a: Vec<usize>,
    target: usize,
    exp: u32,
    offset: usize,
}

impl ThreePartitionInstance {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn items(&self) -> &[usize] {
        &self.a
    }

    /// `B`.
    pub fn target(&self) -> usize {
        self.target
    }

    /// `D` in `B = 2^D + d`.
    pub fn exponent(&self) -> u32 {
        self.exp
    }

    /// `d` in `B = 2^D + d`.
    pub fn offset(&self) -> usize {
        self.offset
    }

    /// The heaviness threshold of the reduction tree, `B + 2^(D-1) - 1`.
    pub fn heaviness(&self) -> usize {
        self.target + (1 << (self.exp - 1)) - 1
    }

    pub fn to_raw(&self) -> RawInstance {
        RawInstance { m: self.m, a: self.a.clone() }
    }
}

fn check_shape(m: usize, a: &[usize]) -> Result<usize, InstanceError> {
    if m == 0 {
        return Err(InstanceError::NoGroups);
    }
    if a.len() != 3 * m {
        return Err(InstanceError::Length { expected: 3 * m, found: a.len() });
    }
    let sum: usize = a.iter().sum();
    if !sum.is_multiple_of(m) {
        return Err(InstanceError::NotDivisible { sum, m });
    }
    Ok(sum / m)
}

fn check_window(a: &[usize], b: usize) -> Result<(), InstanceError> {
    match a.iter().position(|&v| 4 * v <= b || 2 * v >= b) {
        Some(i) => Err(InstanceError::Window { index: i + 1, value: a[i], target: b }),
        None => Ok(()),
    }
}

/// `(D, d)` with `b = 2^D + d`, `D > 3`, `d ∈ {1, 2, 3}`.
fn split_target(b: usize) -> Option<(u32, usize)> {
    (1..=3usize).find_map(|d| {
        let p = b.checked_sub(d)?;
        (p.is_power_of_two() && p.trailing_zeros() > 3).then(|| (p.trailing_zeros(), d))
    })
}

pub fn validate_instance(m: usize, a: &[usize]) -> Result<ThreePartitionInstance, InstanceError> {
    let b = check_shape(m, a)?;
    let (exp, offset) = split_target(b).ok_or(InstanceError::TargetForm(b))?;
    check_window(a, b)?;
    Ok(ThreePartitionInstance { m, a: a.to_vec(), target: b, exp, offset })
}

/// The shift `c` added to every element so that `B + 3c` takes the form
/// `2^D + d`.
pub fn normalization_offset(b: usize) -> usize {
    let ceil_pow = b.max(1).next_power_of_two();
    let top = ceil_pow.max(16);
    // top >= b, so the numerator is positive
    (1 + top - b).div_ceil(3)
}

/// Shifts a plain 3-Partition instance (elements strictly inside
/// `(B/4, B/2)`) into 3-Partition′ form. The solution sets coincide.
pub fn normalize(m: usize, a: &[usize]) -> Result<ThreePartitionInstance, InstanceError> {
    let b = check_shape(m, a)?;
    check_window(a, b)?;
    let c = normalization_offset(b);
    let shifted: Vec<usize> = a.iter().map(|v| v + c).collect();
    validate_instance(m, &shifted)
}

/// The flat tree of an instance, with the nodes carrying each weight.
#[derive(Clone, Debug)]
pub struct ReductionTree {
    pub tree: Tree,
    pub ctx: ChargeContext,
    /// Depth-one star of size `a_i`, in input order.
    pub item_nodes: Vec<NodeId>,
    /// `weight_nodes[i][j]` is the star of size `2^j` in copy `i`.
    pub weight_nodes: Vec<Vec<NodeId>>,
}

/// Number of nodes of the reduction tree.
pub fn reduction_tree_len(inst: &ThreePartitionInstance) -> usize {
    let h = inst.heaviness();
    let m = inst.m;
    1 + (m - 1) * (h + 2) + (h + 1) + inst.a.iter().sum::<usize>() + m * ((1 << (inst.exp - 1)) - 1)
}

pub fn build_tree(inst: &ThreePartitionInstance) -> Result<ReductionTree, InstanceError> {
    if inst.m < 2 {
        return Err(InstanceError::TooFewGroups);
    }
    let h = inst.heaviness();
    let mut parent: Vec<u32> = vec![0];
    let star = |parent: &mut Vec<u32>, under: u32, size: usize| -> NodeId {
        parent.push(under);
        let top = parent.len() as u32;
        parent.extend(std::iter::repeat_n(top, size - 1));
        NodeId(top)
    };
    for _ in 1..inst.m {
        parent.push(1);
        let basket = parent.len() as u32;
        star(&mut parent, basket, h + 1);
    }
    star(&mut parent, 1, h + 1);
    let item_nodes = inst.a.iter().map(|&v| star(&mut parent, 1, v)).collect();
    let weight_nodes = (0..inst.m)
        .map(|_| (0..inst.exp - 1).map(|j| star(&mut parent, 1, 1 << j)).collect())
        .collect();
    let tree = Tree::from_parents(parent).expect("construction yields a tree");
    let ctx = ChargeContext::new(h).expect("H >= 1");
    Ok(ReductionTree { tree, ctx, item_nodes, weight_nodes })
}

/// `m` index triples (1-based) each summing to `B`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TripletPartition {
    pub groups: Vec<[usize; 3]>,
}

impl TripletPartition {
    /// Sorts each triple and the triples, so equal partitions compare equal.
    pub fn canonical(mut self) -> Self {
        for g in &mut self.groups {
            g.sort_unstable();
        }
        self.groups.sort_unstable();
        self
    }

    /// True iff the triples cover `1..=3m` exactly once and each sums to `B`.
    pub fn is_solution(&self, inst: &ThreePartitionInstance) -> bool {
        let mut seen = vec![false; inst.a.len()];
        if self.groups.len() != inst.m {
            return false;
        }
        for g in &self.groups {
            let mut sum = 0;
            for &i in g {
                if i == 0 || i > seen.len() || seen[i - 1] {
                    return false;
                }
                seen[i - 1] = true;
                sum += inst.a[i - 1];
            }
            if sum != inst.target {
                return false;
            }
        }
        true
    }

    pub fn values(&self, inst: &ThreePartitionInstance) -> Vec<[usize; 3]> {
        self.groups.iter().map(|g| g.map(|i| inst.a[i - 1])).collect()
    }
}

impl fmt::Display for TripletPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for [i, j, k] in &self.groups {
            writeln!(f, "{i} {j} {k}")?;
        }
        Ok(())
    }
}

struct TripleSearch<'a> {
    a: &'a [usize],
    target: usize,
    used: Vec<bool>,
    current: Vec<[usize; 3]>,
    found: Vec<TripletPartition>,
    /// Stop after the first solution and skip equal-valued alternatives.
    first_only: bool,
}

impl TripleSearch<'_> {
    fn run(&mut self) -> bool {
        let Some(i) = self.used.iter().position(|u| !u) else {
            self.found.push(TripletPartition { groups: self.current.clone() });
            return self.first_only;
        };
        self.used[i] = true;
        let n = self.a.len();
        let mut tried_j = Vec::new();
        for j in i + 1..n {
            if self.used[j] || (self.first_only && tried_j.contains(&self.a[j])) {
                continue;
            }
            tried_j.push(self.a[j]);
            let rest = match self.target.checked_sub(self.a[i] + self.a[j]) {
                Some(r) => r,
                None => continue,
            };
            self.used[j] = true;
            let mut tried_k = Vec::new();
            for k in j + 1..n {
                if self.used[k] || self.a[k] != rest || (self.first_only && tried_k.contains(&self.a[k])) {
                    continue;
                }
                tried_k.push(self.a[k]);
                self.used[k] = true;
                self.current.push([i + 1, j + 1, k + 1]);
                let stop = self.run();
                self.current.pop();
                self.used[k] = false;
                if stop {
                    return true;
                }
            }
            self.used[j] = false;
        }
        self.used[i] = false;
        false
    }
}

fn search(a: &[usize], target: usize, first_only: bool) -> Vec<TripletPartition> {
    let mut s = TripleSearch {
        a,
        target,
        used: vec![false; a.len()],
        current: Vec::new(),
        found: Vec::new(),
        first_only,
    };
    s.run();
    s.found
}

/// A solution, if any. The lowest unassigned index anchors each triple.
pub fn solve_3partition(inst: &ThreePartitionInstance) -> Option<TripletPartition> {
    search(&inst.a, inst.target, true).pop()
}

/// Every solution, each in canonical form, sorted.
pub fn all_3partitions(inst: &ThreePartitionInstance) -> Vec<TripletPartition> {
    triple_partitions(&inst.a, inst.target)
}

/// Every split of `a` into index triples summing to `target`, for inputs
/// not (yet) in 3-Partition′ form. Canonical form, sorted.
pub fn triple_partitions(a: &[usize], target: usize) -> Vec<TripletPartition> {
    if !a.len().is_multiple_of(3) {
        return Vec::new();
    }
    let mut all: Vec<_> = search(a, target, false).into_iter().map(TripletPartition::canonical).collect();
    all.sort();
    all
}

/// A solvable instance with `m` triples and `B = 2^exp + d` for a random
/// `d`, shuffled. `exp` must be at least 4.
pub fn planted_instance(m: usize, exp: u32, seed: u64) -> ThreePartitionInstance {
    assert!(m >= 1 && exp >= 4, "need m >= 1 and exp >= 4");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = (1usize << exp) + rng.random_range(1..=3);
    let (lo, hi) = (b / 4 + 1, (b - 1) / 2);
    let mut a = Vec::with_capacity(3 * m);
    while a.len() < 3 * m {
        let x = rng.random_range(lo..=hi);
        let y = rng.random_range(lo..=hi);
        if let Some(z) = b.checked_sub(x + y) {
            if (lo..=hi).contains(&z) {
                a.extend([x, y, z]);
            }
        }
    }
    a.shuffle(&mut rng);
    validate_instance(m, &a).expect("planted instance is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recognizer::is_flat;

    fn sample() -> ThreePartitionInstance {
        validate_instance(3, &[5, 5, 5, 5, 5, 6, 6, 7, 7]).unwrap()
    }

    #[test]
    fn sample_parameters() {
        let inst = sample();
        assert_eq!((inst.target(), inst.exponent(), inst.offset()), (17, 4, 1));
        assert_eq!(inst.heaviness(), 24);
    }

    #[test]
    fn invalid_instances() {
        assert_eq!(validate_instance(1, &[1, 1, 1]), Err(InstanceError::TargetForm(3)));
        assert!(matches!(validate_instance(2, &[5, 5, 5, 5, 6, 9]), Err(InstanceError::NotDivisible { .. })));
        assert!(matches!(validate_instance(2, &[5, 5, 5, 5, 6]), Err(InstanceError::Length { .. })));
        assert!(matches!(validate_instance(2, &[4, 6, 7, 5, 6, 6]), Err(InstanceError::Window { index: 1, .. })));
        assert_eq!(validate_instance(0, &[]), Err(InstanceError::NoGroups));
        assert!(validate_instance(2, &[5, 5, 5, 5, 6, 8]).is_ok());
    }

    #[test]
    fn offset_formula() {
        assert_eq!(normalization_offset(17), 6);
        assert_eq!(normalization_offset(32), 1);
        assert_eq!(normalization_offset(7), 4);
        let inst = normalize(3, &[5, 5, 5, 5, 5, 6, 6, 7, 7]).unwrap();
        assert_eq!(inst.target(), 35);
        assert_eq!((inst.exponent(), inst.offset()), (5, 3));
        assert_eq!(inst.items()[0], 11);
    }

    #[test]
    fn normalize_rejects_out_of_window_input() {
        assert!(matches!(normalize(1, &[1, 1, 4]), Err(InstanceError::Window { .. })));
    }

    #[test]
    fn tree_layout() {
        let inst = sample();
        let r = build_tree(&inst).unwrap();
        assert_eq!(r.tree.len(), reduction_tree_len(&inst));
        assert_eq!(r.tree.len(), 1 + 2 * 26 + 25 + 51 + 3 * 7);
        // first basket at 2, its star at 3
        assert_eq!(r.tree.parent(NodeId(3)), Some(NodeId(2)));
        assert_eq!(r.tree.size_of(NodeId(2)).unwrap(), 26);
        let sizes: Vec<usize> = r.item_nodes.iter().map(|&x| r.tree.size_of(x).unwrap()).collect();
        assert_eq!(sizes, inst.items());
        for copy in &r.weight_nodes {
            let w: Vec<usize> = copy.iter().map(|&x| r.tree.size_of(x).unwrap()).collect();
            assert_eq!(w, vec![1, 2, 4]);
        }
        let stats = is_flat(&r.tree, r.ctx).unwrap();
        assert_eq!(stats.k(), 2);
        assert_eq!(r.ctx.total_charge(&r.tree), 0);
    }

    #[test]
    fn single_group_has_no_reduction_tree() {
        let inst = validate_instance(1, &[5, 6, 6]).unwrap();
        assert_eq!(build_tree(&inst).unwrap_err(), InstanceError::TooFewGroups);
    }

    #[test]
    fn solver() {
        let inst = sample();
        let sol = solve_3partition(&inst).unwrap();
        assert!(sol.is_solution(&inst));
        let mut vals: Vec<[usize; 3]> = sol.values(&inst);
        for v in &mut vals {
            v.sort();
        }
        vals.sort();
        assert_eq!(vals, vec![[5, 5, 7], [5, 5, 7], [5, 6, 6]]);
        let none = validate_instance(2, &[5, 5, 5, 5, 6, 8]).unwrap();
        assert_eq!(solve_3partition(&none), None);
        assert!(all_3partitions(&none).is_empty());
        // one 5 joins the 6s, the other four split into pairs for the 7s
        assert_eq!(all_3partitions(&inst).len(), 30);
    }

    #[test]
    fn parse_and_print() {
        let raw = RawInstance::parse("3\n5 5 5 5 5 6 6 7 7\n").unwrap();
        assert_eq!(raw.to_string(), "3\n5 5 5 5 5 6 6 7 7\n");
        assert_eq!(raw.validate().unwrap(), sample());
        assert!(matches!(RawInstance::parse("x\n1 2 3"), Err(InstanceError::Syntax { line: 1, .. })));
        assert!(matches!(RawInstance::parse("1\n1 2 z"), Err(InstanceError::Syntax { line: 2, .. })));
        assert!(RawInstance::parse("").is_err());
    }

    #[test]
    fn planted_instances_are_solvable_and_flat() {
        for seed in 0..20 {
            let inst = planted_instance(3, 4 + (seed % 3) as u32, seed);
            assert!(solve_3partition(&inst).is_some());
            let r = build_tree(&inst).unwrap();
            assert!(is_flat(&r.tree, r.ctx).is_ok());
        }
    }
}
