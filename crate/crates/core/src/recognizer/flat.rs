//! Flat trees and their Union-Find decision procedure.
//!
//! With threshold `H`, a tree is flat when
//!
//! 1. `K > 0` depth-one nodes are empty baskets (and no other depth-one node
//!    is a basket);
//! 2. exactly one depth-one node is heavy but not a basket, and its size is
//!    `H + 1`;
//! 3. the light depth-one nodes have total size `(K + 1) * H`;
//! 4. every light node and every non-basket heavy node has only leaf
//!    children.
//!
//! A flat tree is a Union-Find tree iff its light depth-one nodes split into
//! `K + 1` groups, each of total size `H` and each satisfying the Union
//! condition as a multiset. The witness pushes group `i` into the `i`-th
//! empty basket and leaves the last group at depth one.

use std::collections::{HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use super::charge::{ChargeContext, NodeClass};
use super::union::multiset_union_condition;
use crate::tree::{NodeId, PushSequence, Tree};

/// Which flatness condition (1 to 4) fails, and why.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("flat condition {condition} fails: {reason}")]
pub struct NotFlat {
    pub condition: u8,
    pub reason: String,
}

fn not_flat(condition: u8, reason: impl Into<String>) -> NotFlat {
    NotFlat { condition, reason: reason.into() }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatStats {
    pub heaviness: usize,
    /// Depth-one empty baskets in increasing id order; `K` is their count.
    pub empty_baskets: Vec<NodeId>,
    /// The depth-one heavy node that is not a basket.
    pub solo_heavy: NodeId,
    pub light_depth_one: Vec<NodeId>,
}

impl FlatStats {
    /// Number of empty baskets.
    pub fn k(&self) -> usize {
        self.empty_baskets.len()
    }
}

pub fn is_flat(t: &Tree, ctx: ChargeContext) -> Result<FlatStats, NotFlat> {
    let h = ctx.heaviness();
    let layout = t.layout();
    let root = t.root();

    let mut empty_baskets = Vec::new();
    let mut solo = Vec::new();
    let mut light = Vec::new();
    for &x in layout.children(root) {
        match ctx.class_in(&layout, x) {
            NodeClass::EmptyBasket => empty_baskets.push(x),
            NodeClass::Basket => {
                return Err(not_flat(1, format!("depth-one basket {x} is not an empty basket")))
            }
            NodeClass::Heavy => solo.push(x),
            NodeClass::Light => light.push(x),
        }
    }
    if empty_baskets.is_empty() {
        return Err(not_flat(1, "no depth-one empty basket"));
    }
    let k = empty_baskets.len();
    let solo_heavy = match solo.as_slice() {
        [x] if layout.size(*x) == h + 1 => *x,
        [x] => {
            return Err(not_flat(
                2,
                format!("non-basket heavy node {x} has size {}, expected {}", layout.size(*x), h + 1),
            ))
        }
        other => {
            return Err(not_flat(
                2,
                format!("{} depth-one non-basket heavy nodes, expected exactly one", other.len()),
            ))
        }
    };
    let light_total: usize = light.iter().map(|&x| layout.size(x)).sum();
    if light_total != (k + 1) * h {
        return Err(not_flat(
            3,
            format!("light depth-one nodes total {light_total}, expected {}", (k + 1) * h),
        ));
    }
    for x in t.nodes() {
        let class = ctx.class_in(&layout, x);
        if class.is_basket() {
            continue;
        }
        if let Some(&c) = layout.children(x).iter().find(|&&c| !layout.children(c).is_empty()) {
            return Err(not_flat(4, format!("node {x} has a non-leaf child {c}")));
        }
    }
    Ok(FlatStats { heaviness: h, empty_baskets, solo_heavy, light_depth_one: light })
}

/// Light depth-one nodes split into `K + 1` groups. Group `i < K` belongs
/// to the `i`-th empty basket (by id); the last group stays below the root.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LightPartition {
    pub groups: Vec<Vec<NodeId>>,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum PartitionError {
    #[error(transparent)]
    NotFlat(#[from] NotFlat),
    #[error("expected {expected} groups, found {found}")]
    GroupCount { expected: usize, found: usize },
    #[error("node {0} is not a light depth-one node")]
    NotLight(NodeId),
    #[error("node {0} appears twice")]
    Duplicate(NodeId),
    #[error("light node {0} is in no group")]
    Missing(NodeId),
    #[error("group {group} has total size {sum}, expected {expected}")]
    Sum { group: usize, sum: usize, expected: usize },
    #[error("group {group} violates the Union condition")]
    UnionCondition { group: usize },
    #[error("line {line}: invalid node id {token:?}")]
    Syntax { line: usize, token: String },
}

impl LightPartition {
    /// Checks that this is a valid certificate for the flat tree `t`.
    pub fn validate(&self, t: &Tree, ctx: ChargeContext) -> Result<FlatStats, PartitionError> {
        let stats = is_flat(t, ctx)?;
        let h = stats.heaviness;
        if self.groups.len() != stats.k() + 1 {
            return Err(PartitionError::GroupCount { expected: stats.k() + 1, found: self.groups.len() });
        }
        let layout = t.layout();
        let light: HashSet<NodeId> = stats.light_depth_one.iter().copied().collect();
        let mut seen = HashSet::new();
        for (g, group) in self.groups.iter().enumerate() {
            for &x in group {
                if !light.contains(&x) {
                    return Err(PartitionError::NotLight(x));
                }
                if !seen.insert(x) {
                    return Err(PartitionError::Duplicate(x));
                }
            }
            let sizes: Vec<usize> = group.iter().map(|&x| layout.size(x)).collect();
            let sum: usize = sizes.iter().sum();
            if sum != h {
                return Err(PartitionError::Sum { group: g, sum, expected: h });
            }
            if !multiset_union_condition(&sizes) {
                return Err(PartitionError::UnionCondition { group: g });
            }
        }
        if let Some(&x) = stats.light_depth_one.iter().find(|x| !seen.contains(x)) {
            return Err(PartitionError::Missing(x));
        }
        Ok(stats)
    }

    /// One line per group, ids separated by single spaces.
    pub fn parse(text: &str) -> Result<LightPartition, PartitionError> {
        let mut groups = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let group = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<u32>().ok().and_then(NodeId::new).ok_or_else(|| {
                        PartitionError::Syntax { line: i + 1, token: tok.to_string() }
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            groups.push(group);
        }
        Ok(LightPartition { groups })
    }
}

impl fmt::Display for LightPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for group in &self.groups {
            let line: Vec<String> = group.iter().map(|x| x.to_string()).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// Pushes realizing `p`: members of group `i < K` go below the `i`-th empty
/// basket.
pub fn witness_from_partition(
    t: &Tree,
    ctx: ChargeContext,
    p: &LightPartition,
) -> Result<PushSequence, PartitionError> {
    let stats = p.validate(t, ctx)?;
    let mut seq = PushSequence::new();
    for (basket, group) in stats.empty_baskets.iter().zip(&p.groups) {
        for &x in group {
            seq.push(x, *basket);
        }
    }
    Ok(seq)
}

/// Decides whether the flat tree `t` is a Union-Find tree, returning a
/// grouping of its light depth-one nodes when it is.
pub fn decide_flat_uf(t: &Tree, ctx: ChargeContext) -> Result<Option<LightPartition>, NotFlat> {
    let stats = is_flat(t, ctx)?;
    let layout = t.layout();
    // node pools per distinct size, largest size first
    let mut pools: Vec<(usize, Vec<NodeId>)> = Vec::new();
    let mut light = stats.light_depth_one.clone();
    light.sort_unstable_by_key(|&x| (std::cmp::Reverse(layout.size(x)), x));
    for x in light {
        let v = layout.size(x);
        match pools.last_mut() {
            Some((w, nodes)) if *w == v => nodes.push(x),
            _ => pools.push((v, vec![x])),
        }
    }
    let mut search = GroupSearch {
        values: pools.iter().map(|p| p.0).collect(),
        capacity: stats.heaviness,
        counts: pools.iter().map(|p| p.1.len()).collect(),
        chosen: Vec::new(),
        failed: HashSet::new(),
    };
    if !search.next_group() {
        return Ok(None);
    }
    debug_assert_eq!(search.chosen.len(), stats.k() + 1);
    let mut taken = vec![0usize; pools.len()];
    let groups = search
        .chosen
        .iter()
        .map(|counts| {
            let mut g = Vec::new();
            for (d, &c) in counts.iter().enumerate() {
                g.extend_from_slice(&pools[d].1[taken[d]..taken[d] + c]);
                taken[d] += c;
            }
            g.sort_unstable();
            g
        })
        .collect();
    Ok(Some(LightPartition { groups }))
}

/// Bin completion: groups are interchangeable, so each new group is built
/// around the largest remaining size and filled to exactly `capacity`.
/// Failures are memoized by the multiset of remaining sizes.
struct GroupSearch {
    /// Distinct sizes, decreasing.
    values: Vec<usize>,
    capacity: usize,
    /// Remaining count per distinct size.
    counts: Vec<usize>,
    /// Per-size counts of the groups built so far.
    chosen: Vec<Vec<usize>>,
    failed: HashSet<Vec<usize>>,
}

impl GroupSearch {
    fn next_group(&mut self) -> bool {
        let Some(top) = self.counts.iter().position(|&c| c > 0) else {
            return true;
        };
        if self.failed.contains(&self.counts) {
            return false;
        }
        let mut take = vec![0; self.values.len()];
        let smaller_total: usize = (top..self.values.len()).map(|d| self.values[d] * self.counts[d]).sum();
        if self.fill(top, true, self.capacity, smaller_total, &mut take) {
            return true;
        }
        self.failed.insert(self.counts.clone());
        false
    }

    /// Chooses how many items of size `values[d]` join the group, then moves
    /// on to smaller sizes. `left` is the capacity still open and `supply`
    /// the total size of remaining items of size `values[d]` or less.
    ///
    /// Once the group is full, the members smaller than `v` add up to
    /// exactly the capacity left after placing every member of size `v` or
    /// more, which makes the Union condition checkable size by size.
    fn fill(&mut self, d: usize, must_take: bool, left: usize, supply: usize, take: &mut Vec<usize>) -> bool {
        if left == 0 {
            for (c, t) in self.counts.iter_mut().zip(take.iter()) {
                *c -= t;
            }
            self.chosen.push(take.clone());
            if self.next_group() {
                return true;
            }
            self.chosen.pop();
            for (c, t) in self.counts.iter_mut().zip(take.iter()) {
                *c += t;
            }
            return false;
        }
        if d == self.values.len() || supply < left {
            return false;
        }
        let v = self.values[d];
        let avail = self.counts[d];
        let rest = supply - v * avail;
        let most = avail.min(left / v);
        let least = usize::from(must_take);
        for c in (least..=most).rev() {
            let after = left - c * v;
            if c > 0 && after + 1 < v {
                continue;
            }
            take[d] = c;
            if self.fill(d + 1, false, after, rest, take) {
                return true;
            }
        }
        take[d] = 0;
        false
    }
}

/// Sorted node sizes of each group of `p`.
pub fn group_sizes(t: &Tree, p: &LightPartition) -> Vec<Vec<usize>> {
    let layout = t.layout();
    let sizes: HashMap<NodeId, usize> = t.nodes().map(|x| (x, layout.size(x))).collect();
    p.groups
        .iter()
        .map(|g| {
            let mut v: Vec<usize> = g.iter().map(|x| sizes[x]).collect();
            v.sort_unstable();
            v
        })
        .collect()
}
