//! Recognition of Union trees, Union-Find trees and flat trees.

mod charge;
mod flat;
mod search;
mod union;

pub use charge::{charge, classify, total_charge, ChargeContext, NodeClass, PushCase, ZeroThreshold};
pub use flat::{
    decide_flat_uf, group_sizes, is_flat, witness_from_partition, FlatStats, LightPartition, NotFlat,
    PartitionError,
};
pub use search::{is_union_find_tree, SearchReport, UfSearch};
pub use union::{is_union_tree, multiset_union_condition, union_violations, Violation};
