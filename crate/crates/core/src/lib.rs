//! Union trees, Union-Find trees and the push order.
//!
//! A Union tree is built from singletons by union-by-size merges; a
//! Union-Find tree may additionally undergo path compression. This crate
//! decides both classes, produces checkable witnesses, and implements the
//! flat-tree gadgets and the reduction from 3-Partition that make
//! Union-Find recognition NP-hard, together with brute-force oracles for
//! small sizes.

pub mod forest;
pub mod gen;
pub mod oracle;
pub mod recognizer;
pub mod reduction;
pub mod tree;

pub use tree::{CanonicalCode, Layout, NodeId, ParseError, Push, PushSequence, ShapeInterner, Tree, TreeError};
