//! Heaviness classes and the charge potential.
//!
//! For a threshold `H`, a node is light when its size is at most `H` and
//! heavy otherwise; a basket is a node with a heavy child, and an empty
//! basket has exactly one child, of size `H + 1`. The charge of a heavy node
//! is the total size of its light children minus `H`; light nodes have
//! charge 0. A push never raises the total charge, and every node of a
//! Union tree has non-negative charge.

use thiserror::Error;

use crate::tree::{Layout, NodeId, Tree, TreeError};

#[derive(Debug, Clone, Copy, Error, PartialEq, Eq)]
#[error("heaviness threshold must be at least 1")]
pub struct ZeroThreshold;

/// The heaviness threshold `H`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ChargeContext {
    heaviness: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NodeClass {
    Light,
    /// Heavy with no heavy child.
    Heavy,
    /// Heavy with a heavy child, but not an empty basket.
    Basket,
    EmptyBasket,
}

impl NodeClass {
    pub fn is_heavy(self) -> bool {
        self != NodeClass::Light
    }

    pub fn is_basket(self) -> bool {
        matches!(self, NodeClass::Basket | NodeClass::EmptyBasket)
    }
}

/// The five ways a push `x` below `y` can relate to the threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PushCase {
    /// Both light and `y` stays light.
    LightStaysLight,
    /// Both light and `y` becomes heavy.
    LightBecomesHeavy,
    /// `x` heavy, `y` light.
    HeavyIntoLight,
    /// `x` light, `y` heavy.
    LightIntoHeavy,
    /// Both heavy.
    HeavyIntoHeavy,
}

impl PushCase {
    /// Change of the total charge caused by a push of this kind.
    pub fn charge_delta(self, ctx: ChargeContext) -> i64 {
        match self {
            PushCase::LightBecomesHeavy | PushCase::HeavyIntoLight => -(ctx.heaviness as i64 + 1),
            _ => 0,
        }
    }
}

impl ChargeContext {
    pub fn new(heaviness: usize) -> Result<Self, ZeroThreshold> {
        if heaviness == 0 {
            return Err(ZeroThreshold);
        }
        Ok(ChargeContext { heaviness })
    }

    pub fn heaviness(self) -> usize {
        self.heaviness
    }

    pub fn is_heavy_size(self, size: usize) -> bool {
        size > self.heaviness
    }

    pub(crate) fn class_in(self, layout: &Layout, x: NodeId) -> NodeClass {
        let h = self.heaviness;
        if layout.size(x) <= h {
            return NodeClass::Light;
        }
        let kids = layout.children(x);
        if kids.len() == 1 && layout.size(kids[0]) == h + 1 {
            NodeClass::EmptyBasket
        } else if kids.iter().any(|&c| layout.size(c) > h) {
            NodeClass::Basket
        } else {
            NodeClass::Heavy
        }
    }

    pub(crate) fn charge_in(self, layout: &Layout, x: NodeId) -> i64 {
        if layout.size(x) <= self.heaviness {
            0
        } else {
            layout.sumsize(x, self.heaviness) as i64 - self.heaviness as i64
        }
    }

    pub fn classify(self, t: &Tree, x: NodeId) -> Result<NodeClass, TreeError> {
        t.size_of(x)?;
        Ok(self.class_in(&t.layout(), x))
    }

    /// Classes of all nodes, indexed by `id - 1`.
    pub fn classify_all(self, t: &Tree) -> Vec<NodeClass> {
        let layout = t.layout();
        t.nodes().map(|x| self.class_in(&layout, x)).collect()
    }

    pub fn charge(self, t: &Tree, x: NodeId) -> Result<i64, TreeError> {
        t.size_of(x)?;
        Ok(self.charge_in(&t.layout(), x))
    }

    /// Charges of all nodes, indexed by `id - 1`.
    pub fn charges(self, t: &Tree) -> Vec<i64> {
        let layout = t.layout();
        t.nodes().map(|x| self.charge_in(&layout, x)).collect()
    }

    pub fn total_charge(self, t: &Tree) -> i64 {
        let layout = t.layout();
        self.total_in(&layout, t)
    }

    pub(crate) fn total_in(self, layout: &Layout, t: &Tree) -> i64 {
        t.nodes().map(|x| self.charge_in(layout, x)).sum()
    }

    /// Which of the five push kinds `push(t, x, y)` is. Fails when the push
    /// is not applicable.
    pub fn push_case(self, t: &Tree, x: NodeId, y: NodeId) -> Result<PushCase, TreeError> {
        t.push(x, y)?;
        let layout = t.layout();
        let (sx, sy) = (layout.size(x), layout.size(y));
        let (hx, hy) = (self.is_heavy_size(sx), self.is_heavy_size(sy));
        Ok(match (hx, hy) {
            (false, false) if self.is_heavy_size(sx + sy) => PushCase::LightBecomesHeavy,
            (false, false) => PushCase::LightStaysLight,
            (true, false) => PushCase::HeavyIntoLight,
            (false, true) => PushCase::LightIntoHeavy,
            (true, true) => PushCase::HeavyIntoHeavy,
        })
    }
}

/// Charge of `x` under threshold `ctx`.
pub fn charge(t: &Tree, ctx: ChargeContext, x: NodeId) -> Result<i64, TreeError> {
    ctx.charge(t, x)
}

pub fn total_charge(t: &Tree, ctx: ChargeContext) -> i64 {
    ctx.total_charge(t)
}

pub fn classify(t: &Tree, ctx: ChargeContext, x: NodeId) -> Result<NodeClass, TreeError> {
    ctx.classify(t, x)
}
