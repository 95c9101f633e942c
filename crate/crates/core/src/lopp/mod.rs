//! Linear-optical circuits over phase shifters, beam splitters and mode swaps.

mod gadgets;

pub use gadgets::{
    ams, hadamard_network, jams, mirror, mode_block_swap, reversal, saturated_word_swap, word_swap,
    word_swap_with_stats, WordSwapStats,
};

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum LoppNode {
    Empty,
    Wire,
    Swap,
    Phase(f64),
    BeamSplitter(f64),
    Seq(LoppCircuit, LoppCircuit),
    Par(LoppCircuit, LoppCircuit),
}

/// Immutable optical circuit term with cached mode count.
#[derive(Clone, PartialEq)]
pub struct LoppCircuit {
    node: Arc<LoppNode>,
    modes: usize,
}

impl LoppCircuit {
    fn make(node: LoppNode, modes: usize) -> Self {
        Self {
            node: Arc::new(node),
            modes,
        }
    }

    pub fn empty() -> Self {
        Self::make(LoppNode::Empty, 0)
    }

    pub fn wire() -> Self {
        Self::make(LoppNode::Wire, 1)
    }

    pub fn swap() -> Self {
        Self::make(LoppNode::Swap, 2)
    }

    pub fn phase(theta: f64) -> Self {
        Self::make(LoppNode::Phase(theta), 1)
    }

    pub fn beam_splitter(theta: f64) -> Self {
        Self::make(LoppNode::BeamSplitter(theta), 2)
    }

    /// `f ∘ g`; mode count taken from `f`.
    pub fn seq(f: LoppCircuit, g: LoppCircuit) -> Self {
        let modes = f.modes;
        Self::make(LoppNode::Seq(f, g), modes)
    }

    pub fn par(top: LoppCircuit, bottom: LoppCircuit) -> Self {
        let modes = top.modes + bottom.modes;
        Self::make(LoppNode::Par(top, bottom), modes)
    }

    /// Identity on `m` modes as a balanced tree of wires.
    pub fn id(m: usize) -> Self {
        match m {
            0 => Self::empty(),
            1 => Self::wire(),
            _ => Self::par(Self::id(m / 2), Self::id(m - m / 2)),
        }
    }

    /// Balanced composite in application order.
    pub fn chain(modes: usize, gates: Vec<LoppCircuit>) -> Self {
        fn build(g: &[LoppCircuit]) -> LoppCircuit {
            match g.len() {
                1 => g[0].clone(),
                n => {
                    let (first, last) = g.split_at(n / 2);
                    LoppCircuit::seq(build(last), build(first))
                }
            }
        }
        if gates.is_empty() {
            Self::id(modes)
        } else {
            build(&gates)
        }
    }

    /// Direct sum of blocks, top block on the lowest modes.
    pub fn tensor(blocks: Vec<LoppCircuit>) -> Self {
        fn build(g: &[LoppCircuit]) -> LoppCircuit {
            match g.len() {
                0 => LoppCircuit::empty(),
                1 => g[0].clone(),
                n => {
                    let (a, b) = g.split_at(n / 2);
                    LoppCircuit::par(build(a), build(b))
                }
            }
        }
        build(&blocks)
    }

    pub fn padded(self, p: usize, q: usize) -> Self {
        let mut c = self;
        if p > 0 {
            c = Self::par(Self::id(p), c);
        }
        if q > 0 {
            c = Self::par(c, Self::id(q));
        }
        c
    }

    pub fn node(&self) -> &LoppNode {
        &self.node
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn is_id_tree(&self) -> bool {
        match self.node() {
            LoppNode::Empty | LoppNode::Wire => true,
            LoppNode::Par(a, b) => a.is_id_tree() && b.is_id_tree(),
            _ => false,
        }
    }

    pub fn validate(&self) -> Result<usize> {
        self.validate_at("")
    }

    fn validate_at(&self, path: &str) -> Result<usize> {
        let join = |step: &str| {
            if path.is_empty() {
                step.to_string()
            } else {
                format!("{path}.{step}")
            }
        };
        match self.node() {
            LoppNode::Empty => Ok(0),
            LoppNode::Wire | LoppNode::Phase(_) => Ok(1),
            LoppNode::Swap | LoppNode::BeamSplitter(_) => Ok(2),
            LoppNode::Seq(f, g) => {
                let a = f.validate_at(&join("seq.left"))?;
                let b = g.validate_at(&join("seq.right"))?;
                if a != b {
                    return Err(Error::ArityMismatch {
                        path: join("seq.right"),
                        left: a,
                        right: b,
                    });
                }
                Ok(a)
            }
            LoppNode::Par(a, b) => {
                Ok(a.validate_at(&join("par.top"))? + b.validate_at(&join("par.bottom"))?)
            }
        }
    }

    /// Count of non-structural leaves (phases, beam splitters, swaps).
    pub fn gate_count(&self) -> usize {
        match self.node() {
            LoppNode::Empty | LoppNode::Wire => 0,
            LoppNode::Swap | LoppNode::Phase(_) | LoppNode::BeamSplitter(_) => 1,
            LoppNode::Seq(a, b) | LoppNode::Par(a, b) => a.gate_count() + b.gate_count(),
        }
    }
}

impl fmt::Debug for LoppCircuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node() {
            LoppNode::Empty => write!(f, "empty"),
            LoppNode::Wire => write!(f, "wire"),
            LoppNode::Swap => write!(f, "swap"),
            LoppNode::Phase(t) => write!(f, "(ps {t})"),
            LoppNode::BeamSplitter(t) => write!(f, "(bs {t})"),
            LoppNode::Seq(a, b) => write!(f, "(seq {a:?} {b:?})"),
            LoppNode::Par(a, b) => write!(f, "(par {a:?} {b:?})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mode_counts() {
        assert_eq!(LoppCircuit::id(7).validate(), Ok(7));
        let bad = LoppCircuit::seq(LoppCircuit::wire(), LoppCircuit::beam_splitter(0.1));
        assert!(matches!(bad.validate(), Err(Error::ArityMismatch { .. })));
        let t = LoppCircuit::tensor(vec![LoppCircuit::phase(1.0); 5]);
        assert_eq!(t.validate(), Ok(5));
        assert_eq!(t.gate_count(), 5);
        assert!(LoppCircuit::id(4).is_id_tree());
        assert_eq!(LoppCircuit::chain(3, vec![]), LoppCircuit::id(3));
    }
}
