//! Spin multiplets `|j m⟩` and their Weyl pairs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groupoid::FiniteGroupoid;
use crate::linalg::Operator;
use crate::starprod::{Dequantizers, IndexSpace, QDPair};

/// Spin `j`, stored as `2j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpinSpace {
    pub twice_j: u32,
}

impl SpinSpace {
    pub fn new(j: f64) -> Result<Self> {
        let twice = 2.0 * j;
        if !(twice.is_finite() && twice >= 0.0 && (twice - twice.round()).abs() < 1e-12) || twice > 1e6 {
            return Err(Error::InvalidSpin(j));
        }
        Ok(SpinSpace { twice_j: twice.round() as u32 })
    }

    pub fn j(&self) -> f64 {
        self.twice_j as f64 / 2.0
    }

    pub fn dim(&self) -> usize {
        self.twice_j as usize + 1
    }

    /// Basis index of `m`, i.e. `m + j`.
    pub fn index(&self, m: f64) -> Option<usize> {
        let i = m + self.j();
        let r = i.round();
        ((i - r).abs() < 1e-12 && r >= 0.0 && (r as usize) < self.dim()).then_some(r as usize)
    }

    pub fn m(&self, index: usize) -> f64 {
        index as f64 - self.j()
    }
}

/// Self-dual pair `|m⟩⟨m'|` over `(2j+1)²` points.
pub fn spin_weyl_pair(j: f64) -> Result<QDPair> {
    QDPair::weyl("spin", SpinSpace::new(j)?.dim())
}

/// Block-diagonal pair on `⊕_j H_j` built from the units of each block.
///
/// Index points run over the blocks in order, each block contributing its
/// `(m, m')` pairs row-major.
pub fn multiplet_pair(js: &[f64]) -> Result<QDPair> {
    if js.is_empty() {
        return Err(Error::Empty("multiplet without spins"));
    }
    let spaces = js.iter().map(|&j| SpinSpace::new(j)).collect::<Result<Vec<_>>>()?;
    let total: usize = spaces.iter().map(|s| s.dim()).sum();
    let mut ops = Vec::new();
    let mut offset = 0;
    for s in &spaces {
        let d = s.dim();
        for x in 0..d * d {
            ops.push(Operator::Unit { dim: total, row: offset + x / d, col: offset + x % d });
        }
        offset += d;
    }
    let space = IndexSpace::counting("multiplet", vec![ops.len()])?;
    QDPair::new(space, total, ops, Dequantizers::SelfDual)
}

/// Disjoint union of the pair groupoids of each multiplet, indexed like
/// [`multiplet_pair`].
pub fn multiplet_groupoid(js: &[f64]) -> Result<FiniteGroupoid> {
    let parts = js
        .iter()
        .map(|&j| FiniteGroupoid::pair(SpinSpace::new(j)?.dim()))
        .collect::<Result<Vec<_>>>()?;
    FiniteGroupoid::disjoint_union(&parts)
}
