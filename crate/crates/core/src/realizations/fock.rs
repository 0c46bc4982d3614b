//! Truncated Fock spaces, single and two-mode.

use crate::error::{Error, Result};
use crate::linalg::{annihilation, creation, number_operator, OperatorMatrix};
use crate::starprod::{Dequantizers, IndexSpace, QDPair};

/// Default truncation for one mode.
pub const DEFAULT_TRUNCATION: usize = 32;

/// Default truncation per mode for two modes.
pub const DEFAULT_TWO_MODE_TRUNCATION: usize = 16;

/// Span of `|0⟩ .. |N_t − 1⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FockSpace {
    pub n_trunc: usize,
}

impl FockSpace {
    pub fn new(n_trunc: usize) -> Result<Self> {
        if n_trunc < 2 {
            return Err(Error::InvalidSize(format!("Fock truncation {n_trunc} below 2")));
        }
        Ok(FockSpace { n_trunc })
    }

    pub fn annihilation(&self) -> OperatorMatrix {
        annihilation(self.n_trunc)
    }

    pub fn creation(&self) -> OperatorMatrix {
        creation(self.n_trunc)
    }

    /// `N̂|n⟩ = n|n⟩`.
    pub fn number(&self) -> OperatorMatrix {
        number_operator(self.n_trunc)
    }

    /// Largest deviation of `[a, a†]` from the identity on the levels where
    /// the truncated commutator is still exact.
    pub fn commutator_defect(&self) -> f64 {
        let a = self.annihilation();
        let c = &a * a.adjoint() - a.adjoint() * &a;
        (0..self.n_trunc - 1)
            .map(|n| (c[(n, n)].re - 1.0).abs() + c[(n, n)].im.abs())
            .fold(0.0, f64::max)
    }
}

/// Self-dual pair `|n⟩⟨m|` on the truncated Fock space.
pub fn fock_weyl_pair(n_trunc: usize) -> Result<QDPair> {
    FockSpace::new(n_trunc)?;
    QDPair::weyl("fock", n_trunc)
}

/// Self-dual pair `|n1, n2⟩⟨m1, m2|` with composite index `n1 * N2 + n2`.
/// Points are ordered by `(n1, n2, m1, m2)` row-major.
pub fn two_mode_weyl_pair(n1: usize, n2: usize) -> Result<QDPair> {
    FockSpace::new(n1)?;
    FockSpace::new(n2)?;
    let base = QDPair::weyl("two_mode", n1 * n2)?;
    let space = IndexSpace::counting("two_mode", vec![n1, n2, n1, n2])?;
    QDPair::new(space, n1 * n2, base.quantizers().to_vec(), Dequantizers::SelfDual)
}

/// Composite index of `|n1, n2⟩`.
pub fn two_mode_index(n2_trunc: usize, n1: usize, n2: usize) -> usize {
    n1 * n2_trunc + n2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ONE;

    #[test]
    fn ladder_entries() {
        let f = FockSpace::new(6).unwrap();
        let a = f.annihilation();
        for n in 0..5 {
            assert_eq!(a[(n, n + 1)].re, ((n + 1) as f64).sqrt());
        }
        assert!(f.commutator_defect() < 1e-14);
        assert_eq!(f.number()[(3, 3)], 3.0 * ONE);
        assert!(FockSpace::new(1).is_err());
    }

    #[test]
    fn two_mode_layout() {
        let pair = two_mode_weyl_pair(2, 3).unwrap();
        assert_eq!(pair.len(), 36);
        assert_eq!(pair.space().label(7), vec![0, 1, 0, 1]);
        assert_eq!(two_mode_index(3, 1, 2), 5);
    }
}
