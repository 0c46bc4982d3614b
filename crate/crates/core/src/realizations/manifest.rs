//! Declarative descriptions that rebuild a pair deterministically.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::quadrature::{Grid1D, QuadratureRule};
use crate::starprod::QDPair;

use super::coherent::{coherent_pair, CoherentGrid};
use super::fock::{fock_weyl_pair, two_mode_weyl_pair};
use super::position::position_pair;
use super::spin::{multiplet_pair, spin_weyl_pair};

/// `{"kind": ..., "params": {...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum PairManifest {
    Spin { j: f64 },
    Multiplet { js: Vec<f64> },
    Fock { n_trunc: usize },
    TwoMode { n1: usize, n2: usize },
    Position { a: f64, b: f64, points: usize, rule: QuadratureRule, n_trunc: usize },
    Coherent { side: usize, spacing: f64, n_trunc: usize },
}

impl PairManifest {
    pub fn build(&self) -> Result<QDPair> {
        match self {
            PairManifest::Spin { j } => spin_weyl_pair(*j),
            PairManifest::Multiplet { js } => multiplet_pair(js),
            PairManifest::Fock { n_trunc } => fock_weyl_pair(*n_trunc),
            PairManifest::TwoMode { n1, n2 } => two_mode_weyl_pair(*n1, *n2),
            PairManifest::Position { a, b, points, rule, n_trunc } => {
                position_pair(&Grid1D::build(*rule, *a, *b, *points)?, *n_trunc)
            }
            PairManifest::Coherent { side, spacing, n_trunc } => {
                coherent_pair(&CoherentGrid::square(*side, *spacing)?, *n_trunc)
            }
        }
    }
}
