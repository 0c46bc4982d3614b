//! Spin, photon-number and symplectic tomography.

pub mod photon;
pub mod spin;
pub mod symplectic;

use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::linalg::{frobenius, trace, OperatorMatrix, C64};

pub use photon::{
    default_count_range, displaced_parity, displacement_operator, photon_reconstruct, photon_symbol, photon_tomogram, Displacement, Displacer,
    PhotonTomogram, DEFAULT_ORDERING,
};
pub use spin::{spin_reconstruct_at_g, spin_symbol, spin_tomogram, wigner_d, EulerAngles, SpinTomogram};
pub use symplectic::{
    default_padding, intertwining_kernel, quadrature_operator, QuadratureBasis, symplectic_quasi_symbol, symplectic_reconstruct, symplectic_tomogram, Atom,
    Intertwiner, QuadratureSpectrum, StateSource, SymplecticGrid, SymplecticReconstruction, SymplecticTomogram,
    TomogramSource,
};

/// Random density matrix `G G† / Tr[G G†]` with Gaussian `G`.
pub fn random_density_matrix<R: Rng>(dim: usize, rng: &mut R) -> OperatorMatrix {
    let g = OperatorMatrix::from_fn(dim, dim, |_, _| C64::new(gaussian(rng), gaussian(rng)));
    let rho = &g * g.adjoint();
    let tr = trace(&rho).re;
    let mut rho = rho / C64::new(tr, 0.0);
    for k in 0..dim {
        rho[(k, k)].im = 0.0;
    }
    rho
}

fn gaussian<R: Rng>(rng: &mut R) -> f64 {
    let u: f64 = rng.random::<f64>().max(f64::MIN_POSITIVE);
    let v: f64 = rng.random();
    (-2.0 * u.ln()).sqrt() * (2.0 * PI * v).cos()
}

pub fn random_euler_angles<R: Rng>(rng: &mut R) -> EulerAngles {
    EulerAngles::new(2.0 * PI * rng.random::<f64>(), PI * rng.random::<f64>(), 2.0 * PI * rng.random::<f64>())
}

/// Lattice used by a reconstruction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub half_width: f64,
    pub spacing: f64,
    pub side: usize,
}

/// Outcome of a reconstruction compared with a reference state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionReport {
    pub scheme: String,
    pub grid: LatticeSpec,
    #[serde(rename = "N_t")]
    pub n_trunc: usize,
    pub frobenius_error: f64,
    pub trace_error: f64,
    pub seed: Option<u64>,
}

impl ReconstructionReport {
    pub fn compare(
        scheme: &str,
        grid: LatticeSpec,
        reconstructed: &OperatorMatrix,
        reference: &OperatorMatrix,
        seed: Option<u64>,
    ) -> Self {
        ReconstructionReport {
            scheme: scheme.to_string(),
            grid,
            n_trunc: reference.nrows(),
            frobenius_error: frobenius(&(reconstructed - reference)),
            trace_error: (trace(reconstructed) - trace(reference)).norm(),
            seed,
        }
    }
}
