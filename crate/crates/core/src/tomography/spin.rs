//! Rotated spin symbols and spin tomograms.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermiticity_deviation, OperatorMatrix, C64};
use crate::realizations::SpinSpace;

/// SU(2) element `exp(−iαJz) exp(−iβJy) exp(−iγJz)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EulerAngles {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl EulerAngles {
    pub const IDENTITY: EulerAngles = EulerAngles { alpha: 0.0, beta: 0.0, gamma: 0.0 };

    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Self {
        EulerAngles { alpha, beta, gamma }
    }
}

/// Diagonal of the rotated symbol of a state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpinTomogram {
    pub j: f64,
    pub g: EulerAngles,
    /// Indexed by `m + j`, ascending `m`.
    pub probabilities: Vec<f64>,
}

impl SpinTomogram {
    pub fn sum(&self) -> f64 {
        self.probabilities.iter().sum()
    }

    pub fn min(&self) -> f64 {
        self.probabilities.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

fn ln_factorials(n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n + 1];
    for k in 1..=n {
        out[k] = out[k - 1] + (k as f64).ln();
    }
    out
}

/// Small Wigner matrix `d(β)[m', m] = ⟨j m'| e^{−iβJy} |j m⟩`, basis ordered by ascending `m`.
pub fn wigner_small_d(j: f64, beta: f64) -> Result<Vec<Vec<f64>>> {
    let space = SpinSpace::new(j)?;
    let tj = space.twice_j as i64;
    let dim = space.dim();
    let lf = ln_factorials(dim);
    let (c, s) = ((beta / 2.0).cos(), (beta / 2.0).sin());
    let mut d = vec![vec![0.0; dim]; dim];
    for (r, row) in d.iter_mut().enumerate() {
        let r = r as i64;
        for (col, entry) in row.iter_mut().enumerate() {
            let col = col as i64;
            let lo = (col - r).max(0);
            let hi = col.min(tj - r);
            let norm = 0.5 * (lf[r as usize] + lf[(tj - r) as usize] + lf[col as usize] + lf[(tj - col) as usize]);
            let mut acc = 0.0;
            for k in lo..=hi {
                let denom = lf[(col - k) as usize] + lf[k as usize] + lf[(r - col + k) as usize] + lf[(tj - r - k) as usize];
                let sign = if (r - col + k) % 2 == 0 { 1.0 } else { -1.0 };
                let pc = (tj + col - r - 2 * k) as i32;
                let ps = (r - col + 2 * k) as i32;
                acc += sign * (norm - denom).exp() * c.powi(pc) * s.powi(ps);
            }
            *entry = acc;
        }
    }
    Ok(d)
}

/// Wigner matrix `D(g)[m', m] = e^{−im'α} d(β)[m', m] e^{−imγ}`.
pub fn wigner_d(j: f64, g: EulerAngles) -> Result<OperatorMatrix> {
    let space = SpinSpace::new(j)?;
    let d = wigner_small_d(j, g.beta)?;
    let dim = space.dim();
    Ok(OperatorMatrix::from_fn(dim, dim, |r, c| {
        let phase = -(space.m(r) * g.alpha + space.m(c) * g.gamma);
        C64::from_polar(d[r][c], phase)
    }))
}

fn check_dim(j: f64, a: &OperatorMatrix) -> Result<usize> {
    let dim = SpinSpace::new(j)?.dim();
    if a.nrows() != dim || a.ncols() != dim {
        return Err(Error::DimensionMismatch { expected: dim, actual: a.nrows().max(a.ncols()) });
    }
    Ok(dim)
}

/// `w(m, m') = ⟨g,jm|A|g,jm'⟩` with `|g,jm⟩ = D(g)|jm⟩`.
pub fn spin_symbol(j: f64, g: EulerAngles, a: &OperatorMatrix) -> Result<OperatorMatrix> {
    check_dim(j, a)?;
    let d = wigner_d(j, g)?;
    Ok(d.adjoint() * a * d)
}

/// `A = Σ w(m, m') D|jm⟩⟨jm'|D†`.
pub fn spin_reconstruct_at_g(j: f64, g: EulerAngles, w: &OperatorMatrix) -> Result<OperatorMatrix> {
    check_dim(j, w)?;
    let d = wigner_d(j, g)?;
    Ok(&d * w * d.adjoint())
}

pub fn spin_tomogram(j: f64, g: EulerAngles, rho: &OperatorMatrix) -> Result<SpinTomogram> {
    let dev = hermiticity_deviation(rho);
    if dev > 1e-10 {
        return Err(Error::NotHermitian(dev));
    }
    let w = spin_symbol(j, g, rho)?;
    Ok(SpinTomogram { j, g, probabilities: (0..w.nrows()).map(|k| w[(k, k)].re).collect() })
}
