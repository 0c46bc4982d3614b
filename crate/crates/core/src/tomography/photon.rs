//! Displaced number states, photon-number tomograms and the s-ordered
//! reconstruction.

use std::f64::consts::{FRAC_PI_2, SQRT_2};

use nalgebra::{DMatrix, SymmetricEigen};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermiticity_deviation, identity, max_abs_diff, OperatorMatrix, C64, I};
use crate::realizations::CoherentGrid;

/// Ordering parameter used when none is given.
pub const DEFAULT_ORDERING: f64 = 0.0;

/// Largest exponent accepted for `|t|ⁿ` before reporting a range error.
const LOG_WEIGHT_LIMIT: f64 = 690.0;

fn padded_dim(n_trunc: usize, max_abs_z: f64) -> usize {
    let r = (n_trunc as f64).sqrt() + max_abs_z + 4.0;
    ((r * r).ceil() as usize).max(n_trunc + 16)
}

/// Displacements `exp(z a† − z* a)` on `n_trunc` levels.
///
/// The exponential is taken in a larger working space and the leading block
/// is kept, so every entry is accurate for `|z| ≤ max_abs_z`.
#[derive(Debug, Clone)]
pub struct Displacer {
    n_trunc: usize,
    max_abs_z: f64,
    /// Eigenvalues of `q` in the working space, ascending.
    values: Vec<f64>,
    /// Matching real eigenvectors as columns.
    vectors: DMatrix<f64>,
}

impl Displacer {
    pub fn new(n_trunc: usize, max_abs_z: f64) -> Result<Self> {
        Self::with_min_work(n_trunc, max_abs_z, 0)
    }

    /// As `new`, with a working space of at least `min_work` levels.
    pub fn with_min_work(n_trunc: usize, max_abs_z: f64, min_work: usize) -> Result<Self> {
        if n_trunc == 0 {
            return Err(Error::InvalidSize("truncation must be positive".into()));
        }
        let work = padded_dim(n_trunc, max_abs_z.abs()).max(min_work);
        let q = DMatrix::from_fn(work, work, |i, j| {
            if i + 1 == j || j + 1 == i {
                (i.max(j) as f64 / 2.0).sqrt()
            } else {
                0.0
            }
        });
        let eig = SymmetricEigen::new(q);
        let mut order: Vec<usize> = (0..work).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = DMatrix::from_fn(work, work, |r, c| eig.eigenvectors[(r, order[c])]);
        Ok(Displacer { n_trunc, max_abs_z: max_abs_z.abs(), values, vectors })
    }

    pub fn n_trunc(&self) -> usize {
        self.n_trunc
    }

    pub fn work_dim(&self) -> usize {
        self.values.len()
    }

    pub fn max_abs_z(&self) -> f64 {
        self.max_abs_z
    }

    /// Rows `0..n_trunc`, columns `0..cols` of `D(z)` in the working space.
    fn rows(&self, z: C64, cols: usize) -> OperatorMatrix {
        let n = self.n_trunc;
        if z == C64::new(0.0, 0.0) {
            return OperatorMatrix::identity(n, cols);
        }
        let (r, theta) = z.to_polar();
        let v = &self.vectors;
        // D(r) = exp(−i√2 r p) and p = e^{iπN/2} q e^{−iπN/2}, D(z) = e^{iθN} D(r) e^{−iθN}
        let top = v.rows(0, n);
        let right = v.rows(0, cols).transpose();
        let mut left = top.clone_owned();
        for (c, mut col) in left.column_iter_mut().enumerate() {
            col *= (SQRT_2 * r * self.values[c]).cos();
        }
        let re = &left * &right;
        left.copy_from(&top);
        for (c, mut col) in left.column_iter_mut().enumerate() {
            col *= (SQRT_2 * r * self.values[c]).sin();
        }
        let im = left * right;
        let phi = theta + FRAC_PI_2;
        OperatorMatrix::from_fn(n, cols, |k, l| {
            C64::from_polar(1.0, phi * (k as f64 - l as f64)) * C64::new(re[(k, l)], -im[(k, l)])
        })
    }

    pub fn displacement(&self, z: C64) -> OperatorMatrix {
        self.rows(z, self.n_trunc)
    }

    /// `T(z, s) = (2/(1−s)) D(z) tᴺ D(z)†`, `t = (s+1)/(s−1)`.
    pub fn displaced_parity(&self, z: C64, s: f64) -> Result<OperatorMatrix> {
        let t = ordering_ratio(s)?;
        if s == 0.0 && 2.0 * z.norm() <= self.max_abs_z {
            // D(z) Π D(z)† = D(2z) Π
            let mut out = self.displacement(2.0 * z);
            for (l, mut col) in out.column_iter_mut().enumerate() {
                col *= C64::new(if l % 2 == 0 { 2.0 } else { -2.0 }, 0.0);
            }
            return Ok(out);
        }
        if t.abs() > 1.0 {
            return displaced_parity_closed(self.n_trunc, z, s);
        }
        let (closed, largest) = closed_form(self.n_trunc, z, s)?;
        if largest < CANCELLATION_LIMIT {
            return Ok(closed);
        }
        let cols = self.work_dim();
        let rows = self.rows(z, cols);
        let mut weighted = rows.clone();
        let mut tn = 1.0;
        for mut col in weighted.column_iter_mut() {
            col *= C64::new(tn, 0.0);
            tn *= t;
        }
        Ok(weighted * rows.adjoint() * C64::new(2.0 / (1.0 - s), 0.0))
    }
}

/// Truncated displacement with its unitarity defect `max|D D† − 1|`.
#[derive(Debug, Clone)]
pub struct Displacement {
    pub operator: OperatorMatrix,
    pub unitarity_defect: f64,
}

pub fn displacement_operator(n_trunc: usize, z: C64) -> Result<Displacement> {
    let operator = Displacer::new(n_trunc, z.norm())?.displacement(z);
    let unitarity_defect = max_abs_diff(&(&operator * operator.adjoint()), &identity(n_trunc));
    Ok(Displacement { operator, unitarity_defect })
}

fn ordering_ratio(s: f64) -> Result<f64> {
    if !(s.is_finite() && s.abs() < 1.0) {
        return Err(Error::OrderingParameter(s));
    }
    Ok((s + 1.0) / (s - 1.0))
}

fn check_weight_range(t: f64, n_max: usize) -> Result<()> {
    let lt = t.abs().ln();
    if lt > 0.0 && lt * n_max.saturating_sub(1) as f64 > LOG_WEIGHT_LIMIT {
        let suggested = (LOG_WEIGHT_LIMIT / lt).floor() as usize;
        return Err(Error::WeightRange { n: suggested + 1, suggested });
    }
    Ok(())
}

fn ln_factorials(n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n + 1];
    for k in 1..=n {
        out[k] = out[k - 1] + (k as f64).ln();
    }
    out
}

/// Normal-ordered closed form of `T(z, s)` on the first `n_trunc` levels.
///
/// `tᴺ = :exp((t−1) a†a):`, so the entries are finite sums even when
/// `|t| > 1`.
pub fn displaced_parity_closed(n_trunc: usize, z: C64, s: f64) -> Result<OperatorMatrix> {
    Ok(closed_form(n_trunc, z, s)?.0)
}

/// Closed form together with the log-magnitude of its largest summand.
fn closed_form(n_trunc: usize, z: C64, s: f64) -> Result<(OperatorMatrix, f64)> {
    let t = ordering_ratio(s)?;
    check_weight_range(t, n_trunc)?;
    let c = t - 1.0;
    let beta = -c * z;
    let lf = ln_factorials(n_trunc);
    let (lb, ab) = (beta.norm().ln(), beta.arg());
    let lt = t.abs().ln();
    let base = c * z.norm_sqr();
    let pref = 2.0 / (1.0 - s);
    let mut largest = f64::NEG_INFINITY;
    let mut out = OperatorMatrix::zeros(n_trunc, n_trunc);
    for k in 0..n_trunc {
        for l in k..n_trunc {
            let mut acc = C64::new(0.0, 0.0);
            for n in 0..=k {
                let (dk, dl) = ((k - n) as f64, (l - n) as f64);
                let mut mag = base + 0.5 * (lf[k] + lf[l]) - lf[n] - lf[k - n] - lf[l - n] + n as f64 * lt;
                let mut phase = 0.0;
                if dk + dl > 0.0 {
                    if beta.norm() == 0.0 {
                        continue;
                    }
                    mag += (dk + dl) * lb;
                    phase += (dk - dl) * ab;
                }
                largest = largest.max(mag);
                let sign = if t < 0.0 && n % 2 == 1 { -1.0 } else { 1.0 };
                acc += C64::from_polar(sign * mag.exp(), phase);
            }
            if k == l {
                acc.im = 0.0;
            }
            out[(k, l)] = acc * pref;
            out[(l, k)] = (acc * pref).conj();
        }
    }
    Ok((out, largest))
}

/// Summands above `e^CANCELLATION_LIMIT` make the closed form lose more
/// than five digits for bounded `T`.
const CANCELLATION_LIMIT: f64 = 11.5;

pub fn displaced_parity(n_trunc: usize, z: C64, s: f64) -> Result<OperatorMatrix> {
    Displacer::new(n_trunc, 2.0 * z.norm())?.displaced_parity(z, s)
}

fn check_square(a: &OperatorMatrix, n_trunc: usize) -> Result<()> {
    if a.nrows() != n_trunc || a.ncols() != n_trunc {
        return Err(Error::DimensionMismatch { expected: n_trunc, actual: a.nrows().max(a.ncols()) });
    }
    Ok(())
}

/// `Φ(n, m; z) = ⟨n,z|A|m,z⟩` with `|n,z⟩ = D(z)|n⟩`.
pub fn photon_symbol(n_trunc: usize, z: C64, a: &OperatorMatrix) -> Result<OperatorMatrix> {
    check_square(a, n_trunc)?;
    let d = Displacer::new(n_trunc, z.norm())?.displacement(z);
    Ok(d.adjoint() * a * d)
}

/// Photon-number tomogram on a lattice.
///
/// `table[x][n]` holds `Φ(n, n; z_x)`, which is `𝒫(n, −z_x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhotonTomogram {
    pub z_grid: CoherentGrid,
    pub n_max: usize,
    pub table: Vec<Vec<f64>>,
}

impl PhotonTomogram {
    pub fn zero(z_grid: CoherentGrid, n_max: usize) -> Self {
        let table = vec![vec![0.0; n_max]; z_grid.len()];
        PhotonTomogram { z_grid, n_max, table }
    }

    pub fn column(&self, x: usize) -> &[f64] {
        &self.table[x]
    }
}

/// Photon counts recorded per lattice point for a state on `n` levels:
/// enough for the displaced state to fit at every lattice point.
pub fn default_count_range(n_trunc: usize, z_grid: &CoherentGrid) -> usize {
    padded_dim(n_trunc, z_grid.max_abs())
}

/// `𝒫(n, −z) = ⟨n|D(z)† ρ D(z)|n⟩` for `n < n_max` at every lattice point.
pub fn photon_tomogram(rho: &OperatorMatrix, z_grid: &CoherentGrid, n_max: usize) -> Result<PhotonTomogram> {
    let n = rho.nrows();
    check_square(rho, n)?;
    let dev = hermiticity_deviation(rho);
    if dev > 1e-10 {
        return Err(Error::NotHermitian(dev));
    }
    let disp = Displacer::with_min_work(n, z_grid.max_abs(), n_max)?;
    let cols = n_max;
    let table = z_grid
        .points
        .par_iter()
        .map(|&z| {
            let d = disp.rows(z, cols);
            let rd = rho * &d;
            (0..cols).map(|k| d.column(k).dotc(&rd.column(k)).re).collect()
        })
        .collect();
    Ok(PhotonTomogram { z_grid: z_grid.clone(), n_max, table })
}

/// Trapezoid factor of lattice point `x` on a square lattice.
pub(crate) fn lattice_trapezoid(side: usize, x: usize) -> f64 {
    let edge = |i: usize| if side > 1 && (i == 0 || i == side - 1) { 0.5 } else { 1.0 };
    edge(x / side) * edge(x % side)
}

/// `A = Σ_z (d²z/π) Σ_n 𝒫(n,−z) (2/(1−s)) tⁿ T(z, −s)` over the lattice.
pub fn photon_reconstruct(tomogram: &PhotonTomogram, s: f64, n_trunc: usize) -> Result<OperatorMatrix> {
    let t = ordering_ratio(s)?;
    check_weight_range(1.0 / t, n_trunc)?;
    let grid = &tomogram.z_grid;
    let disp = Displacer::new(n_trunc, 2.0 * grid.max_abs())?;
    let pref = 2.0 / (1.0 - s);
    let cell = grid.cell_weight();
    let terms: Vec<Option<OperatorMatrix>> = (0..grid.len())
        .into_par_iter()
        .map(|x| {
            let mut w = 0.0;
            let mut tn = 1.0;
            for &p in &tomogram.table[x] {
                w += tn * p;
                tn *= t;
            }
            w *= pref * cell * lattice_trapezoid(grid.side, x);
            if w == 0.0 {
                return Ok(None);
            }
            Ok(Some(disp.displaced_parity(grid.points[x], -s)? * C64::new(w, 0.0)))
        })
        .collect::<Result<_>>()?;
    let mut acc = OperatorMatrix::zeros(n_trunc, n_trunc);
    for term in terms.into_iter().flatten() {
        acc += term;
    }
    Ok(acc)
}

/// `e^{iθN} ρ e^{−iθN}`.
pub fn phase_rotate(rho: &OperatorMatrix, theta: f64) -> OperatorMatrix {
    OperatorMatrix::from_fn(rho.nrows(), rho.ncols(), |k, l| {
        rho[(k, l)] * (I * theta * (k as f64 - l as f64)).exp()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{frobenius, trace};

    fn vacuum(n: usize) -> OperatorMatrix {
        let mut rho = OperatorMatrix::zeros(n, n);
        rho[(0, 0)] = C64::new(1.0, 0.0);
        rho
    }

    #[test]
    fn zero_displacement_is_identity() {
        let d = displacement_operator(12, C64::new(0.0, 0.0)).unwrap();
        assert!(max_abs_diff(&d.operator, &identity(12)) < 1e-13);
    }

    #[test]
    fn parity_at_origin() {
        let t = displaced_parity(8, C64::new(0.0, 0.0), 0.0).unwrap();
        for n in 0..8 {
            let want = if n % 2 == 0 { 2.0 } else { -2.0 };
            assert!((t[(n, n)].re - want).abs() < 1e-12);
        }
        assert!(trace(&t).norm() < 1e-11);
    }

    #[test]
    fn closed_form_agrees_with_padded() {
        let z = C64::new(0.7, 0.3);
        for s in [-0.5, -0.2, 0.0] {
            let a = displaced_parity(10, z, s).unwrap();
            let b = displaced_parity_closed(10, z, s).unwrap();
            assert!(max_abs_diff(&a, &b) < 1e-11, "s = {s}");
        }
    }

    #[test]
    fn ordering_parameter_checked() {
        assert!(matches!(displaced_parity(4, C64::new(0.0, 0.0), 1.0), Err(Error::OrderingParameter(_))));
        let grid = CoherentGrid::square(3, 0.5).unwrap();
        let tomo = PhotonTomogram::zero(grid, 64);
        assert!(matches!(photon_reconstruct(&tomo, -0.99999, 64), Err(Error::WeightRange { .. })));
    }

    #[test]
    fn zero_tomogram_reconstructs_zero() {
        let grid = CoherentGrid::square(5, 0.5).unwrap();
        let tomo = PhotonTomogram::zero(grid, 6);
        assert_eq!(frobenius(&photon_reconstruct(&tomo, 0.0, 6).unwrap()), 0.0);
    }

    #[test]
    fn tomogram_at_origin_is_fock_diagonal() {
        let mut rho = vacuum(6) * C64::new(0.25, 0.0);
        rho[(2, 2)] = C64::new(0.75, 0.0);
        let grid = CoherentGrid::square(1, 1.0).unwrap();
        let tomo = photon_tomogram(&rho, &grid, 6).unwrap();
        for n in 0..6 {
            assert_eq!(tomo.table[0][n], rho[(n, n)].re);
        }
    }
}
