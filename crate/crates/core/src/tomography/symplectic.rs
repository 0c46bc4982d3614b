//! Quadrature spectra, symplectic tomograms, the symplectic reconstruction
//! and the intertwining kernel.

use std::f64::consts::{PI, SQRT_2};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{annihilation, creation, hermiticity_deviation, HermitianEigen, OperatorMatrix, C64};

/// Extra levels of the working space used by reconstructions on `n` levels.
pub fn default_padding(n_trunc: usize) -> usize {
    n_trunc.max(24)
}

/// `μ q + ν p` with `q = (a + a†)/√2`, `p = (a − a†)/(i√2)`.
pub fn quadrature_operator(n_trunc: usize, mu: f64, nu: f64) -> Result<OperatorMatrix> {
    if mu == 0.0 && nu == 0.0 {
        return Err(Error::DegenerateDirection);
    }
    Ok(quadrature_unchecked(n_trunc, mu, nu))
}

fn quadrature_unchecked(n_trunc: usize, mu: f64, nu: f64) -> OperatorMatrix {
    let a = annihilation(n_trunc);
    let ad = creation(n_trunc);
    let cq = C64::new(mu / SQRT_2, 0.0);
    let cp = C64::new(0.0, -nu / SQRT_2);
    (&a + &ad) * cq + (a - ad) * cp
}

/// Eigen-decomposition of the truncated position operator, shared by all
/// directions on the same number of levels.
#[derive(Debug, Clone)]
pub struct QuadratureBasis {
    values: Vec<f64>,
    vectors: OperatorMatrix,
}

impl QuadratureBasis {
    pub fn new(n_trunc: usize) -> Result<Self> {
        if n_trunc == 0 {
            return Err(Error::InvalidSize("truncation must be positive".into()));
        }
        let eig = HermitianEigen::new(&quadrature_unchecked(n_trunc, 1.0, 0.0));
        Ok(QuadratureBasis { values: eig.values, vectors: eig.vectors })
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// Spectrum of `μq + νp`.
    ///
    /// `cos θ q + sin θ p = e^{iθN} q e^{−iθN}` holds on the truncated
    /// space, so only phases depend on the direction. The unit direction is
    /// taken with non-negative leading component and the spectrum rescaled,
    /// so `(λμ, λν)` has spectrum `λ x_k`. At `(0, 0)` the spectrum is zero
    /// and the basis is the Fock basis.
    pub fn spectrum(&self, mu: f64, nu: f64) -> Result<QuadratureSpectrum> {
        let n = self.dim();
        if !(mu.is_finite() && nu.is_finite()) {
            return Err(Error::InvalidSize(format!("direction ({mu}, {nu})")));
        }
        if mu == 0.0 && nu == 0.0 {
            return Ok(QuadratureSpectrum { mu, nu, values: vec![0.0; n], vectors: OperatorMatrix::identity(n, n) });
        }
        let r = mu.hypot(nu);
        let (mut c, mut s) = (mu / r, nu / r);
        let flip = c < 0.0 || (c == 0.0 && s < 0.0);
        if flip {
            c = -c;
            s = -s;
        }
        let theta = s.atan2(c);
        let phase: Vec<C64> = (0..n).map(|i| C64::from_polar(1.0, theta * i as f64)).collect();
        let col = |k: usize| if flip { n - 1 - k } else { k };
        let vectors = OperatorMatrix::from_fn(n, n, |i, k| phase[i] * self.vectors[(i, col(k))]);
        let values = (0..n)
            .map(|k| if flip { -r * self.values[col(k)] } else { r * self.values[k] })
            .collect();
        Ok(QuadratureSpectrum { mu, nu, values, vectors })
    }
}

/// Spectral decomposition `μ q + ν p = Σ x_k |e_k⟩⟨e_k|`, ascending `x_k`.
#[derive(Debug, Clone)]
pub struct QuadratureSpectrum {
    pub mu: f64,
    pub nu: f64,
    pub values: Vec<f64>,
    pub vectors: OperatorMatrix,
}

impl QuadratureSpectrum {
    pub fn new(n_trunc: usize, mu: f64, nu: f64) -> Result<Self> {
        QuadratureBasis::new(n_trunc)?.spectrum(mu, nu)
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// `⟨e_k|A|e_l⟩`.
    pub fn quasi_symbol(&self, a: &OperatorMatrix) -> Result<OperatorMatrix> {
        if a.nrows() != self.dim() || a.ncols() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), actual: a.nrows().max(a.ncols()) });
        }
        Ok(self.vectors.adjoint() * a * &self.vectors)
    }

    pub fn tomogram(&self, rho: &OperatorMatrix) -> Result<SymplecticTomogram> {
        let dev = hermiticity_deviation(rho);
        if dev > 1e-10 {
            return Err(Error::NotHermitian(dev));
        }
        if rho.nrows() != self.dim() || rho.ncols() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), actual: rho.nrows().max(rho.ncols()) });
        }
        let rv = rho * &self.vectors;
        let atoms = self
            .values
            .iter()
            .enumerate()
            .map(|(k, &x)| Atom { x, p: self.vectors.column(k).dotc(&rv.column(k)).re })
            .collect();
        Ok(SymplecticTomogram { mu: self.mu, nu: self.nu, atoms })
    }

    /// Leading `rows × rows` block of `Σ_k f(x_k) |e_k⟩⟨e_k|`.
    pub fn function_block<F: Fn(f64) -> C64>(&self, rows: usize, f: F) -> OperatorMatrix {
        let top = self.vectors.rows(0, rows);
        let mut scaled = top.clone_owned();
        for (k, mut col) in scaled.column_iter_mut().enumerate() {
            col *= f(self.values[k]);
        }
        scaled * top.adjoint()
    }

    /// Eigenvectors with more than 1% of their mass on the top tenth of
    /// the Fock levels.
    pub fn edge_flags(&self) -> Vec<bool> {
        let n = self.dim();
        let start = n - n.div_ceil(10);
        (0..n)
            .map(|k| (start..n).map(|i| self.vectors[(i, k)].norm_sqr()).sum::<f64>() > 0.01)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub x: f64,
    pub p: f64,
}

/// Spectral measure of `μq + νp` in a state: atoms sorted by `x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymplecticTomogram {
    pub mu: f64,
    pub nu: f64,
    pub atoms: Vec<Atom>,
}

impl SymplecticTomogram {
    pub fn total_weight(&self) -> f64 {
        self.atoms.iter().map(|a| a.p).sum()
    }

    /// `χ(μ, ν) = Σ_k p_k e^{i x_k}`.
    pub fn characteristic(&self) -> C64 {
        self.atoms.iter().map(|a| C64::from_polar(a.p, a.x)).sum()
    }

    /// Box estimate `p_k / Δ_k` at interior atoms, `Δ_k = (x_{k+1} − x_{k−1})/2`.
    pub fn smoothed_density(&self) -> Vec<(f64, f64)> {
        self.atoms
            .windows(3)
            .map(|w| (w[1].x, w[1].p / (0.5 * (w[2].x - w[0].x))))
            .collect()
    }
}

pub fn symplectic_tomogram(n_trunc: usize, mu: f64, nu: f64, rho: &OperatorMatrix) -> Result<SymplecticTomogram> {
    if mu == 0.0 && nu == 0.0 {
        return Err(Error::DegenerateDirection);
    }
    QuadratureSpectrum::new(n_trunc, mu, nu)?.tomogram(rho)
}

pub fn symplectic_quasi_symbol(n_trunc: usize, mu: f64, nu: f64, a: &OperatorMatrix) -> Result<OperatorMatrix> {
    if mu == 0.0 && nu == 0.0 {
        return Err(Error::DegenerateDirection);
    }
    QuadratureSpectrum::new(n_trunc, mu, nu)?.quasi_symbol(a)
}

/// Provider of symplectic tomograms on a working space of dimension `dim`.
pub trait TomogramSource: Sync {
    fn dim(&self) -> usize;

    /// Tomogram for the direction of `spectrum`, which lives on `dim` levels.
    fn tomogram(&self, spectrum: &QuadratureSpectrum) -> Result<SymplecticTomogram>;
}

/// Tomograms of a known state embedded in a padded working space.
#[derive(Debug, Clone)]
pub struct StateSource {
    rho: OperatorMatrix,
}

impl StateSource {
    pub fn new(rho: &OperatorMatrix, padding: usize) -> Result<Self> {
        let n = rho.nrows();
        if rho.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, actual: rho.ncols() });
        }
        let dev = hermiticity_deviation(rho);
        if dev > 1e-10 {
            return Err(Error::NotHermitian(dev));
        }
        let mut padded = OperatorMatrix::zeros(n + padding, n + padding);
        padded.view_mut((0, 0), (n, n)).copy_from(rho);
        Ok(StateSource { rho: padded })
    }

    pub fn with_default_padding(rho: &OperatorMatrix) -> Result<Self> {
        Self::new(rho, default_padding(rho.nrows()))
    }
}

impl TomogramSource for StateSource {
    fn dim(&self) -> usize {
        self.rho.nrows()
    }

    fn tomogram(&self, spectrum: &QuadratureSpectrum) -> Result<SymplecticTomogram> {
        spectrum.tomogram(&self.rho)
    }
}

/// Square `(μ, ν)` lattice covering `[−L, L]²` with trapezoid weights.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymplecticGrid {
    pub half_width: f64,
    pub step: f64,
}

impl SymplecticGrid {
    pub fn new(half_width: f64, step: f64) -> Result<Self> {
        if !(half_width.is_finite() && half_width > 0.0 && step.is_finite() && step > 0.0) {
            return Err(Error::InvalidSize(format!("lattice half-width {half_width}, step {step}")));
        }
        Ok(SymplecticGrid { half_width, step })
    }

    pub fn side(&self) -> usize {
        (2.0 * self.half_width / self.step).round() as usize + 1
    }

    pub fn coordinates(&self) -> Vec<f64> {
        let side = self.side();
        let c = (side - 1) as f64 / 2.0;
        (0..side).map(|i| (i as f64 - c) * self.step).collect()
    }

    fn weight(&self, i: usize, k: usize) -> f64 {
        let side = self.side();
        let edge = |i: usize| if side > 1 && (i == 0 || i == side - 1) { 0.5 } else { 1.0 };
        edge(i) * edge(k) * self.step * self.step
    }

    fn on_boundary(&self, i: usize, k: usize) -> bool {
        let last = self.side() - 1;
        i == 0 || k == 0 || i == last || k == last
    }
}

#[derive(Debug, Clone)]
pub struct SymplecticReconstruction {
    pub operator: OperatorMatrix,
    /// Largest `|χ|` on the lattice boundary.
    pub chi_tail: f64,
}

/// Tail level of `|χ|` above which a coarse-grid warning is logged.
pub const CHI_TAIL_WARNING: f64 = 1e-3;

/// `A = (1/2π) ∫ χ(μ,ν) e^{−i(μq+νp)} dμ dν` on the lattice, cropped to `n_trunc` levels.
pub fn symplectic_reconstruct(
    n_trunc: usize,
    source: &dyn TomogramSource,
    grid: &SymplecticGrid,
) -> Result<SymplecticReconstruction> {
    let work = source.dim();
    if n_trunc > work {
        return Err(Error::DimensionMismatch { expected: work, actual: n_trunc });
    }
    let coords = grid.coordinates();
    let basis = QuadratureBasis::new(work)?;
    let rows: Vec<(OperatorMatrix, f64)> = (0..coords.len())
        .into_par_iter()
        .map(|i| {
            let mut acc = OperatorMatrix::zeros(n_trunc, n_trunc);
            let mut tail: f64 = 0.0;
            for (k, &nu) in coords.iter().enumerate() {
                let spectrum = basis.spectrum(coords[i], nu)?;
                let chi = source.tomogram(&spectrum)?.characteristic();
                if grid.on_boundary(i, k) {
                    tail = tail.max(chi.norm());
                }
                let w = C64::new(grid.weight(i, k) / (2.0 * PI), 0.0) * chi;
                acc += spectrum.function_block(n_trunc, |x| C64::from_polar(1.0, -x)) * w;
            }
            Ok((acc, tail))
        })
        .collect::<Result<_>>()?;
    let mut operator = OperatorMatrix::zeros(n_trunc, n_trunc);
    let mut chi_tail: f64 = 0.0;
    for (m, t) in rows {
        operator += m;
        chi_tail = chi_tail.max(t);
    }
    if chi_tail > CHI_TAIL_WARNING {
        log::warn!("characteristic function not decayed at the lattice boundary: |chi| up to {chi_tail:e}");
    }
    Ok(SymplecticReconstruction { operator, chi_tail })
}

/// Quasi-symbols of the symplectic quantizer `exp[i(x′ − μ′q − ν′p)]/2π`
/// in the eigenbasis of `μq + νp` on `n_trunc` levels.
#[derive(Debug, Clone)]
pub struct Intertwiner {
    n_trunc: usize,
    work: usize,
    target: QuadratureSpectrum,
}

impl Intertwiner {
    pub fn new(n_trunc: usize, mu: f64, nu: f64, padding: usize) -> Result<Self> {
        if mu == 0.0 && nu == 0.0 {
            return Err(Error::DegenerateDirection);
        }
        Ok(Intertwiner { n_trunc, work: n_trunc + padding, target: QuadratureSpectrum::new(n_trunc, mu, nu)? })
    }

    pub fn target(&self) -> &QuadratureSpectrum {
        &self.target
    }

    /// Truncated `exp[i(x′ − μ′q − ν′p)]/2π`.
    pub fn quantizer(&self, x: f64, mu: f64, nu: f64) -> Result<OperatorMatrix> {
        let spectrum = QuadratureSpectrum::new(self.work, mu, nu)?;
        let scale = C64::from_polar(1.0 / (2.0 * PI), x);
        Ok(spectrum.function_block(self.n_trunc, |v| C64::from_polar(1.0, -v)) * scale)
    }

    pub fn kernel(&self, x: f64, mu: f64, nu: f64) -> Result<OperatorMatrix> {
        self.target.quasi_symbol(&self.quantizer(x, mu, nu)?)
    }

    /// `∭ 𝒲(x′,μ′,ν′) K(x′,μ′,ν′) dx′ dμ′ dν′`, the x′-integral taken on the atoms.
    pub fn intertwine(&self, source: &dyn TomogramSource, grid: &SymplecticGrid) -> Result<OperatorMatrix> {
        if source.dim() != self.work {
            return Err(Error::DimensionMismatch { expected: self.work, actual: source.dim() });
        }
        let coords = grid.coordinates();
        let basis = QuadratureBasis::new(self.work)?;
        let n = self.n_trunc;
        let rows: Vec<OperatorMatrix> = (0..coords.len())
            .into_par_iter()
            .map(|i| {
                let mut acc = OperatorMatrix::zeros(n, n);
                for (k, &nu) in coords.iter().enumerate() {
                    let spectrum = basis.spectrum(coords[i], nu)?;
                    let tomo = source.tomogram(&spectrum)?;
                    let base = self.target.quasi_symbol(
                        &(spectrum.function_block(n, |v| C64::from_polar(1.0, -v)) * C64::new(1.0 / (2.0 * PI), 0.0)),
                    )?;
                    let mut weight = C64::new(0.0, 0.0);
                    for atom in &tomo.atoms {
                        weight += C64::from_polar(atom.p, atom.x);
                    }
                    acc += base * (weight * grid.weight(i, k));
                }
                Ok(acc)
            })
            .collect::<Result<_>>()?;
        let mut out = OperatorMatrix::zeros(n, n);
        for m in rows {
            out += m;
        }
        Ok(out)
    }
}

pub fn intertwining_kernel(n_trunc: usize, xp_prime: (f64, f64, f64), mu: f64, nu: f64) -> Result<OperatorMatrix> {
    let (x, mp, np) = xp_prime;
    Intertwiner::new(n_trunc, mu, nu, default_padding(n_trunc))?.kernel(x, mp, np)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{identity, max_abs_diff};

    #[test]
    fn position_operator_entries() {
        let q = quadrature_operator(6, 1.0, 0.0).unwrap();
        for n in 0..5 {
            assert!((q[(n, n + 1)].re - ((n + 1) as f64 / 2.0).sqrt()).abs() < 1e-15);
            assert_eq!(q[(n, n)], C64::new(0.0, 0.0));
        }
        assert!(matches!(quadrature_operator(4, 0.0, 0.0), Err(Error::DegenerateDirection)));
    }

    #[test]
    fn negative_scaling_reverses_atoms() {
        let mut rho = OperatorMatrix::zeros(8, 8);
        rho[(0, 0)] = C64::new(0.5, 0.0);
        rho[(1, 1)] = C64::new(0.5, 0.0);
        let t = symplectic_tomogram(8, 0.3, -0.7, &rho).unwrap();
        let u = symplectic_tomogram(8, -0.6, 1.4, &rho).unwrap();
        for (a, b) in t.atoms.iter().zip(u.atoms.iter().rev()) {
            assert_eq!(b.x, -2.0 * a.x);
            assert_eq!(b.p, a.p);
        }
    }

    #[test]
    fn origin_kernel_is_scaled_identity() {
        let k = intertwining_kernel(6, (0.0, 0.0, 0.0), 1.0, 0.5).unwrap();
        assert!(max_abs_diff(&k, &(identity(6) * C64::new(1.0 / (2.0 * PI), 0.0))) < 1e-14);
    }

    #[test]
    fn mixed_state_weights() {
        let rho = identity(10) * C64::new(0.1, 0.0);
        let t = symplectic_tomogram(10, 0.2, 0.9, &rho).unwrap();
        assert!(t.atoms.iter().all(|a| (a.p - 0.1).abs() < 1e-14));
        assert!(t.atoms.windows(2).all(|w| w[0].x <= w[1].x));
    }
}
