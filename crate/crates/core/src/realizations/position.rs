//! Position-grid kernels reached through the Hermite functions.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::{Operator, OperatorMatrix, C64};
use crate::quadrature::{hermite_functions, Grid1D, QuadratureRule};
use crate::starprod::{Dequantizers, IndexSpace, QDPair, Symbol};

pub use crate::quadrature::hermite_function;

/// Largest admissible `|φ_n|` at the grid ends.
pub const EDGE_TOLERANCE: f64 = 1e-2;

/// Default grid: trapezoid rule on `[-8, 8]` with 512 points.
pub fn default_position_grid() -> Grid1D {
    Grid1D::trapezoid(-8.0, 8.0, 512).expect("static grid is valid")
}

/// `Φ[n, i] = φ_n(x_i)`.
pub fn hermite_matrix(n_trunc: usize, grid: &Grid1D) -> DMatrix<f64> {
    let mut phi = DMatrix::zeros(n_trunc, grid.len());
    for (i, &x) in grid.points.iter().enumerate() {
        for (n, v) in hermite_functions(n_trunc, x).into_iter().enumerate() {
            phi[(n, i)] = v;
        }
    }
    phi
}

fn edge_amplitude(n_trunc: usize, x: f64) -> f64 {
    hermite_functions(n_trunc, x).into_iter().map(f64::abs).fold(0.0, f64::max)
}

/// Rejects grids on which some `φ_n`, `n < n_trunc`, has not decayed at
/// the ends. Gauss–Hermite grids are exact for `n_trunc` up to their node
/// count.
pub fn check_support(grid: &Grid1D, n_trunc: usize) -> Result<()> {
    let (a, b) = (grid.lower(), grid.upper());
    if grid.rule == QuadratureRule::GaussHermite && grid.len() >= n_trunc {
        return Ok(());
    }
    let edge = edge_amplitude(n_trunc, a).max(edge_amplitude(n_trunc, b));
    if edge <= EDGE_TOLERANCE {
        return Ok(());
    }
    let mut suggested = (2.0 * n_trunc as f64 + 1.0).sqrt();
    while edge_amplitude(n_trunc, suggested) > EDGE_TOLERANCE {
        suggested += 0.25;
    }
    Err(Error::GridSupport { a, b, n_trunc, edge_amplitude: edge, suggested })
}

/// A kernel `f(x, y)` sampled on a square grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSymbol {
    pub grid: Grid1D,
    pub values: DMatrix<C64>,
}

fn fock_matrix(f: &Symbol) -> Result<OperatorMatrix> {
    let shape = &f.space.shape;
    if shape.len() != 2 || shape[0] != shape[1] {
        return Err(Error::SpaceMismatch);
    }
    let n = shape[0];
    Ok(OperatorMatrix::from_fn(n, n, |i, k| f.values[i * n + k]))
}

fn complexify(m: &DMatrix<f64>) -> DMatrix<C64> {
    m.map(|v| C64::new(v, 0.0))
}

/// `f(x, y) = Σ F(n, m) φ_n(x) φ_m(y)`.
pub fn fock_to_position_symbol(f: &Symbol, grid: &Grid1D) -> Result<GridSymbol> {
    let fm = fock_matrix(f)?;
    let phi = complexify(&hermite_matrix(fm.nrows(), grid));
    let values = phi.transpose() * fm * &phi;
    Ok(GridSymbol { grid: grid.clone(), values })
}

/// `F(n, m) = ∬ f(x, y) φ_n(x) φ_m(y) dx dy` by the grid's quadrature.
pub fn position_to_fock_matrix(f: &GridSymbol, n_trunc: usize) -> Result<OperatorMatrix> {
    let m = f.grid.len();
    if f.values.nrows() != m || f.values.ncols() != m {
        return Err(Error::GridMismatch(format!(
            "symbol is {}x{}, grid has {m} points",
            f.values.nrows(),
            f.values.ncols()
        )));
    }
    check_support(&f.grid, n_trunc)?;
    let mut phiw = hermite_matrix(n_trunc, &f.grid);
    for (i, w) in f.grid.weights.iter().enumerate() {
        phiw.column_mut(i).scale_mut(*w);
    }
    let phiw = complexify(&phiw);
    Ok(&phiw * &f.values * phiw.transpose())
}

/// As [`position_to_fock_matrix`], returned as a symbol of `pair`.
pub fn position_to_fock_symbol(f: &GridSymbol, pair: &QDPair) -> Result<Symbol> {
    let n = pair.hilbert_dim();
    let fm = position_to_fock_matrix(f, n)?;
    pair.symbol_from_values((0..n * n).map(|x| fm[(x / n, x % n)]).collect())
}

/// Self-dual pair `|x⟩⟨y|` realized as `|φ(x)⟩⟨φ(y)|` in the truncated Fock
/// basis, with product weights `w_x w_y`. Holds `m²` rank-one operators.
pub fn position_pair(grid: &Grid1D, n_trunc: usize) -> Result<QDPair> {
    check_support(grid, n_trunc)?;
    let m = grid.len();
    let vectors: Vec<_> = grid
        .points
        .iter()
        .map(|&x| {
            nalgebra::DVector::from_iterator(
                n_trunc,
                hermite_functions(n_trunc, x).into_iter().map(|v| C64::new(v, 0.0)),
            )
        })
        .collect();
    let mut ops = Vec::with_capacity(m * m);
    let mut weights = Vec::with_capacity(m * m);
    for i in 0..m {
        for j in 0..m {
            ops.push(Operator::Outer { ket: vectors[i].clone(), bra: vectors[j].clone() });
            weights.push(grid.weights[i] * grid.weights[j]);
        }
    }
    let space = IndexSpace::new("position", vec![m, m], weights)?;
    QDPair::new(space, n_trunc, ops, Dequantizers::SelfDual)
}

/// Star product of two grid symbols through the truncated Fock space,
/// `symbol(reconstruct(f) · reconstruct(g))` without materializing the pair.
pub fn position_star(f: &GridSymbol, g: &GridSymbol, n_trunc: usize) -> Result<GridSymbol> {
    if f.grid != g.grid {
        return Err(Error::GridMismatch("symbols on different grids".into()));
    }
    let a = position_to_fock_matrix(f, n_trunc)?;
    let b = position_to_fock_matrix(g, n_trunc)?;
    let phi = complexify(&hermite_matrix(n_trunc, &f.grid));
    Ok(GridSymbol { grid: f.grid.clone(), values: phi.transpose() * (a * b) * &phi })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn support_check() {
        let grid = Grid1D::trapezoid(-4.0, 4.0, 64).unwrap();
        match check_support(&grid, 16) {
            Err(Error::GridSupport { suggested, .. }) => assert!(suggested > 6.0),
            other => panic!("expected support error, got {other:?}"),
        }
        assert!(check_support(&default_position_grid(), 16).is_ok());
        assert!(check_support(&default_position_grid(), 24).is_ok());
    }

    #[test]
    fn small_pair_matches_matrix_path() {
        let grid = Grid1D::gauss_hermite(12).unwrap();
        let pair = position_pair(&grid, 4).unwrap();
        let mut a = OperatorMatrix::zeros(4, 4);
        a[(0, 1)] = C64::new(1.0, 0.5);
        a[(2, 2)] = C64::new(-0.3, 0.0);
        let s = crate::starprod::symbol(&pair, &a).unwrap();
        let fock = crate::realizations::fock::fock_weyl_pair(4).unwrap();
        let fs = crate::starprod::symbol(&fock, &a).unwrap();
        let gs = fock_to_position_symbol(&fs, &grid).unwrap();
        for x in 0..grid.len() * grid.len() {
            assert!((s.values[x] - gs.values[(x / grid.len(), x % grid.len())]).norm() < 1e-14);
        }
        let back = crate::starprod::reconstruct(&pair, &s).unwrap();
        assert!(crate::linalg::max_abs_diff(&back, &a) < 1e-12);
    }
}
