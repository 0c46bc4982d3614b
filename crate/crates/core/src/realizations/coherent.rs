//! Coherent states on a square lattice: a self-dual pair that is not a
//! groupoid realization.

use std::f64::consts::PI;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{frobenius, trace, zeros, Operator, OperatorMatrix, C64, ZERO};
use crate::starprod::{star_factored, Dequantizers, IndexSpace, QDPair, Symbol};

/// `⟨w|z⟩ = exp(−(|w|² + |z|²)/2 + w* z)`.
pub fn coherent_overlap(w: C64, z: C64) -> C64 {
    (C64::new(-(w.norm_sqr() + z.norm_sqr()) / 2.0, 0.0) + w.conj() * z).exp()
}

/// Truncated expansion `e^{−|z|²/2} Σ_n zⁿ/√(n!) |n⟩`.
pub fn coherent_vector(z: C64, n_trunc: usize) -> DVector<C64> {
    let mut v = DVector::from_element(n_trunc, ZERO);
    if n_trunc == 0 {
        return v;
    }
    v[0] = C64::new((-z.norm_sqr() / 2.0).exp(), 0.0);
    for n in 1..n_trunc {
        v[n] = v[n - 1] * z / (n as f64).sqrt();
    }
    v
}

/// Radius inside which the truncated vectors are considered reliable.
pub fn reliable_radius(n_trunc: usize) -> f64 {
    (n_trunc as f64).sqrt() / 2.0
}

/// Norm lost by truncating `|z⟩` to `n_trunc` levels.
pub fn truncation_loss(z: C64, n_trunc: usize) -> f64 {
    let r2 = z.norm_sqr();
    if r2 == 0.0 {
        return 0.0;
    }
    // Poisson tail e^{-r²} Σ_{n ≥ N} r^{2n}/n!, summed in log space
    let mut log_term = -r2 + (0..n_trunc).map(|n| r2.ln() - ((n + 1) as f64).ln()).sum::<f64>();
    let mut tail = 0.0;
    let mut n = n_trunc;
    loop {
        let t = log_term.exp();
        tail += t;
        if t < 1e-18 * tail.max(1e-300) || n > n_trunc + 10_000 {
            break;
        }
        n += 1;
        log_term += r2.ln() - (n as f64).ln();
    }
    tail
}

/// Square lattice of `side × side` points with the given spacing,
/// centred at the origin. Each point carries the weight `h²/π`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoherentGrid {
    pub side: usize,
    pub spacing: f64,
    pub points: Vec<C64>,
}

impl CoherentGrid {
    pub fn square(side: usize, spacing: f64) -> Result<Self> {
        if side == 0 {
            return Err(Error::InvalidSize("lattice side must be at least 1".into()));
        }
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(Error::InvalidSize(format!("lattice spacing {spacing}")));
        }
        let c = (side as f64 - 1.0) / 2.0;
        let mut points = Vec::with_capacity(side * side);
        for i in 0..side {
            for k in 0..side {
                points.push(C64::new((k as f64 - c) * spacing, (i as f64 - c) * spacing));
            }
        }
        Ok(CoherentGrid { side, spacing, points })
    }

    /// Lattice with the given half-width, `round(2L/h) + 1` points per side.
    pub fn covering(half_width: f64, spacing: f64) -> Result<Self> {
        let side = (2.0 * half_width / spacing).round() as usize + 1;
        Self::square(side, spacing)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `d²z/π` per lattice point.
    pub fn cell_weight(&self) -> f64 {
        self.spacing * self.spacing / PI
    }

    pub fn max_abs(&self) -> f64 {
        self.points.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Lattice points of the pair index `x = i_z * len + i_w`.
    pub fn pair_point(&self, x: usize) -> (C64, C64) {
        (self.points[x / self.len()], self.points[x % self.len()])
    }

    pub fn check_reliable(&self, n_trunc: usize) -> Result<()> {
        let bound = reliable_radius(n_trunc);
        let max_abs_z = self.max_abs();
        if max_abs_z > bound + 1e-12 {
            let z = self
                .points
                .iter()
                .copied()
                .max_by(|a, b| a.norm().total_cmp(&b.norm()))
                .unwrap_or(ZERO);
            return Err(Error::Truncation { max_abs_z, bound, estimate: truncation_loss(z, n_trunc) });
        }
        Ok(())
    }
}

/// Self-dual pair `|z⟩⟨w|` over all lattice pairs, weight `(h²/π)²`.
pub fn coherent_pair(grid: &CoherentGrid, n_trunc: usize) -> Result<QDPair> {
    grid.check_reliable(n_trunc)?;
    let vectors: Vec<_> = grid.points.iter().map(|&z| coherent_vector(z, n_trunc)).collect();
    let g = grid.len();
    let mut ops = Vec::with_capacity(g * g);
    for z in &vectors {
        for w in &vectors {
            ops.push(Operator::Outer { ket: z.clone(), bra: w.clone() });
        }
    }
    let c = grid.cell_weight();
    let space = IndexSpace::new("coherent", vec![g, g], vec![c * c; g * g])?;
    QDPair::new(space, n_trunc, ops, Dequantizers::SelfDual)
}

/// `⟨z|z1⟩⟨w1|z2⟩⟨w2|w⟩` from the closed-form overlap.
pub fn coherent_kernel_entry(grid: &CoherentGrid, x1: usize, x2: usize, x: usize) -> C64 {
    let (z1, w1) = grid.pair_point(x1);
    let (z2, w2) = grid.pair_point(x2);
    let (z, w) = grid.pair_point(x);
    coherent_overlap(z, z1) * coherent_overlap(w1, z2) * coherent_overlap(w2, w)
}

/// Convolution of the lattice pair groupoid with measure `h²/π`:
/// `(f ∘ g)(z, w) = Σ_u f(z, u) g(u, w) h²/π`.
pub fn lattice_convolve(grid: &CoherentGrid, f: &Symbol, g: &Symbol) -> Result<Symbol> {
    let n = grid.len();
    if f.values.len() != n * n || g.values.len() != n * n {
        return Err(Error::GridMismatch("symbol does not match lattice pairs".into()));
    }
    let c = grid.cell_weight();
    let mut out = vec![ZERO; n * n];
    for z in 0..n {
        for u in 0..n {
            let a = f.values[z * n + u] * c;
            for w in 0..n {
                out[z * n + w] += a * g.values[u * n + w];
            }
        }
    }
    Ok(Symbol { space: f.space.clone(), values: out })
}

/// `f(z, w) = exp(−(|z − c|² + |w − c|²) / (2σ²))`.
pub fn gaussian_lattice_symbol(pair: &QDPair, grid: &CoherentGrid, centre: C64, sigma: f64) -> Result<Symbol> {
    let values = (0..grid.len() * grid.len())
        .map(|x| {
            let (z, w) = grid.pair_point(x);
            let r2 = (z - centre).norm_sqr() + (w - centre).norm_sqr();
            C64::new((-r2 / (2.0 * sigma * sigma)).exp(), 0.0)
        })
        .collect();
    pair.symbol_from_values(values)
}

/// `max |f ⋆ g − f ∘ g|` between the star product and lattice convolution.
pub fn star_convolution_gap(pair: &QDPair, grid: &CoherentGrid, f: &Symbol, g: &Symbol) -> Result<f64> {
    let s = star_factored(pair, f, g)?;
    let c = lattice_convolve(grid, f, g)?;
    Ok(s.max_abs_diff(&c))
}

/// `Σ_z (h²/π) |z⟩⟨z|`.
pub fn frame_operator(grid: &CoherentGrid, n_trunc: usize) -> OperatorMatrix {
    let mut p = zeros(n_trunc);
    let c = C64::new(grid.cell_weight(), 0.0);
    for &z in &grid.points {
        Operator::Outer { ket: coherent_vector(z, n_trunc), bra: coherent_vector(z, n_trunc) }
            .accumulate_into(&mut p, c);
    }
    p
}

/// Resolution residual of [`coherent_pair`] through its product structure:
/// the resolution superoperator is `P̄ ⊗ P` with `P` the frame operator, so
/// the residual is `(‖P‖⁴ − 2 (Tr P)² + N²)^{1/2}`.
pub fn coherent_resolution_residual(grid: &CoherentGrid, n_trunc: usize) -> Result<f64> {
    grid.check_reliable(n_trunc)?;
    let p = frame_operator(grid, n_trunc);
    let f = frobenius(&p);
    let t = trace(&p).re;
    let d = n_trunc as f64;
    Ok((f.powi(4) - 2.0 * t * t + d * d).max(0.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overlap_basics() {
        let z = C64::new(0.3, -1.1);
        assert!((coherent_overlap(z, z) - C64::new(1.0, 0.0)).norm() < 1e-15);
        let p = coherent_overlap(ZERO, C64::new(1.0, 0.0)).norm_sqr();
        assert!((p - (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn lattice_layout() {
        let g = CoherentGrid::square(5, 0.5).unwrap();
        assert_eq!(g.len(), 25);
        assert_eq!(g.points[12], ZERO);
        assert!((g.max_abs() - 2f64.sqrt()).abs() < 1e-15);
        assert!(g.check_reliable(64).is_ok());
        assert!(matches!(g.check_reliable(4), Err(Error::Truncation { .. })));
        assert_eq!(CoherentGrid::covering(2.0, 0.5).unwrap().side, 9);
    }

    #[test]
    fn truncation_loss_matches_norm_deficit() {
        let z = C64::new(1.5, 0.5);
        let v = coherent_vector(z, 6);
        let deficit = 1.0 - v.norm_squared();
        assert!((truncation_loss(z, 6) - deficit).abs() < 1e-13);
    }

    #[test]
    fn frame_residual_agrees_with_gram_formula() {
        let grid = CoherentGrid::square(3, 0.7).unwrap();
        let pair = coherent_pair(&grid, 8).unwrap();
        let generic = crate::starprod::resolution_residual(&pair).unwrap();
        let product = coherent_resolution_residual(&grid, 8).unwrap();
        assert!((generic - product).abs() < 1e-9, "{generic} vs {product}");
        assert!(product > 0.0);
    }
}
