//! One-dimensional quadrature grids and Hermite functions.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadratureRule {
    Trapezoid,
    GaussLegendre,
    /// Gauss–Hermite nodes with weights for the plain integrand, so that
    /// `∫ f(x) dx ≈ Σ w_i f(x_i)` for functions decaying like `e^{-x²}`.
    GaussHermite,
}

/// Nodes with positive weights, strictly increasing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
    pub rule: QuadratureRule,
}

impl Grid1D {
    /// Uniform grid on `[a, b]` with trapezoid weights.
    pub fn trapezoid(a: f64, b: f64, m: usize) -> Result<Self> {
        check_interval(a, b, m)?;
        let h = (b - a) / (m - 1) as f64;
        let points = (0..m).map(|i| a + h * i as f64).collect();
        let mut weights = vec![h; m];
        weights[0] = h / 2.0;
        weights[m - 1] = h / 2.0;
        Ok(Grid1D { points, weights, rule: QuadratureRule::Trapezoid })
    }

    /// Gauss–Legendre nodes mapped to `[a, b]`.
    pub fn gauss_legendre(a: f64, b: f64, m: usize) -> Result<Self> {
        check_interval(a, b, m)?;
        let (x, w) = gauss_legendre_unit(m);
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        Ok(Grid1D {
            points: x.iter().map(|t| mid + half * t).collect(),
            weights: w.iter().map(|v| v * half).collect(),
            rule: QuadratureRule::GaussLegendre,
        })
    }

    pub fn gauss_hermite(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidSize("Gauss–Hermite rule needs at least 2 nodes".into()));
        }
        let (points, weights) = gauss_hermite_plain(m);
        Ok(Grid1D { points, weights, rule: QuadratureRule::GaussHermite })
    }

    pub fn build(rule: QuadratureRule, a: f64, b: f64, m: usize) -> Result<Self> {
        match rule {
            QuadratureRule::Trapezoid => Self::trapezoid(a, b, m),
            QuadratureRule::GaussLegendre => Self::gauss_legendre(a, b, m),
            QuadratureRule::GaussHermite => Self::gauss_hermite(m),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn lower(&self) -> f64 {
        self.points[0]
    }

    pub fn upper(&self) -> f64 {
        self.points[self.points.len() - 1]
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.points.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

fn check_interval(a: f64, b: f64, m: usize) -> Result<()> {
    if m < 2 {
        return Err(Error::InvalidSize("a grid needs at least 2 points".into()));
    }
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::InvalidSize(format!("invalid interval [{a}, {b}]")));
    }
    Ok(())
}

/// Eigenvalues of the symmetric tridiagonal Jacobi matrix with zero
/// diagonal and the given off-diagonal, ascending.
fn jacobi_nodes(off: &[f64]) -> Vec<f64> {
    let m = off.len() + 1;
    let mut j = DMatrix::<f64>::zeros(m, m);
    for (k, &b) in off.iter().enumerate() {
        j[(k, k + 1)] = b;
        j[(k + 1, k)] = b;
    }
    let mut nodes: Vec<f64> = SymmetricEigen::new(j).eigenvalues.iter().copied().collect();
    nodes.sort_by(f64::total_cmp);
    nodes
}

/// `(P_m(x), P_{m-1}(x))` by the three-term recurrence.
fn legendre_pair(m: usize, x: f64) -> (f64, f64) {
    let mut prev = 1.0;
    let mut cur = x;
    if m == 0 {
        return (1.0, 0.0);
    }
    for k in 1..m {
        let next = ((2 * k + 1) as f64 * x * cur - k as f64 * prev) / (k + 1) as f64;
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre_unit(m: usize) -> (Vec<f64>, Vec<f64>) {
    let off: Vec<f64> = (1..m)
        .map(|k| {
            let k = k as f64;
            k / (4.0 * k * k - 1.0).sqrt()
        })
        .collect();
    let mut nodes = jacobi_nodes(&off);
    let mut weights = Vec::with_capacity(m);
    for x in nodes.iter_mut() {
        for _ in 0..3 {
            let (p, q) = legendre_pair(m, *x);
            let dp = m as f64 * (*x * p - q) / (*x * *x - 1.0);
            *x -= p / dp;
        }
        let (p, q) = legendre_pair(m, *x);
        let dp = m as f64 * (*x * p - q) / (*x * *x - 1.0);
        weights.push(2.0 / ((1.0 - *x * *x) * dp * dp));
    }
    (nodes, weights)
}

/// Orthonormal oscillator eigenfunctions `φ_0(x) .. φ_{n-1}(x)`.
pub fn hermite_functions(n: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n);
    if n == 0 {
        return out;
    }
    let phi0 = std::f64::consts::PI.powf(-0.25) * (-0.5 * x * x).exp();
    out.push(phi0);
    if n == 1 {
        return out;
    }
    out.push(std::f64::consts::SQRT_2 * x * phi0);
    for k in 1..n - 1 {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * out[k] - (kf / (kf + 1.0)).sqrt() * out[k - 1];
        out.push(next);
    }
    out
}

pub fn hermite_function(n: usize, x: f64) -> f64 {
    hermite_functions(n + 1, x)[n]
}

fn gauss_hermite_plain(m: usize) -> (Vec<f64>, Vec<f64>) {
    let off: Vec<f64> = (1..m).map(|k| (k as f64 / 2.0).sqrt()).collect();
    let mut nodes = jacobi_nodes(&off);
    let mut weights = Vec::with_capacity(m);
    let scale = (2.0 * m as f64).sqrt();
    for x in nodes.iter_mut() {
        for _ in 0..3 {
            let phi = hermite_functions(m + 1, *x);
            let d = scale * phi[m - 1] - *x * phi[m];
            if d != 0.0 {
                *x -= phi[m] / d;
            }
        }
        let phi = hermite_functions(m, *x);
        weights.push(1.0 / (m as f64 * phi[m - 1] * phi[m - 1]));
    }
    (nodes, weights)
}
