//! The convolution algebra of a finite groupoid and its realizations.

use std::ops::{Add, Mul, Sub};
use std::sync::Arc;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::groupoid::{ElementId, FiniteGroupoid};
use crate::linalg::{zeros, Operator, OperatorMatrix, C64, ONE, ZERO};
use crate::quadrature::Grid1D;

/// A complex function on the elements of a groupoid.
#[derive(Debug, Clone)]
pub struct GroupoidFunction {
    owner: Arc<FiniteGroupoid>,
    values: Vec<C64>,
}

impl PartialEq for GroupoidFunction {
    fn eq(&self, other: &Self) -> bool {
        same_owner(&self.owner, &other.owner) && self.values == other.values
    }
}

fn same_owner(a: &Arc<FiniteGroupoid>, b: &Arc<FiniteGroupoid>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl GroupoidFunction {
    pub fn new(owner: Arc<FiniteGroupoid>, values: Vec<C64>) -> Result<Self> {
        if values.len() != owner.order() {
            return Err(Error::DimensionMismatch {
                expected: owner.order(),
                actual: values.len(),
            });
        }
        Ok(GroupoidFunction { owner, values })
    }

    pub fn zero(owner: Arc<FiniteGroupoid>) -> Self {
        let values = vec![ZERO; owner.order()];
        GroupoidFunction { owner, values }
    }

    /// Indicator function of `gamma`.
    pub fn delta(owner: Arc<FiniteGroupoid>, gamma: ElementId) -> Result<Self> {
        owner.check_element(gamma)?;
        let mut f = Self::zero(owner);
        f.values[gamma] = ONE;
        Ok(f)
    }

    pub fn owner(&self) -> &Arc<FiniteGroupoid> {
        &self.owner
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<C64> {
        self.values
    }

    pub fn scale(&self, c: C64) -> Self {
        GroupoidFunction {
            owner: self.owner.clone(),
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_same(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if same_owner(&self.owner, &other.owner) {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    fn zip_with(&self, other: &Self, op: impl Fn(C64, C64) -> C64) -> Result<Self> {
        self.check_same(other)?;
        Ok(GroupoidFunction {
            owner: self.owner.clone(),
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| op(a, b)).collect(),
        })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }
}

impl Add for &GroupoidFunction {
    type Output = GroupoidFunction;
    fn add(self, rhs: Self) -> GroupoidFunction {
        self.try_add(rhs).expect("functions on different groupoids")
    }
}

impl Sub for &GroupoidFunction {
    type Output = GroupoidFunction;
    fn sub(self, rhs: Self) -> GroupoidFunction {
        self.try_sub(rhs).expect("functions on different groupoids")
    }
}

impl Mul for &GroupoidFunction {
    type Output = GroupoidFunction;
    fn mul(self, rhs: Self) -> GroupoidFunction {
        convolve(self, rhs).expect("functions on different groupoids")
    }
}

/// `(f1 ∗ f2)(γ) = Σ_{a∘b = γ} f1(a) f2(b)`, summed over the defined
/// compositions in table order.
pub fn convolve(f1: &GroupoidFunction, f2: &GroupoidFunction) -> Result<GroupoidFunction> {
    f1.check_same(f2)?;
    let mut out = vec![ZERO; f1.values.len()];
    for &[a, b, c] in f1.owner.triples() {
        out[c as usize] += f1.values[a as usize] * f2.values[b as usize];
    }
    Ok(GroupoidFunction { owner: f1.owner.clone(), values: out })
}

/// `E_ik` for all `(i, k)`, stored at index `i * n + k`.
pub fn weyl_units(n: usize) -> Vec<OperatorMatrix> {
    (0..n * n)
        .map(|idx| Operator::Unit { dim: n, row: idx / n, col: idx % n }.to_dense())
        .collect()
}

/// Side length `n` if `g` is exactly the pair groupoid on `n` points.
pub fn pair_side(g: &FiniteGroupoid) -> Option<usize> {
    let n = (g.order() as f64).sqrt().round() as usize;
    (n * n == g.order() && FiniteGroupoid::pair(n).ok().as_ref() == Some(g)).then_some(n)
}

/// `A_f = Σ f(i, k) E_ik` for a function on a pair groupoid.
pub fn realize_pair_function(f: &GroupoidFunction) -> Result<OperatorMatrix> {
    let n = pair_side(&f.owner)
        .ok_or_else(|| Error::UnsupportedOwner("realization needs a pair groupoid".into()))?;
    Ok(OperatorMatrix::from_fn(n, n, |i, k| f.values[i * n + k]))
}

/// Inverse of [`realize_pair_function`].
pub fn pair_function_from_matrix(owner: Arc<FiniteGroupoid>, a: &OperatorMatrix) -> Result<GroupoidFunction> {
    let n = pair_side(&owner)
        .ok_or_else(|| Error::UnsupportedOwner("realization needs a pair groupoid".into()))?;
    if a.nrows() != n || a.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, actual: a.nrows() });
    }
    let values = (0..n * n).map(|idx| a[(idx / n, idx % n)]).collect();
    GroupoidFunction::new(owner, values)
}

/// Left convolution by `δ_γ` in the delta basis, kept sparse: column `p`
/// maps to row `γ∘p`.
pub fn d_realization_sparse(g: &FiniteGroupoid, gamma: ElementId) -> Result<Operator> {
    g.check_element(gamma)?;
    let map = (0..g.order()).map(|p| g.compose(gamma, p)).collect();
    Ok(Operator::PartialPermutation { map, scale: 1.0 })
}

pub fn d_realization(g: &FiniteGroupoid, gamma: ElementId) -> Result<OperatorMatrix> {
    Ok(d_realization_sparse(g, gamma)?.to_dense())
}

/// The trace normalizer of the left-regular realization.
///
/// `value` is measured as `Tr[D(γ) Dᵀ(γ)]`, which counts the elements with
/// target `s(γ)`: `unit_count · isotropy_order` on a transitive groupoid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NormalizationInfo {
    pub value: usize,
    pub unit_count: usize,
    pub isotropy_order: usize,
    pub isotropy_excess: usize,
}

impl NormalizationInfo {
    /// `ord(G₀) + ord(H) − 1`.
    pub fn closed_form(&self) -> usize {
        self.unit_count + self.isotropy_excess
    }

    pub fn matches_closed_form(&self) -> bool {
        self.value == self.closed_form()
    }
}

fn require_transitive(g: &FiniteGroupoid) -> Result<()> {
    let orbits = g.orbits()?.len();
    if orbits != 1 {
        return Err(Error::NotTransitive { orbits });
    }
    Ok(())
}

pub fn normalization_constant(g: &FiniteGroupoid) -> Result<NormalizationInfo> {
    require_transitive(g)?;
    let iso = g.isotropy_group(g.units()[0])?;
    let mut value = None;
    for gamma in 0..g.order() {
        let d = d_realization_sparse(g, gamma)?;
        let t = d.hs_pair(&d).re.round() as usize;
        match value {
            None => value = Some(t),
            Some(v) if v != t => {
                return Err(Error::InvalidGroupoid(format!(
                    "trace normalizer varies: {v} vs {t} at element {gamma}"
                )))
            }
            _ => {}
        }
    }
    Ok(NormalizationInfo {
        value: value.unwrap_or(0),
        unit_count: g.units().len(),
        isotropy_order: iso.order(),
        isotropy_excess: iso.order() - 1,
    })
}

/// `Σ f(γ) D(γ)`.
pub fn quantize_d(f: &GroupoidFunction) -> OperatorMatrix {
    let g = &f.owner;
    let mut out = zeros(g.order());
    for &[a, b, c] in g.triples() {
        out[(c as usize, b as usize)] += f.values[a as usize];
    }
    out
}

/// `f(γ) = Tr[A Dᵀ(γ)] / 𝒩`.
pub fn dequantize_d(owner: Arc<FiniteGroupoid>, a: &OperatorMatrix) -> Result<GroupoidFunction> {
    let k = owner.order();
    if a.nrows() != k || a.ncols() != k {
        return Err(Error::DimensionMismatch { expected: k, actual: a.nrows() });
    }
    let norm = normalization_constant(&owner)?.value as f64;
    let mut values = vec![ZERO; k];
    for &[x, p, c] in owner.triples() {
        values[x as usize] += a[(c as usize, p as usize)];
    }
    for v in values.iter_mut() {
        *v /= norm;
    }
    GroupoidFunction::new(owner, values)
}

/// `(f1 ∗ f2)(x, y) = ρ(x)ρ(y) Σ_s f1(x, s) f2(s, y) ρ(s)² w_s` on a common grid.
pub fn weighted_grid_convolve(
    f1: &DMatrix<C64>,
    f2: &DMatrix<C64>,
    grid: &Grid1D,
    density: &[f64],
) -> Result<DMatrix<C64>> {
    let m = grid.len();
    for f in [f1, f2] {
        if f.nrows() != m || f.ncols() != m {
            return Err(Error::GridMismatch(format!(
                "function is {}x{}, grid has {m} points",
                f.nrows(),
                f.ncols()
            )));
        }
    }
    if density.len() != m {
        return Err(Error::GridMismatch(format!(
            "density has {} samples, grid has {m} points",
            density.len()
        )));
    }
    if let Some((index, &value)) = density.iter().enumerate().find(|(_, &r)| !(r > 0.0)) {
        return Err(Error::NonPositiveDensity { index, value });
    }
    let inner: Vec<C64> = density
        .iter()
        .zip(&grid.weights)
        .map(|(r, w)| C64::new(r * r * w, 0.0))
        .collect();
    let mut left = f1.clone();
    for (j, c) in inner.iter().enumerate() {
        for i in 0..m {
            left[(i, j)] *= c;
        }
    }
    let mut out = left * f2;
    for i in 0..m {
        for j in 0..m {
            out[(i, j)] *= density[i] * density[j];
        }
    }
    Ok(out)
}

/// A square array of functions on a finite group.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupMatrix {
    pub n: usize,
    /// Entry `(i, j)` at index `i * n + j`, each of length `|H|`.
    pub entries: Vec<Vec<C64>>,
}

impl GroupMatrix {
    pub fn new(n: usize, entries: Vec<Vec<C64>>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, actual: entries.len() });
        }
        Ok(GroupMatrix { n, entries })
    }
}

/// Row-by-column product with group convolution in place of scalar products.
pub fn matrix_group_convolve(
    n_units: usize,
    group: &FiniteGroup,
    f1: &GroupMatrix,
    f2: &GroupMatrix,
) -> Result<GroupMatrix> {
    let h = group.order();
    for f in [f1, f2] {
        if f.n != n_units || f.entries.len() != n_units * n_units {
            return Err(Error::DimensionMismatch { expected: n_units, actual: f.n });
        }
        if let Some(bad) = f.entries.iter().find(|e| e.len() != h) {
            return Err(Error::DimensionMismatch { expected: h, actual: bad.len() });
        }
    }
    let n = n_units;
    let mut entries = vec![vec![ZERO; h]; n * n];
    for i in 0..n {
        for k in 0..n {
            let out = &mut entries[i * n + k];
            for j in 0..n {
                let term = group.convolve(&f1.entries[i * n + j], &f2.entries[j * n + k]);
                for (o, t) in out.iter_mut().zip(term) {
                    *o += t;
                }
            }
        }
    }
    Ok(GroupMatrix { n, entries })
}
