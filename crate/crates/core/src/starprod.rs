//! Quantizer–dequantizer pairs, symbols and star products.

use std::sync::Arc;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{convolve, normalization_constant, GroupoidFunction, NormalizationInfo};
use crate::error::{Error, Result};
use crate::groupoid::FiniteGroupoid;
use crate::linalg::{zeros, Operator, OperatorMatrix, C64, ONE, ZERO};

/// Largest index space for which the kernel is materialized.
pub const DENSE_KERNEL_LIMIT: usize = 64;

/// Largest index space for which pairwise residuals are computed.
pub const PAIRWISE_LIMIT: usize = 8192;

/// A weighted finite index set. Points are multi-indices over `shape`,
/// enumerated in row-major order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndexSpace {
    pub kind: String,
    pub shape: Vec<usize>,
    pub weights: Vec<f64>,
}

impl IndexSpace {
    pub fn new(kind: impl Into<String>, shape: Vec<usize>, weights: Vec<f64>) -> Result<Self> {
        let len: usize = shape.iter().product();
        if len == 0 {
            return Err(Error::InvalidSpace("empty index space".into()));
        }
        if weights.len() != len {
            return Err(Error::InvalidSpace(format!(
                "{} weights for {len} points",
                weights.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::InvalidSpace(format!("weight {w} is not positive")));
        }
        Ok(IndexSpace { kind: kind.into(), shape, weights })
    }

    /// Counting measure.
    pub fn counting(kind: impl Into<String>, shape: Vec<usize>) -> Result<Self> {
        let len = shape.iter().product();
        Self::new(kind, shape, vec![1.0; len])
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Multi-index of point `x`.
    pub fn label(&self, mut x: usize) -> Vec<usize> {
        let mut out = vec![0; self.shape.len()];
        for (slot, &n) in out.iter_mut().zip(&self.shape).rev() {
            *slot = x % n;
            x /= n;
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Dequantizers {
    /// Dequantizers equal to the quantizers.
    SelfDual,
    Explicit(Vec<Operator>),
}

/// Quantizers `D(x)` and dequantizers `U(x)` over a weighted index space.
#[derive(Debug, Clone)]
pub struct QDPair {
    space: Arc<IndexSpace>,
    hilbert_dim: usize,
    quantizers: Vec<Operator>,
    dequantizers: Dequantizers,
}

fn check_family(ops: &[Operator], len: usize, dim: usize) -> Result<()> {
    if ops.len() != len {
        return Err(Error::DimensionMismatch { expected: len, actual: ops.len() });
    }
    if let Some(op) = ops.iter().find(|op| op.dim() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, actual: op.dim() });
    }
    Ok(())
}

impl QDPair {
    pub fn new(
        space: IndexSpace,
        hilbert_dim: usize,
        quantizers: Vec<Operator>,
        dequantizers: Dequantizers,
    ) -> Result<Self> {
        check_family(&quantizers, space.len(), hilbert_dim)?;
        if let Dequantizers::Explicit(ops) = &dequantizers {
            check_family(ops, space.len(), hilbert_dim)?;
        }
        Ok(QDPair { space: Arc::new(space), hilbert_dim, quantizers, dequantizers })
    }

    /// Self-dual pair of Weyl units `|i⟩⟨k|` over `dim × dim` points.
    pub fn weyl(kind: impl Into<String>, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidSize("Weyl pair needs dimension >= 1".into()));
        }
        let space = IndexSpace::counting(kind, vec![dim, dim])?;
        let ops = (0..dim * dim)
            .map(|x| Operator::Unit { dim, row: x / dim, col: x % dim })
            .collect();
        Self::new(space, dim, ops, Dequantizers::SelfDual)
    }

    /// Left-regular realization of a transitive groupoid with dequantizers
    /// `D(γ) / 𝒩`.
    pub fn d_realization(g: &FiniteGroupoid) -> Result<(Self, NormalizationInfo)> {
        let info = normalization_constant(g)?;
        let k = g.order();
        let maps: Vec<Vec<Option<usize>>> = (0..k)
            .map(|gamma| (0..k).map(|p| g.compose(gamma, p)).collect())
            .collect();
        let quantizers = maps
            .iter()
            .map(|m| Operator::PartialPermutation { map: m.clone(), scale: 1.0 })
            .collect();
        let dequantizers = maps
            .into_iter()
            .map(|map| Operator::PartialPermutation { map, scale: 1.0 / info.value as f64 })
            .collect();
        let space = IndexSpace::counting("groupoid", vec![k])?;
        let pair = Self::new(space, k, quantizers, Dequantizers::Explicit(dequantizers))?;
        Ok((pair, info))
    }

    pub fn space(&self) -> &Arc<IndexSpace> {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.space.len()
    }

    pub fn is_empty(&self) -> bool {
        self.space.is_empty()
    }

    pub fn hilbert_dim(&self) -> usize {
        self.hilbert_dim
    }

    pub fn weights(&self) -> &[f64] {
        &self.space.weights
    }

    pub fn quantizer(&self, x: usize) -> &Operator {
        &self.quantizers[x]
    }

    pub fn quantizers(&self) -> &[Operator] {
        &self.quantizers
    }

    pub fn dequantizer(&self, x: usize) -> &Operator {
        match &self.dequantizers {
            Dequantizers::SelfDual => &self.quantizers[x],
            Dequantizers::Explicit(ops) => &ops[x],
        }
    }

    pub fn is_self_dual(&self) -> bool {
        match &self.dequantizers {
            Dequantizers::SelfDual => true,
            Dequantizers::Explicit(ops) => ops
                .iter()
                .zip(&self.quantizers)
                .all(|(u, d)| u == d || u.to_dense() == d.to_dense()),
        }
    }

    fn check_dim(&self, a: &OperatorMatrix) -> Result<()> {
        if a.nrows() != self.hilbert_dim || a.ncols() != self.hilbert_dim {
            return Err(Error::DimensionMismatch {
                expected: self.hilbert_dim,
                actual: a.nrows(),
            });
        }
        Ok(())
    }

    fn check_symbol(&self, f: &Symbol) -> Result<()> {
        if Arc::ptr_eq(&self.space, &f.space) || *self.space == *f.space {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    /// `Tr[D(x1) D(x2) U(x)†]`.
    pub fn kernel_entry(&self, x1: usize, x2: usize, x: usize) -> C64 {
        self.quantizers[x1].triple_trace(&self.quantizers[x2], self.dequantizer(x))
    }

    pub fn zero_symbol(&self) -> Symbol {
        Symbol { space: self.space.clone(), values: vec![ZERO; self.len()] }
    }

    pub fn symbol_from_values(&self, values: Vec<C64>) -> Result<Symbol> {
        if values.len() != self.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), actual: values.len() });
        }
        Ok(Symbol { space: self.space.clone(), values })
    }
}

/// Values of a function on an index space.
#[derive(Debug, Clone, PartialEq)]
pub struct Symbol {
    pub space: Arc<IndexSpace>,
    pub values: Vec<C64>,
}

impl Symbol {
    pub fn max_abs_diff(&self, other: &Symbol) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_diff(&self, other: &Symbol) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// Dense star-product kernel, indexed `(x1 * m + x2) * m + x`.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel3 {
    pub space: Arc<IndexSpace>,
    pub values: Vec<C64>,
}

impl Kernel3 {
    pub fn size(&self) -> usize {
        self.space.len()
    }

    pub fn get(&self, x1: usize, x2: usize, x: usize) -> C64 {
        let m = self.size();
        self.values[(x1 * m + x2) * m + x]
    }

    pub fn get_mut(&mut self, x1: usize, x2: usize, x: usize) -> &mut C64 {
        let m = self.size();
        &mut self.values[(x1 * m + x2) * m + x]
    }

    /// Whether every entry is exactly 0 or 1.
    pub fn is_boolean(&self) -> bool {
        self.values.iter().all(|&v| v == ZERO || v == ONE)
    }
}

/// `f_A(x) = Tr[A U(x)†]`.
pub fn symbol(pair: &QDPair, a: &OperatorMatrix) -> Result<Symbol> {
    pair.check_dim(a)?;
    let values = (0..pair.len()).map(|x| pair.dequantizer(x).dequantize(a)).collect();
    Ok(Symbol { space: pair.space.clone(), values })
}

/// `A = Σ_x f(x) D(x) w_x`.
pub fn reconstruct(pair: &QDPair, f: &Symbol) -> Result<OperatorMatrix> {
    pair.check_symbol(f)?;
    let mut acc = zeros(pair.hilbert_dim);
    for (x, (&v, &w)) in f.values.iter().zip(pair.weights()).enumerate() {
        if v != ZERO {
            pair.quantizers[x].accumulate_into(&mut acc, v * w);
        }
    }
    Ok(acc)
}

fn check_pairwise(pair: &QDPair) -> Result<()> {
    if pair.len() > PAIRWISE_LIMIT {
        return Err(Error::KernelTooLarge { points: pair.len(), limit: PAIRWISE_LIMIT });
    }
    Ok(())
}

/// `max |Tr[D(x) U(x')†] w_{x'} − δ_{xx'}|`.
pub fn duality_residual(pair: &QDPair) -> Result<f64> {
    check_pairwise(pair)?;
    let mut worst: f64 = 0.0;
    for x in 0..pair.len() {
        for y in 0..pair.len() {
            let t = pair.quantizers[x].hs_pair(pair.dequantizer(y)) * pair.weights()[y];
            let expected = if x == y { ONE } else { ZERO };
            worst = worst.max((t - expected).norm());
        }
    }
    Ok(worst)
}

/// Frobenius norm of `Σ_x w_x |D(x)⟩⟩⟨⟨U(x)| − 1` on operator space,
/// evaluated through Hilbert–Schmidt Gram matrices.
pub fn resolution_residual(pair: &QDPair) -> Result<f64> {
    check_pairwise(pair)?;
    let m = pair.len();
    let w = pair.weights();
    let mut gram = 0.0;
    let mut cross = 0.0;
    for x in 0..m {
        let dx = &pair.quantizers[x];
        let ux = pair.dequantizer(x);
        // ⟨U_x|D_x⟩ = Tr[U_x† D_x] = Tr[D_x U_x†]
        cross += w[x] * dx.hs_pair(ux).re;
        for y in 0..m {
            // ⟨D_x|D_y⟩⟨U_y|U_x⟩ = Tr[D_y D_x†] Tr[U_x U_y†]
            let dd = pair.quantizers[y].hs_pair(dx);
            if dd == ZERO {
                continue;
            }
            let uu = ux.hs_pair(pair.dequantizer(y));
            gram += w[x] * w[y] * (dd * uu).re;
        }
    }
    let d = pair.hilbert_dim as f64;
    Ok((gram - 2.0 * cross + d * d).max(0.0).sqrt())
}

/// Dense kernel `K(x1, x2, x) = Tr[D(x1) D(x2) U(x)†]`.
pub fn kernel(pair: &QDPair) -> Result<Kernel3> {
    let m = pair.len();
    if m > DENSE_KERNEL_LIMIT {
        return Err(Error::KernelTooLarge { points: m, limit: DENSE_KERNEL_LIMIT });
    }
    let mut values = Vec::with_capacity(m * m * m);
    for x1 in 0..m {
        for x2 in 0..m {
            for x in 0..m {
                values.push(pair.kernel_entry(x1, x2, x));
            }
        }
    }
    Ok(Kernel3 { space: pair.space.clone(), values })
}

/// `(f ⋆ g)(x) = Σ f(x1) g(x2) K(x1, x2, x) w_{x1} w_{x2}` against a
/// precomputed kernel.
pub fn star_with_kernel(k: &Kernel3, f: &Symbol, g: &Symbol) -> Result<Symbol> {
    for s in [f, g] {
        if !(Arc::ptr_eq(&k.space, &s.space) || *k.space == *s.space) {
            return Err(Error::SpaceMismatch);
        }
    }
    let m = k.size();
    let w = &k.space.weights;
    let mut out = vec![ZERO; m];
    for x1 in 0..m {
        let a = f.values[x1] * w[x1];
        if a == ZERO {
            continue;
        }
        for x2 in 0..m {
            let b = a * g.values[x2] * w[x2];
            if b == ZERO {
                continue;
            }
            let row = &k.values[(x1 * m + x2) * m..(x1 * m + x2 + 1) * m];
            for (o, kv) in out.iter_mut().zip(row) {
                *o += b * kv;
            }
        }
    }
    Ok(Symbol { space: k.space.clone(), values: out })
}

/// Star product through the kernel when it is small enough, otherwise as
/// `symbol(reconstruct(f) · reconstruct(g))`.
pub fn star(pair: &QDPair, f: &Symbol, g: &Symbol) -> Result<Symbol> {
    pair.check_symbol(f)?;
    pair.check_symbol(g)?;
    if pair.len() <= DENSE_KERNEL_LIMIT {
        star_with_kernel(&kernel(pair)?, f, g)
    } else {
        log::warn!(
            "star product on {} points uses the factored form instead of a dense kernel",
            pair.len()
        );
        star_factored(pair, f, g)
    }
}

pub fn star_factored(pair: &QDPair, f: &Symbol, g: &Symbol) -> Result<Symbol> {
    let a = reconstruct(pair, f)?;
    let b = reconstruct(pair, g)?;
    symbol(pair, &(a * b))
}

/// `max |Σ_y K(x1,x2,y) K(y,x3,x) w_y − Σ_y K(x2,x3,y) K(x1,y,x) w_y|`.
pub fn kernel_associativity_residual(k: &Kernel3) -> f64 {
    let m = k.size();
    let w = &k.space.weights;
    // rows (x1, x2), columns y, weighted
    let left = DMatrix::from_fn(m * m, m, |r, y| k.values[r * m + y] * w[y]);
    // rows y, columns (x3, x)
    let right = DMatrix::from_fn(m, m * m, |y, c| k.values[y * m * m + c]);
    // [(x1, x2), (x3, x)]
    let first = &left * &right;
    let mut worst: f64 = 0.0;
    for x1 in 0..m {
        // M[y, x] = K(x1, y, x)
        let slab = DMatrix::from_fn(m, m, |y, x| k.values[(x1 * m + y) * m + x]);
        // [(x2, x3), x]
        let second = &left * &slab;
        for x2 in 0..m {
            for x3 in 0..m {
                for x in 0..m {
                    let a = first[(x1 * m + x2, x3 * m + x)];
                    let b = second[(x2 * m + x3, x)];
                    worst = worst.max((a - b).norm());
                }
            }
        }
    }
    worst
}

pub fn associativity_residual(pair: &QDPair) -> Result<f64> {
    Ok(kernel_associativity_residual(&kernel(pair)?))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceReport {
    pub groupoid_order: usize,
    pub hilbert_dim: usize,
    /// Largest deviation between star product and convolution over all samples.
    pub max_dev: f64,
    /// Largest Frobenius deviation over all samples.
    pub frobenius_dev: f64,
    /// Deviation on integer-valued symbols, where the products are exact.
    pub integer_dev: f64,
    pub kernel_is_boolean: bool,
    /// Kernel entries equal to one.
    pub kernel_ones: usize,
    /// Whether `K(a, b, c) = 1` exactly when `a∘b = c`.
    pub kernel_matches_composition: bool,
    pub samples: usize,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normalization: Option<NormalizationInfo>,
}

impl EquivalenceReport {
    pub fn passed(&self, tol: f64) -> bool {
        self.max_dev < tol && self.integer_dev == 0.0 && self.kernel_matches_composition
    }
}

fn random_complex(rng: &mut ChaCha8Rng, len: usize) -> Vec<C64> {
    (0..len)
        .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect()
}

fn random_integer(rng: &mut ChaCha8Rng, len: usize) -> Vec<C64> {
    (0..len)
        .map(|_| C64::new(rng.random_range(-4..=4) as f64, rng.random_range(-4..=4) as f64))
        .collect()
}

/// Compares the star product of `pair` with convolution on `g`, where
/// symbol point `x` corresponds to element `x`.
fn compare_with_convolution(
    g: &Arc<FiniteGroupoid>,
    pair: &QDPair,
    samples: usize,
    seed: u64,
) -> Result<EquivalenceReport> {
    let m = pair.len();
    let mut ones = 0;
    let mut boolean = true;
    let mut matches = true;
    for a in 0..m {
        for b in 0..m {
            let prod = g.compose(a, b);
            for c in 0..m {
                let v = pair.kernel_entry(a, b, c);
                let one = v == ONE;
                ones += one as usize;
                boolean &= one || v == ZERO;
                matches &= one == (prod == Some(c)) && (one || v == ZERO);
            }
        }
    }
    let k = (m <= DENSE_KERNEL_LIMIT).then(|| kernel(pair)).transpose()?;
    let product = |f: &Symbol, h: &Symbol| match &k {
        Some(k) => star_with_kernel(k, f, h),
        None => star_factored(pair, f, h),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_dev: f64 = 0.0;
    let mut frobenius_dev: f64 = 0.0;
    let mut integer_dev: f64 = 0.0;
    for i in 0..samples.max(1) {
        let integer = i % 2 == 1;
        let (a, b) = if integer {
            (random_integer(&mut rng, m), random_integer(&mut rng, m))
        } else {
            (random_complex(&mut rng, m), random_complex(&mut rng, m))
        };
        let s = product(&pair.symbol_from_values(a.clone())?, &pair.symbol_from_values(b.clone())?)?;
        let c = convolve(
            &GroupoidFunction::new(g.clone(), a)?,
            &GroupoidFunction::new(g.clone(), b)?,
        )?;
        let c = pair.symbol_from_values(c.into_values())?;
        let dev = s.max_abs_diff(&c);
        max_dev = max_dev.max(dev);
        frobenius_dev = frobenius_dev.max(s.frobenius_diff(&c));
        if integer {
            integer_dev = integer_dev.max(dev);
        }
    }
    Ok(EquivalenceReport {
        groupoid_order: g.order(),
        hilbert_dim: pair.hilbert_dim(),
        max_dev,
        frobenius_dev,
        integer_dev,
        kernel_is_boolean: boolean,
        kernel_ones: ones,
        kernel_matches_composition: matches,
        samples: samples.max(1),
        seed,
        normalization: None,
    })
}

/// Star product of the Weyl pair on `n` points against convolution on the
/// pair groupoid.
pub fn verify_prop1(n: usize, samples: usize, seed: u64) -> Result<EquivalenceReport> {
    if !(1..=16).contains(&n) {
        return Err(Error::InvalidSize(format!("n = {n} outside 1..=16")));
    }
    let g = Arc::new(FiniteGroupoid::pair(n)?);
    let pair = QDPair::weyl("pair", n)?;
    compare_with_convolution(&g, &pair, samples, seed)
}

/// Star product of the left-regular pair against convolution on a
/// transitive groupoid.
pub fn verify_gen_conv(g: &FiniteGroupoid, samples: usize, seed: u64) -> Result<EquivalenceReport> {
    if g.order() > 64 {
        return Err(Error::InvalidSize(format!("order {} exceeds 64", g.order())));
    }
    let (pair, info) = QDPair::d_realization(g)?;
    let g = Arc::new(g.clone());
    let mut report = compare_with_convolution(&g, &pair, samples, seed)?;
    report.normalization = Some(info);
    Ok(report)
}
