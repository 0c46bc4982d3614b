//! Dense complex matrices and the sparse operator shapes used by quantizer families.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;

/// Dense complex square matrix acting on a finite or truncated Hilbert space.
pub type OperatorMatrix = DMatrix<C64>;

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };
pub const I: C64 = C64 { re: 0.0, im: 1.0 };

pub fn zeros(dim: usize) -> OperatorMatrix {
    OperatorMatrix::zeros(dim, dim)
}

pub fn identity(dim: usize) -> OperatorMatrix {
    OperatorMatrix::identity(dim, dim)
}

pub fn trace(a: &OperatorMatrix) -> C64 {
    a.diagonal().sum()
}

/// Hilbert–Schmidt pairing `Tr[A B†]`.
pub fn hs_inner(a: &OperatorMatrix, b: &OperatorMatrix) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y.conj()).sum()
}

pub fn frobenius(a: &OperatorMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs(a: &OperatorMatrix) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &OperatorMatrix, b: &OperatorMatrix) -> f64 {
    max_abs(&(a - b))
}

pub fn hermiticity_deviation(a: &OperatorMatrix) -> f64 {
    max_abs_diff(a, &a.adjoint())
}

/// Truncated annihilation operator with `(a)_{n-1,n} = sqrt(n)`.
pub fn annihilation(dim: usize) -> OperatorMatrix {
    let mut a = zeros(dim);
    for n in 1..dim {
        a[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    a
}

pub fn creation(dim: usize) -> OperatorMatrix {
    annihilation(dim).adjoint()
}

pub fn number_operator(dim: usize) -> OperatorMatrix {
    OperatorMatrix::from_diagonal(&DVector::from_fn(dim, |n, _| C64::new(n as f64, 0.0)))
}

/// Diagonal phase `e^{i theta N}`.
pub fn number_phase(dim: usize, theta: f64) -> DVector<C64> {
    DVector::from_fn(dim, |n, _| C64::from_polar(1.0, theta * n as f64))
}

/// Eigen-decomposition of a Hermitian matrix with eigenvalues in ascending order.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Eigenvectors stored as columns, aligned with `values`.
    pub vectors: OperatorMatrix,
}

impl HermitianEigen {
    pub fn new(a: &OperatorMatrix) -> Self {
        let eig = nalgebra::SymmetricEigen::new(a.clone());
        let n = a.nrows();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = OperatorMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
        HermitianEigen { values, vectors }
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// `f(A) = V diag(f(lambda)) V†`.
    pub fn apply<F: Fn(f64) -> C64>(&self, f: F) -> OperatorMatrix {
        let scaled = scale_columns(&self.vectors, |k| f(self.values[k]));
        scaled * self.vectors.adjoint()
    }
}

/// Multiply column `k` of `m` by `factor(k)`.
pub fn scale_columns<F: Fn(usize) -> C64>(m: &OperatorMatrix, factor: F) -> OperatorMatrix {
    let mut out = m.clone();
    for (k, mut col) in out.column_iter_mut().enumerate() {
        col *= factor(k);
    }
    out
}

/// `diag(left) * m * diag(right)`.
pub fn scale_rows_cols(m: &OperatorMatrix, left: &DVector<C64>, right: &DVector<C64>) -> OperatorMatrix {
    OperatorMatrix::from_fn(m.nrows(), m.ncols(), |r, c| left[r] * m[(r, c)] * right[c])
}

/// `exp(-i t H)` for Hermitian `H`.
pub fn unitary_evolution(h: &OperatorMatrix, t: f64) -> OperatorMatrix {
    HermitianEigen::new(h).apply(|lambda| C64::from_polar(1.0, -t * lambda))
}

/// Operator shapes appearing in quantizer and dequantizer families.
///
/// Weyl units and partial permutations stay sparse so that families with
/// many index points do not materialize one dense matrix per point.
#[derive(Debug, Clone, PartialEq)]
pub enum Operator {
    /// `|row><col|` on a space of dimension `dim`.
    Unit { dim: usize, row: usize, col: usize },
    /// 0/1 matrix with at most one nonzero per column, times `scale`:
    /// column `p` has its entry at row `map[p]`.
    PartialPermutation {
        map: Vec<Option<usize>>,
        scale: f64,
    },
    /// `|ket><bra|`.
    Outer { ket: DVector<C64>, bra: DVector<C64> },
    Dense(OperatorMatrix),
}

impl Operator {
    pub fn dim(&self) -> usize {
        match self {
            Operator::Unit { dim, .. } => *dim,
            Operator::PartialPermutation { map, .. } => map.len(),
            Operator::Outer { ket, .. } => ket.len(),
            Operator::Dense(m) => m.nrows(),
        }
    }

    pub fn to_dense(&self) -> OperatorMatrix {
        match self {
            Operator::Unit { dim, row, col } => {
                let mut m = zeros(*dim);
                m[(*row, *col)] = ONE;
                m
            }
            Operator::PartialPermutation { map, scale } => {
                let mut m = zeros(map.len());
                for (p, q) in map.iter().enumerate() {
                    if let Some(q) = q {
                        m[(*q, p)] = C64::new(*scale, 0.0);
                    }
                }
                m
            }
            Operator::Outer { ket, bra } => ket * bra.adjoint(),
            Operator::Dense(m) => m.clone(),
        }
    }

    /// `Tr[A X†]` where `X` is `self`.
    pub fn dequantize(&self, a: &OperatorMatrix) -> C64 {
        match self {
            Operator::Unit { row, col, .. } => a[(*row, *col)],
            Operator::PartialPermutation { map, scale } => {
                let s: C64 = map
                    .iter()
                    .enumerate()
                    .filter_map(|(p, q)| q.map(|q| a[(q, p)]))
                    .sum();
                s * *scale
            }
            // Tr[A |b><k|] = <k|A|b>
            Operator::Outer { ket, bra } => {
                let ab = a * bra;
                ket.dotc(&ab)
            }
            Operator::Dense(m) => hs_inner(a, m),
        }
    }

    /// `acc += coeff * self`.
    pub fn accumulate_into(&self, acc: &mut OperatorMatrix, coeff: C64) {
        match self {
            Operator::Unit { row, col, .. } => acc[(*row, *col)] += coeff,
            Operator::PartialPermutation { map, scale } => {
                for (p, q) in map.iter().enumerate() {
                    if let Some(q) = q {
                        acc[(*q, p)] += coeff * *scale;
                    }
                }
            }
            Operator::Outer { ket, bra } => {
                for c in 0..bra.len() {
                    let b = bra[c].conj() * coeff;
                    if b == ZERO {
                        continue;
                    }
                    for r in 0..ket.len() {
                        acc[(r, c)] += ket[r] * b;
                    }
                }
            }
            Operator::Dense(m) => *acc += m * coeff,
        }
    }

    /// Hilbert–Schmidt pairing `Tr[self other†]`.
    pub fn hs_pair(&self, other: &Operator) -> C64 {
        match (self, other) {
            (
                Operator::Unit { row, col, .. },
                Operator::Unit {
                    row: r2, col: c2, ..
                },
            ) => {
                if row == r2 && col == c2 {
                    ONE
                } else {
                    ZERO
                }
            }
            // Tr[|k1><b1| |b2><k2|] = <b1|b2><k2|k1>
            (Operator::Outer { ket: k1, bra: b1 }, Operator::Outer { ket: k2, bra: b2 }) => {
                b1.dotc(b2) * k2.dotc(k1)
            }
            // Tr[X M†] = conj(Tr[M X†])
            (_, Operator::Dense(m)) => self.dequantize(m).conj(),
            (_, other) => other.dequantize(&self.to_dense()),
        }
    }

    /// `Tr[self b c†]`, the star-product kernel density.
    pub fn triple_trace(&self, b: &Operator, c: &Operator) -> C64 {
        match (self, b, c) {
            (
                Operator::Unit { row: i, col: k, .. },
                Operator::Unit { row: j, col: l, .. },
                Operator::Unit { row: m, col: n, .. },
            ) => {
                // E_ik E_jl E_mn^† = delta_kj E_il E_nm, trace delta_kj delta_im delta_ln
                if k == j && i == m && l == n {
                    ONE
                } else {
                    ZERO
                }
            }
            (
                Operator::PartialPermutation { map: ma, scale: sa },
                Operator::PartialPermutation { map: mb, scale: sb },
                Operator::PartialPermutation { map: mc, scale: sc },
            ) => {
                // (AB)_{qp} = 1 iff a(b(p)) = q; Tr[AB C^T] = #{p : a(b(p)) = c(p)}
                let count = (0..ma.len())
                    .filter(|&p| {
                        let ab = mb[p].and_then(|x| ma[x]);
                        ab.is_some() && ab == mc[p]
                    })
                    .count();
                C64::new(count as f64 * sa * sb * sc, 0.0)
            }
            (
                Operator::Outer { ket: k1, bra: b1 },
                Operator::Outer { ket: k2, bra: b2 },
                Operator::Outer { ket: k3, bra: b3 },
            ) => {
                // Tr[|k1><b1|k2><b2|b3><k3|] = <b1|k2><b2|b3><k3|k1>
                b1.dotc(k2) * b2.dotc(b3) * k3.dotc(k1)
            }
            _ => {
                let ab = self.to_dense() * b.to_dense();
                c.dequantize(&ab)
            }
        }
    }
}
