mod common;

use std::sync::Arc;

use common::{c, matmul, max_diff, random_complex, random_integer, transitive_corpus};
use groupoidal::algebra::*;
use groupoidal::error::Error;
use groupoidal::group::FiniteGroup;
use groupoidal::groupoid::FiniteGroupoid;
use groupoidal::linalg::{identity, max_abs_diff, trace, zeros, OperatorMatrix, C64, ONE, ZERO};
use groupoidal::quadrature::Grid1D;
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn func(g: &Arc<FiniteGroupoid>, values: Vec<C64>) -> GroupoidFunction {
    GroupoidFunction::new(g.clone(), values).unwrap()
}

/// Convolution by scanning all K² pairs.
fn convolve_oracle(g: &FiniteGroupoid, a: &[C64], b: &[C64]) -> Vec<C64> {
    let mut out = vec![ZERO; g.order()];
    for x in 0..g.order() {
        for y in 0..g.order() {
            if g.source(x) == g.target(y) {
                out[g.compose(x, y).unwrap()] += a[x] * b[y];
            }
        }
    }
    out
}

fn transpose(a: &OperatorMatrix) -> OperatorMatrix {
    a.transpose()
}

#[test]
fn pair_convolution_is_matrix_product() {
    let g = Arc::new(FiniteGroupoid::pair(2).unwrap());
    let a = [c(1.0, 0.0), c(2.0, 1.0), c(0.0, -1.0), c(3.0, 0.0)];
    let b = [c(0.5, 0.0), c(-1.0, 0.0), c(1.0, 1.0), c(2.0, 0.0)];
    let got = convolve(&func(&g, a.to_vec()), &func(&g, b.to_vec())).unwrap();
    let want = [
        a[0] * b[0] + a[1] * b[2],
        a[0] * b[1] + a[1] * b[3],
        a[2] * b[0] + a[3] * b[2],
        a[2] * b[1] + a[3] * b[3],
    ];
    assert_eq!(got.values(), &want);
}

#[test]
fn delta_products_follow_composition() {
    for (name, g) in transitive_corpus().into_iter().filter(|(_, g)| g.order() <= 16) {
        let g = Arc::new(g);
        for a in 0..g.order() {
            let da = GroupoidFunction::delta(g.clone(), a).unwrap();
            for b in 0..g.order() {
                let db = GroupoidFunction::delta(g.clone(), b).unwrap();
                let want = match g.compose(a, b) {
                    Some(ab) => GroupoidFunction::delta(g.clone(), ab).unwrap(),
                    None => GroupoidFunction::zero(g.clone()),
                };
                assert_eq!(&da * &db, want, "{name}: {a} {b}");
            }
        }
    }
}

#[test]
fn cyclic_group_convolution() {
    let g = Arc::new(FiniteGroupoid::from_group(&FiniteGroup::cyclic(3)));
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let a = random_complex(&mut rng, 3);
    let b = random_complex(&mut rng, 3);
    let mut want = vec![ZERO; 3];
    for x in 0..3 {
        for y in 0..3 {
            want[(x + y) % 3] += a[x] * b[y];
        }
    }
    let got = convolve(&func(&g, a), &func(&g, b)).unwrap();
    assert!(max_diff(got.values(), &want) < 1e-15);
}

#[test]
fn deltas_form_a_basis() {
    let g = Arc::new(FiniteGroupoid::transitive(2, &FiniteGroup::cyclic(2)).unwrap());
    let d = GroupoidFunction::delta(g.clone(), 5).unwrap();
    assert_eq!(d.values()[5], ONE);
    assert!(d.values().iter().enumerate().all(|(i, v)| i == 5 || *v == ZERO));
    assert!(matches!(GroupoidFunction::delta(g.clone(), 8), Err(Error::ElementOutOfRange { .. })));

    let f = func(&g, random_complex(&mut ChaCha8Rng::seed_from_u64(2), 8));
    let mut sum = GroupoidFunction::zero(g.clone());
    for x in 0..8 {
        sum = &sum + &GroupoidFunction::delta(g.clone(), x).unwrap().scale(f.values()[x]);
    }
    assert_eq!(sum, f);
}

#[test]
fn mismatched_owners() {
    let g = Arc::new(FiniteGroupoid::pair(2).unwrap());
    let h = Arc::new(FiniteGroupoid::from_group(&FiniteGroup::cyclic(4)));
    assert!(matches!(
        convolve(&GroupoidFunction::zero(g), &GroupoidFunction::zero(h)),
        Err(Error::AlgebraMismatch)
    ));
}

#[test]
fn weyl_unit_relations() {
    let n = 3;
    let e = weyl_units(n);
    for i in 0..n {
        for k in 0..n {
            for j in 0..n {
                for l in 0..n {
                    let want = if k == j { e[i * n + l].clone() } else { zeros(n) };
                    assert_eq!(matmul(&e[i * n + k], &e[j * n + l]), want);
                    let t = trace(&matmul(&e[i * n + k], &transpose(&e[l * n + j])));
                    let want = if i == l && k == j { ONE } else { ZERO };
                    assert_eq!(t, want);
                }
            }
        }
    }
    let e2 = weyl_units(2);
    assert_eq!(matmul(&e2[1], &e2[2]), e2[0]);
    assert_eq!(matmul(&e2[1], &e2[1]), zeros(2));
    let sum = (0..n).fold(zeros(n), |acc, i| acc + &e[i * n + i]);
    assert_eq!(sum, identity(n));
}

#[test]
fn pair_realization_examples() {
    let g = Arc::new(FiniteGroupoid::pair(3).unwrap());
    let a = realize_pair_function(&GroupoidFunction::delta(g.clone(), 1).unwrap()).unwrap();
    assert_eq!(a, weyl_units(3)[1]);
    let diag = func(&g, (0..9).map(|x| if x % 4 == 0 { ONE } else { ZERO }).collect());
    assert_eq!(realize_pair_function(&diag).unwrap(), identity(3));
    let z4 = Arc::new(FiniteGroupoid::from_group(&FiniteGroup::cyclic(4)));
    assert!(matches!(
        realize_pair_function(&GroupoidFunction::zero(z4)),
        Err(Error::UnsupportedOwner(_))
    ));
    let back = pair_function_from_matrix(g.clone(), &a).unwrap();
    assert_eq!(back, GroupoidFunction::delta(g, 1).unwrap());
}

#[test]
fn pair_realization_is_multiplicative() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in 1..=8 {
        let g = Arc::new(FiniteGroupoid::pair(n).unwrap());
        for _ in 0..5 {
            let f1 = func(&g, random_integer(&mut rng, n * n));
            let f2 = func(&g, random_integer(&mut rng, n * n));
            let lhs = matmul(&realize_pair_function(&f1).unwrap(), &realize_pair_function(&f2).unwrap());
            let rhs = realize_pair_function(&(&f1 * &f2)).unwrap();
            assert_eq!(lhs, rhs);
            let f1 = func(&g, random_complex(&mut rng, n * n));
            let f2 = func(&g, random_complex(&mut rng, n * n));
            let lhs = matmul(&realize_pair_function(&f1).unwrap(), &realize_pair_function(&f2).unwrap());
            let rhs = realize_pair_function(&(&f1 * &f2)).unwrap();
            assert!(max_abs_diff(&lhs, &rhs) < 1e-12);
        }
    }
}

#[test]
fn d_realization_represents_composition() {
    for (name, g) in transitive_corpus().into_iter().filter(|(_, g)| g.order() <= 16) {
        let d: Vec<_> = (0..g.order()).map(|x| d_realization(&g, x).unwrap()).collect();
        for a in 0..g.order() {
            for b in 0..g.order() {
                let want = g.compose(a, b).map(|ab| d[ab].clone()).unwrap_or_else(|| zeros(g.order()));
                assert_eq!(matmul(&d[a], &d[b]), want, "{name}");
            }
        }
    }
}

#[test]
fn d_realization_of_z2_is_regular_representation() {
    let z2 = FiniteGroup::cyclic(2);
    let g = FiniteGroupoid::from_group(&z2);
    for x in 0..2 {
        // left translation h ↦ x + h
        let want = OperatorMatrix::from_fn(2, 2, |row, col| if row == (x + col) % 2 { ONE } else { ZERO });
        assert_eq!(d_realization(&g, x).unwrap(), want);
    }
}

#[test]
fn units_project_onto_their_fibre() {
    let g = FiniteGroupoid::transitive(3, &FiniteGroup::cyclic(2)).unwrap();
    for &u in g.units() {
        let d = d_realization(&g, u).unwrap();
        let want = OperatorMatrix::from_fn(g.order(), g.order(), |row, col| {
            if row == col && g.target(col) == u {
                ONE
            } else {
                ZERO
            }
        });
        assert_eq!(d, want);
    }
}

/// `Tr[D(a) Dᵀ(b)]` from dense matrices.
fn trace_gram(g: &FiniteGroupoid) -> Vec<Vec<f64>> {
    let d: Vec<_> = (0..g.order()).map(|x| d_realization(g, x).unwrap()).collect();
    (0..g.order())
        .map(|a| (0..g.order()).map(|b| trace(&matmul(&d[a], &transpose(&d[b]))).re).collect())
        .collect()
}

#[test]
fn normalization_examples() {
    for n in 1..=5 {
        let g = FiniteGroupoid::pair(n).unwrap();
        let info = normalization_constant(&g).unwrap();
        assert_eq!(info.value, n);
        assert!(info.matches_closed_form());
        assert_eq!(trace_gram(&g)[1 % (n * n)][1 % (n * n)], n as f64);
    }
    for m in 2..=5 {
        let info = normalization_constant(&FiniteGroupoid::from_group(&FiniteGroup::cyclic(m))).unwrap();
        assert_eq!(info.value, m);
        assert_eq!(info.closed_form(), m);
    }
}

#[test]
fn normalization_is_the_brute_force_trace() {
    let g = FiniteGroupoid::transitive(2, &FiniteGroup::cyclic(2)).unwrap();
    let info = normalization_constant(&g).unwrap();
    let gram = trace_gram(&g);
    assert_eq!((info.unit_count, info.isotropy_order, info.isotropy_excess), (2, 2, 1));
    assert_eq!(info.closed_form(), 3);
    for a in 0..8 {
        for b in 0..8 {
            let want = if a == b { info.value as f64 } else { 0.0 };
            assert_eq!(gram[a][b], want);
        }
    }
    // the trace counts |G₀|·|H| arrows, not |G₀| + |H| − 1
    assert_eq!(info.value, 4);
    assert!(!info.matches_closed_form());

    let u = FiniteGroupoid::disjoint_union(&[FiniteGroupoid::pair(1).unwrap(), FiniteGroupoid::pair(2).unwrap()]).unwrap();
    assert!(matches!(normalization_constant(&u), Err(Error::NotTransitive { orbits: 2 })));
}

#[test]
fn dequantization_inverts_quantization() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for (name, g) in transitive_corpus().into_iter().filter(|(_, g)| g.order() <= 16) {
        let g = Arc::new(g);
        let k = g.order();
        let f = func(&g, random_complex(&mut rng, k));
        let back = dequantize_d(g.clone(), &quantize_d(&f)).unwrap();
        assert!(f.max_abs_diff(&back).unwrap() < 1e-12, "{name}");
        assert_eq!(dequantize_d(g.clone(), &zeros(k)).unwrap(), GroupoidFunction::zero(g.clone()));
        let d0 = d_realization(&g, 0).unwrap();
        assert_eq!(dequantize_d(g.clone(), &d0).unwrap(), GroupoidFunction::delta(g.clone(), 0).unwrap());
        assert!(matches!(dequantize_d(g.clone(), &zeros(k + 1)), Err(Error::DimensionMismatch { .. })));
    }
}

/// Composite Simpson rule on `[a, b]` with `2m` panels.
fn simpson<F: Fn(f64) -> f64>(a: f64, b: f64, m: usize, f: F) -> f64 {
    let h = (b - a) / (2 * m) as f64;
    let mut s = f(a) + f(b);
    for i in 1..2 * m {
        s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

fn sample(grid: &Grid1D, f: impl Fn(f64, f64) -> f64) -> DMatrix<C64> {
    let p = &grid.points;
    DMatrix::from_fn(p.len(), p.len(), |i, k| c(f(p[i], p[k]), 0.0))
}

#[test]
fn gaussian_kernels_convolve_like_dense_quadrature() {
    let grid = Grid1D::gauss_legendre(-6.0, 6.0, 401).unwrap();
    let gauss = sample(&grid, |x, y| (-(x - y) * (x - y)).exp());
    let out = weighted_grid_convolve(&gauss, &gauss, &grid, &vec![1.0; 401]).unwrap();
    let mut worst: f64 = 0.0;
    for i in (0..401).step_by(20) {
        for k in (0..401).step_by(25) {
            let (x, y) = (grid.points[i], grid.points[k]);
            let want = simpson(-6.0, 6.0, 12_000, |s| (-(x - s) * (x - s) - (s - y) * (s - y)).exp());
            worst = worst.max((out[(i, k)] - c(want, 0.0)).norm());
        }
    }
    assert!(worst < 1e-8, "{worst:e}");
}

#[test]
fn narrow_gaussian_acts_as_identity() {
    let grid = Grid1D::trapezoid(-6.0, 6.0, 401).unwrap();
    let sigma: f64 = 0.05;
    let norm = 1.0 / (sigma * (2.0 * std::f64::consts::PI).sqrt());
    let delta = sample(&grid, |x, y| norm * (-(x - y) * (x - y) / (2.0 * sigma * sigma)).exp());
    let f = sample(&grid, |x, y| (-(x * x) - 0.5 * y * y + 0.3 * x * y).exp());
    let out = weighted_grid_convolve(&f, &delta, &grid, &vec![1.0; 401]).unwrap();
    let mut worst: f64 = 0.0;
    for i in 0..401 {
        for k in 0..401 {
            if grid.points[k].abs() < 5.0 {
                worst = worst.max((out[(i, k)] - f[(i, k)]).norm());
            }
        }
    }
    assert!(worst < 5e-3, "{worst:e}");
}

#[test]
fn grid_convolution_is_associative() {
    let grid = Grid1D::trapezoid(-6.0, 6.0, 401).unwrap();
    let flat = vec![1.0; 401];
    let f1 = sample(&grid, |x, y| (-(x - y).powi(2)).exp());
    let f2 = sample(&grid, |x, y| (-(x * x + y * y) / 4.0).exp() * (x - 0.3 * y).sin());
    let f3 = sample(&grid, |x, y| 1.0 / (1.0 + (x + y).powi(2)));
    let conv = |a: &DMatrix<C64>, b: &DMatrix<C64>, rho: &[f64]| weighted_grid_convolve(a, b, &grid, rho).unwrap();
    let left = conv(&conv(&f1, &f2, &flat), &f3, &flat);
    let right = conv(&f1, &conv(&f2, &f3, &flat), &flat);
    let worst = (&left - &right).iter().map(|v| v.norm()).fold(0.0, f64::max);
    assert!(worst < 1e-8, "{worst:e}");

    // a non-constant density breaks associativity of the weighted form
    let rho: Vec<f64> = grid.points.iter().map(|x| 1.0 + 0.5 * (x * 0.7).cos()).collect();
    let left = conv(&conv(&f1, &f2, &rho), &f3, &rho);
    let right = conv(&f1, &conv(&f2, &f3, &rho), &rho);
    let gap = (&left - &right).iter().map(|v| v.norm()).fold(0.0, f64::max);
    assert!(gap > 0.1, "{gap:e}");

    let small = Grid1D::trapezoid(-1.0, 1.0, 5).unwrap();
    assert!(matches!(weighted_grid_convolve(&f1, &f2, &small, &rho), Err(Error::GridMismatch(_))));
    let mut bad = rho.clone();
    bad[7] = 0.0;
    assert!(matches!(
        weighted_grid_convolve(&f1, &f2, &grid, &bad),
        Err(Error::NonPositiveDensity { index: 7, .. })
    ));
}

fn group_matrix(n: usize, h: usize, values: &[C64]) -> GroupMatrix {
    GroupMatrix::new(n, values.chunks(h).map(|c| c.to_vec()).collect()).unwrap()
}

#[test]
fn matrix_group_convolution_reductions() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let trivial = FiniteGroup::trivial();
    let a = random_complex(&mut rng, 9);
    let b = random_complex(&mut rng, 9);
    let out = matrix_group_convolve(3, &trivial, &group_matrix(3, 1, &a), &group_matrix(3, 1, &b)).unwrap();
    let ma = OperatorMatrix::from_fn(3, 3, |i, k| a[i * 3 + k]);
    let mb = OperatorMatrix::from_fn(3, 3, |i, k| b[i * 3 + k]);
    let prod = matmul(&ma, &mb);
    let flat: Vec<C64> = out.entries.iter().map(|e| e[0]).collect();
    let want: Vec<C64> = (0..9).map(|x| prod[(x / 3, x % 3)]).collect();
    assert!(max_diff(&flat, &want) < 1e-15);

    let z4 = FiniteGroup::cyclic(4);
    let a = random_complex(&mut rng, 4);
    let b = random_complex(&mut rng, 4);
    let out = matrix_group_convolve(1, &z4, &group_matrix(1, 4, &a), &group_matrix(1, 4, &b)).unwrap();
    let mut want = vec![ZERO; 4];
    for x in 0..4 {
        for y in 0..4 {
            want[(x + y) % 4] += a[x] * b[y];
        }
    }
    assert!(max_diff(&out.entries[0], &want) < 1e-15);

    let err = matrix_group_convolve(2, &z4, &group_matrix(1, 4, &a), &group_matrix(1, 4, &b));
    assert!(matches!(err, Err(Error::DimensionMismatch { .. })));
}

#[test]
fn matrix_group_convolution_matches_transitive_groupoid() {
    let z2 = FiniteGroup::cyclic(2);
    let g = Arc::new(FiniteGroupoid::transitive(2, &z2).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let a = random_complex(&mut rng, 8);
    let b = random_complex(&mut rng, 8);
    // element (i, j, h) sits at (i·2 + j)·2 + h, the same flat order as the array
    let out = matrix_group_convolve(2, &z2, &group_matrix(2, 2, &a), &group_matrix(2, 2, &b)).unwrap();
    let flat: Vec<C64> = out.entries.concat();
    let want = convolve_oracle(&g, &a, &b);
    assert!(max_diff(&flat, &want) < 1e-15);
    let got = convolve(&func(&g, a), &func(&g, b)).unwrap();
    assert!(max_diff(got.values(), &want) < 1e-15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn convolution_is_associative_and_bilinear(i in 0usize..14, seed in any::<u64>()) {
        let corpus = transitive_corpus();
        let g = Arc::new(corpus[i % corpus.len()].1.clone());
        let k = g.order();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f1 = func(&g, random_integer(&mut rng, k));
        let f2 = func(&g, random_integer(&mut rng, k));
        let f3 = func(&g, random_integer(&mut rng, k));
        prop_assert_eq!(&(&f1 * &f2) * &f3, &f1 * &(&f2 * &f3));
        prop_assert_eq!(&f1 * &(&f2 + &f3), &(&f1 * &f2) + &(&f1 * &f3));
        let prod = &f1 * &f2;
        prop_assert_eq!(prod.values().to_vec(), convolve_oracle(&g, f1.values(), f2.values()));
        let s = c(2.0, -3.0);
        prop_assert_eq!(&f1.scale(s) * &f2, (&f1 * &f2).scale(s));
    }

    #[test]
    fn trace_orthogonality_is_exact(i in 0usize..14) {
        let corpus = transitive_corpus();
        let g = &corpus[i % corpus.len()].1;
        let info = normalization_constant(g).unwrap();
        let d: Vec<_> = (0..g.order()).map(|x| d_realization(g, x).unwrap()).collect();
        for a in 0..g.order() {
            for b in 0..g.order() {
                // Tr[A Bᵀ] = Σ A_ij B_ij
                let t = d[a].component_mul(&d[b]).sum() / info.value as f64;
                prop_assert_eq!(t, if a == b { ONE } else { ZERO });
            }
        }
    }

    #[test]
    fn pair_d_realization_is_n_copies_of_weyl_units(n in 1usize..=5) {
        let g = FiniteGroupoid::pair(n).unwrap();
        let e = weyl_units(n);
        for x in 0..n * n {
            let d = d_realization(&g, x).unwrap();
            prop_assert_eq!(trace(&d), trace(&e[x]) * n as f64);
            let rank = d.iter().filter(|v| **v == ONE).count();
            prop_assert_eq!(rank, n);
        }
    }
}
