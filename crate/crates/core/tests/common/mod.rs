#![allow(dead_code)]

use groupoidal::axioms::Axiom;
use groupoidal::group::FiniteGroup;
use groupoidal::groupoid::FiniteGroupoid;
use groupoidal::linalg::{OperatorMatrix, C64};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Valid groupoids of order at most 16.
pub fn small_corpus() -> Vec<(String, FiniteGroupoid)> {
    let mut out = Vec::new();
    for n in 1..=4 {
        out.push((format!("pair({n})"), FiniteGroupoid::pair(n).unwrap()));
    }
    for n in 2..=5 {
        out.push((format!("Z{n}"), FiniteGroupoid::from_group(&FiniteGroup::cyclic(n))));
    }
    out.push(("V4".into(), FiniteGroupoid::from_group(&FiniteGroup::klein())));
    out.push(("S3".into(), FiniteGroupoid::from_group(&FiniteGroup::symmetric3())));
    out.push(("pair(2)xZ2".into(), FiniteGroupoid::transitive(2, &FiniteGroup::cyclic(2)).unwrap()));
    out.push(("pair(2)xZ3".into(), FiniteGroupoid::transitive(2, &FiniteGroup::cyclic(3)).unwrap()));
    out.push(("pair(2)xV4".into(), FiniteGroupoid::transitive(2, &FiniteGroup::klein()).unwrap()));
    let z2 = FiniteGroup::cyclic(2);
    out.push(("Z2 swap".into(), FiniteGroupoid::action(&z2, 2, |x, g| (x + g) % 2).unwrap()));
    out.push(("Z2 fixed".into(), FiniteGroupoid::action(&z2, 2, |x, _| x).unwrap()));
    let z3 = FiniteGroup::cyclic(3);
    out.push(("Z3 rotation".into(), FiniteGroupoid::action(&z3, 3, |x, g| (x + g) % 3).unwrap()));
    let parts = [FiniteGroupoid::pair(2).unwrap(), FiniteGroupoid::pair(3).unwrap()];
    out.push(("pair(2)+pair(3)".into(), FiniteGroupoid::disjoint_union(&parts).unwrap()));
    let parts = [FiniteGroupoid::from_group(&z2), FiniteGroupoid::pair(2).unwrap()];
    out.push(("Z2+pair(2)".into(), FiniteGroupoid::disjoint_union(&parts).unwrap()));
    out
}

/// Transitive groupoids of order at most 64.
pub fn transitive_corpus() -> Vec<(String, FiniteGroupoid)> {
    let mut out = Vec::new();
    for n in [1, 2, 3, 5, 8] {
        out.push((format!("pair({n})"), FiniteGroupoid::pair(n).unwrap()));
    }
    for n in 2..=5 {
        out.push((format!("Z{n}"), FiniteGroupoid::from_group(&FiniteGroup::cyclic(n))));
    }
    out.push(("S3".into(), FiniteGroupoid::from_group(&FiniteGroup::symmetric3())));
    out.push(("pair(2)xZ2".into(), FiniteGroupoid::transitive(2, &FiniteGroup::cyclic(2)).unwrap()));
    out.push(("pair(3)xZ2".into(), FiniteGroupoid::transitive(3, &FiniteGroup::cyclic(2)).unwrap()));
    out.push(("pair(2)xS3".into(), FiniteGroupoid::transitive(2, &FiniteGroup::symmetric3()).unwrap()));
    out.push(("pair(4)xV4".into(), FiniteGroupoid::transitive(4, &FiniteGroup::klein()).unwrap()));
    out
}

/// Result of scanning every tuple of one axiom in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleCheck {
    pub axiom: Axiom,
    pub first: Option<Vec<usize>>,
    pub count: usize,
}

struct Scan {
    axiom: Axiom,
    first: Option<Vec<usize>>,
    count: usize,
}

impl Scan {
    fn new(axiom: Axiom) -> Self {
        Scan { axiom, first: None, count: 0 }
    }

    fn hit(&mut self, t: &[usize]) {
        if self.first.is_none() {
            self.first = Some(t.to_vec());
        }
        self.count += 1;
    }

    fn done(self) -> OracleCheck {
        OracleCheck { axiom: self.axiom, first: self.first, count: self.count }
    }
}

/// Brute-force axiom scan straight from the definitions.
pub fn axiom_oracle(g: &FiniteGroupoid) -> Vec<OracleCheck> {
    let k = g.order();
    let r = |x| g.target(x);
    let s = |x| g.source(x);
    let inv = |x| g.inverse(x);
    let m = |a, b| g.compose(a, b);

    let mut units = Scan::new(Axiom::Units);
    let mut b_ax = Scan::new(Axiom::B);
    let mut c_ax = Scan::new(Axiom::C);
    let mut e_ax = Scan::new(Axiom::E);
    let mut invol = Scan::new(Axiom::Involution);
    for x in 0..k {
        if !g.is_unit(r(x)) || !g.is_unit(s(x)) {
            units.hit(&[x]);
        }
        if g.is_unit(x) && !(r(x) == x && s(x) == x) {
            b_ax.hit(&[x]);
        }
        if m(r(x), x) != Some(x) || m(x, s(x)) != Some(x) {
            c_ax.hit(&[x]);
        }
        if m(x, inv(x)) != Some(r(x)) || m(inv(x), x) != Some(s(x)) {
            e_ax.hit(&[x]);
        }
        if inv(inv(x)) != x {
            invol.hit(&[x]);
        }
    }

    let mut domain = Scan::new(Axiom::Domain);
    let mut a_ax = Scan::new(Axiom::A);
    let mut cancel = Scan::new(Axiom::Cancellation);
    for a in 0..k {
        for b in 0..k {
            if m(a, b).is_some() != (s(a) == r(b)) {
                domain.hit(&[a, b]);
            }
            if let Some(ab) = m(a, b) {
                if r(ab) != r(a) || s(ab) != s(b) {
                    a_ax.hit(&[a, b]);
                }
            }
            // a plays γ, b plays γ'
            let right = s(b) != r(a) || m(b, a).and_then(|x| m(x, inv(a))) == Some(b);
            let left = s(a) != r(b) || m(a, b).and_then(|x| m(inv(a), x)) == Some(b);
            if !(right && left) {
                cancel.hit(&[a, b]);
            }
        }
    }

    let mut d_ax = Scan::new(Axiom::D);
    for a in 0..k {
        for b in 0..k {
            for cc in 0..k {
                let lhs = m(a, b).and_then(|ab| m(ab, cc));
                let rhs = m(b, cc).and_then(|bc| m(a, bc));
                if lhs != rhs {
                    d_ax.hit(&[a, b, cc]);
                }
            }
        }
    }

    vec![
        units.done(),
        domain.done(),
        a_ax.done(),
        b_ax.done(),
        c_ax.done(),
        d_ax.done(),
        e_ax.done(),
        cancel.done(),
        invol.done(),
    ]
}

/// Orbits by flood fill over the arrows.
pub fn orbit_oracle(g: &FiniteGroupoid) -> Vec<Vec<usize>> {
    let units = g.units().to_vec();
    let mut label: Vec<Option<usize>> = vec![None; units.len()];
    let pos = |u: usize| units.iter().position(|&v| v == u).unwrap();
    let mut next = 0;
    for start in 0..units.len() {
        if label[start].is_some() {
            continue;
        }
        label[start] = Some(next);
        let mut changed = true;
        while changed {
            changed = false;
            for x in 0..g.order() {
                let (i, j) = (pos(g.target(x)), pos(g.source(x)));
                if label[i] == Some(next) && label[j].is_none() {
                    label[j] = Some(next);
                    changed = true;
                }
                if label[j] == Some(next) && label[i].is_none() {
                    label[i] = Some(next);
                    changed = true;
                }
            }
        }
        next += 1;
    }
    let mut out = vec![Vec::new(); next];
    for (i, l) in label.iter().enumerate() {
        out[l.unwrap()].push(units[i]);
    }
    for o in out.iter_mut() {
        o.sort_unstable();
    }
    out.sort();
    out
}

pub fn random_complex(rng: &mut ChaCha8Rng, len: usize) -> Vec<C64> {
    (0..len).map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect()
}

pub fn random_integer(rng: &mut ChaCha8Rng, len: usize) -> Vec<C64> {
    (0..len)
        .map(|_| c(rng.random_range(-5..=5) as f64, rng.random_range(-5..=5) as f64))
        .collect()
}

pub fn random_matrix(rng: &mut ChaCha8Rng, dim: usize) -> OperatorMatrix {
    let v = random_complex(rng, dim * dim);
    OperatorMatrix::from_fn(dim, dim, |i, k| v[i * dim + k])
}

/// Plain triple-loop product.
pub fn matmul(a: &OperatorMatrix, b: &OperatorMatrix) -> OperatorMatrix {
    let n = a.nrows();
    OperatorMatrix::from_fn(n, b.ncols(), |i, k| (0..a.ncols()).map(|j| a[(i, j)] * b[(j, k)]).sum())
}

pub fn max_diff(a: &[C64], b: &[C64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
