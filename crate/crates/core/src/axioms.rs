//! Exhaustive checks of the groupoid axioms with minimal witnesses.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::groupoid::FiniteGroupoid;

/// One checked law.
///
/// `A` to `E` follow the usual lettering: products keep the outer
/// endpoints, units are fixed by `r` and `s`, `r(γ)` and `s(γ)` act as
/// identities, associativity, and two-sided inverses. `Units` and `Domain`
/// are the structural requirements that `r`, `s` land in the units and that
/// composition is defined exactly on `s(a) = r(b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Axiom {
    Units,
    Domain,
    A,
    B,
    C,
    D,
    E,
    Cancellation,
    Involution,
}

impl Axiom {
    pub const ALL: [Axiom; 9] = [
        Axiom::Units,
        Axiom::Domain,
        Axiom::A,
        Axiom::B,
        Axiom::C,
        Axiom::D,
        Axiom::E,
        Axiom::Cancellation,
        Axiom::Involution,
    ];

    /// Number of elements in a witness tuple.
    pub fn arity(self) -> usize {
        match self {
            Axiom::Units | Axiom::B | Axiom::C | Axiom::E | Axiom::Involution => 1,
            Axiom::Domain | Axiom::A | Axiom::Cancellation => 2,
            Axiom::D => 3,
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Axiom::Units => "r and s land in the units",
            Axiom::Domain => "a∘b defined iff s(a) = r(b)",
            Axiom::A => "r(a∘b) = r(a), s(a∘b) = s(b)",
            Axiom::B => "r(u) = s(u) = u on units",
            Axiom::C => "r(γ)∘γ = γ = γ∘s(γ)",
            Axiom::D => "(a∘b)∘c = a∘(b∘c)",
            Axiom::E => "γ∘γ⁻¹ = r(γ), γ⁻¹∘γ = s(γ)",
            Axiom::Cancellation => "(γ'∘γ)∘γ⁻¹ = γ', γ⁻¹∘(γ∘γ') = γ'",
            Axiom::Involution => "(γ⁻¹)⁻¹ = γ",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Axiom::Units => "units",
            Axiom::Domain => "domain",
            Axiom::A => "a",
            Axiom::B => "b",
            Axiom::C => "c",
            Axiom::D => "d",
            Axiom::E => "e",
            Axiom::Cancellation => "cancellation",
            Axiom::Involution => "involution",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomCheck {
    pub axiom: Axiom,
    pub passed: bool,
    /// Lexicographically smallest violating tuple, if any.
    pub witness: Option<Vec<usize>>,
    /// Number of violating tuples found.
    pub violations: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub order: usize,
    pub checks: Vec<AxiomCheck>,
    /// Number of sampled triples when associativity was not scanned
    /// exhaustively.
    pub sampled_associativity: Option<usize>,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AxiomCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn get(&self, axiom: Axiom) -> &AxiomCheck {
        self.checks
            .iter()
            .find(|c| c.axiom == axiom)
            .expect("every axiom is checked")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValidationOptions {
    /// Largest order scanned exhaustively for associativity.
    pub exhaustive_limit: usize,
    /// Random triples drawn above the limit.
    pub samples: usize,
    pub seed: u64,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        ValidationOptions {
            exhaustive_limit: 4096,
            samples: 1 << 20,
            seed: 0,
        }
    }
}

#[derive(Default)]
struct Tally {
    witness: Option<Vec<usize>>,
    violations: usize,
}

impl Tally {
    fn record(&mut self, tuple: &[usize]) {
        self.violations += 1;
        match &self.witness {
            Some(w) if w.as_slice() <= tuple => {}
            _ => self.witness = Some(tuple.to_vec()),
        }
    }

    fn finish(self, axiom: Axiom) -> AxiomCheck {
        AxiomCheck {
            axiom,
            passed: self.violations == 0,
            witness: self.witness,
            violations: self.violations,
        }
    }
}

/// Checks every law and reports all failures with minimal witnesses.
pub fn validate_axioms(g: &FiniteGroupoid, options: &ValidationOptions) -> AxiomReport {
    let k = g.order();
    let r = |x: usize| g.target(x);
    let s = |x: usize| g.source(x);
    let inv = |x: usize| g.inverse(x);
    let c = |a: usize, b: usize| g.compose(a, b);

    let mut units = Tally::default();
    let mut domain = Tally::default();
    let mut ax_a = Tally::default();
    let mut ax_b = Tally::default();
    let mut ax_c = Tally::default();
    let mut ax_e = Tally::default();
    let mut cancel = Tally::default();
    let mut involution = Tally::default();

    for x in 0..k {
        if !g.is_unit(r(x)) || !g.is_unit(s(x)) {
            units.record(&[x]);
        }
        if g.is_unit(x) && (r(x) != x || s(x) != x) {
            ax_b.record(&[x]);
        }
        if c(r(x), x) != Some(x) || c(x, s(x)) != Some(x) {
            ax_c.record(&[x]);
        }
        if c(x, inv(x)) != Some(r(x)) || c(inv(x), x) != Some(s(x)) {
            ax_e.record(&[x]);
        }
        if inv(inv(x)) != x {
            involution.record(&[x]);
        }
    }

    for a in 0..k {
        for b in 0..k {
            if c(a, b).is_some() != (s(a) == r(b)) {
                domain.record(&[a, b]);
            }
        }
    }

    for &[a, b, ab] in g.triples() {
        let (a, b, ab) = (a as usize, b as usize, ab as usize);
        if r(ab) != r(a) || s(ab) != s(b) {
            ax_a.record(&[a, b]);
        }
    }

    for gamma in 0..k {
        let gi = inv(gamma);
        for other in 0..k {
            let right_ok = s(other) != r(gamma)
                || c(other, gamma).and_then(|x| c(x, gi)) == Some(other);
            let left_ok = s(gamma) != r(other)
                || c(gamma, other).and_then(|x| c(gi, x)) == Some(other);
            if !right_ok || !left_ok {
                cancel.record(&[gamma, other]);
            }
        }
    }

    let (ax_d, sampled) = associativity(g, options);

    AxiomReport {
        order: k,
        checks: vec![
            units.finish(Axiom::Units),
            domain.finish(Axiom::Domain),
            ax_a.finish(Axiom::A),
            ax_b.finish(Axiom::B),
            ax_c.finish(Axiom::C),
            ax_d.finish(Axiom::D),
            ax_e.finish(Axiom::E),
            cancel.finish(Axiom::Cancellation),
            involution.finish(Axiom::Involution),
        ],
        sampled_associativity: sampled,
    }
}

fn associativity(g: &FiniteGroupoid, options: &ValidationOptions) -> (Tally, Option<usize>) {
    let k = g.order();
    let mut rows: Vec<Vec<usize>> = vec![Vec::new(); k];
    let mut cols: Vec<Vec<usize>> = vec![Vec::new(); k];
    for &[a, b, _] in g.triples() {
        rows[a as usize].push(b as usize);
        cols[b as usize].push(a as usize);
    }
    let lhs = |a: usize, b: usize, c: usize| g.compose(a, b).and_then(|ab| g.compose(ab, c));
    let rhs = |a: usize, b: usize, c: usize| g.compose(b, c).and_then(|bc| g.compose(a, bc));
    let mut tally = Tally::default();

    if k <= options.exhaustive_limit {
        // every violating triple has (a, b) defined, or (b, c) and (a, b∘c) defined
        let mut candidates: Vec<usize> = Vec::new();
        for &[a, b, ab] in g.triples() {
            let (a, b, ab) = (a as usize, b as usize, ab as usize);
            candidates.clear();
            candidates.extend_from_slice(&rows[ab]);
            candidates.extend_from_slice(&rows[b]);
            candidates.sort_unstable();
            candidates.dedup();
            for &c in &candidates {
                if lhs(a, b, c) != rhs(a, b, c) {
                    tally.record(&[a, b, c]);
                }
            }
        }
        for &[b, c, bc] in g.triples() {
            let (b, c, bc) = (b as usize, c as usize, bc as usize);
            for &a in &cols[bc] {
                if g.compose(a, b).is_none() {
                    tally.record(&[a, b, c]);
                }
            }
        }
        (tally, None)
    } else {
        let triples = g.triples();
        let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
        let mut drawn = 0;
        if !triples.is_empty() {
            for _ in 0..options.samples {
                let [a, b, ab] = triples[rng.random_range(0..triples.len())];
                let (a, b, ab) = (a as usize, b as usize, ab as usize);
                let pool = rows[ab].len() + rows[b].len();
                if pool == 0 {
                    continue;
                }
                let pick = rng.random_range(0..pool);
                let c = if pick < rows[ab].len() {
                    rows[ab][pick]
                } else {
                    rows[b][pick - rows[ab].len()]
                };
                drawn += 1;
                if lhs(a, b, c) != rhs(a, b, c) {
                    tally.record(&[a, b, c]);
                }
            }
        }
        (tally, Some(drawn))
    }
}
