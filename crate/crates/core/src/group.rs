//! Finite groups given by their multiplication tables.

use crate::error::{Error, Result};
use crate::linalg::{C64, ZERO};

/// A finite group stored as a dense Cayley table over `0..order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
    name: String,
}

impl FiniteGroup {
    /// Builds a group from a Cayley table, checking closure, associativity,
    /// identity and inverses.
    pub fn from_table(order: usize, table: Vec<usize>, name: impl Into<String>) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidGroup("empty group".into()));
        }
        if table.len() != order * order {
            return Err(Error::InvalidGroup(format!(
                "table has {} entries, expected {}",
                table.len(),
                order * order
            )));
        }
        if let Some(bad) = table.iter().find(|&&x| x >= order) {
            return Err(Error::InvalidGroup(format!("entry {bad} out of range")));
        }
        let mul = |a: usize, b: usize| table[a * order + b];
        let identity = (0..order)
            .find(|&e| (0..order).all(|g| mul(e, g) == g && mul(g, e) == g))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        for a in 0..order {
            for b in 0..order {
                for c in 0..order {
                    if mul(mul(a, b), c) != mul(a, mul(b, c)) {
                        return Err(Error::InvalidGroup(format!(
                            "associativity fails at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let mut inverse = Vec::with_capacity(order);
        for g in 0..order {
            let inv = (0..order)
                .find(|&h| mul(g, h) == identity && mul(h, g) == identity)
                .ok_or_else(|| Error::InvalidGroup(format!("element {g} has no inverse")))?;
            inverse.push(inv);
        }
        Ok(FiniteGroup {
            order,
            table,
            identity,
            inverse,
            name: name.into(),
        })
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// Z_n with addition mod n.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1, "cyclic group needs n >= 1");
        let table = (0..n * n).map(|i| (i / n + i % n) % n).collect();
        let inverse = (0..n).map(|g| (n - g) % n).collect();
        FiniteGroup {
            order: n,
            table,
            identity: 0,
            inverse,
            name: format!("Z{n}"),
        }
    }

    /// Klein four-group Z2 x Z2.
    pub fn klein() -> Self {
        let table = (0..16).map(|i| (i / 4) ^ (i % 4)).collect();
        FiniteGroup {
            order: 4,
            table,
            identity: 0,
            inverse: vec![0, 1, 2, 3],
            name: "V4".into(),
        }
    }

    /// Symmetric group S3 acting on three letters, elements in lexicographic
    /// order of their permutation images.
    pub fn symmetric3() -> Self {
        let perms: [[usize; 3]; 6] = [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        let index = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        let mut table = Vec::with_capacity(36);
        for a in &perms {
            for b in &perms {
                // (a b)(x) = a(b(x))
                table.push(index([a[b[0]], a[b[1]], a[b[2]]]));
            }
        }
        FiniteGroup::from_table(6, table, "S3").expect("S3 table is a group")
    }

    /// Parses `Z<n>`, `V4`, `S3` or `1`.
    pub fn parse(name: &str) -> Result<Self> {
        let trimmed = name.trim();
        match trimmed {
            "1" | "trivial" => Ok(Self::trivial()),
            "V4" | "Klein" | "klein" => Ok(Self::klein()),
            "S3" => Ok(Self::symmetric3()),
            _ => {
                let n = trimmed
                    .strip_prefix('Z')
                    .or_else(|| trimmed.strip_prefix('z'))
                    .and_then(|rest| rest.parse::<usize>().ok())
                    .filter(|&n| n >= 1)
                    .ok_or_else(|| Error::Parse(format!("unknown group '{name}'")))?;
                Ok(Self::cyclic(n))
            }
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn inv(&self, g: usize) -> usize {
        self.inverse[g]
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Group-algebra product `(a * b)(g) = sum_{h h' = g} a(h) b(h')`.
    pub fn convolve(&self, a: &[C64], b: &[C64]) -> Vec<C64> {
        let mut out = vec![ZERO; self.order];
        for (h, &ah) in a.iter().enumerate() {
            if ah == ZERO {
                continue;
            }
            for (k, &bk) in b.iter().enumerate() {
                out[self.mul(h, k)] += ah * bk;
            }
        }
        out
    }
}
