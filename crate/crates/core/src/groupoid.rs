//! Finite groupoids with an explicit partial composition table.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use crate::axioms::{validate_axioms, AxiomReport, ValidationOptions};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;

/// Marker for an undefined composition in the dense table.
pub const UNDEFINED: u32 = u32::MAX;

/// Index of an element inside one groupoid.
pub type ElementId = usize;

/// A finite groupoid with units stored as a subset of its elements.
///
/// The composition table is dense (`order * order` entries) with
/// [`UNDEFINED`] for pairs that do not compose. Construction only checks
/// that indices are in range; the groupoid axioms are checked lazily and
/// cached.
#[derive(Debug)]
pub struct FiniteGroupoid {
    order: usize,
    units: Vec<ElementId>,
    is_unit: Vec<bool>,
    source: Vec<ElementId>,
    target: Vec<ElementId>,
    inverse: Vec<ElementId>,
    table: Vec<u32>,
    triples: Vec<[u32; 3]>,
    valid: OnceLock<bool>,
}

impl Clone for FiniteGroupoid {
    fn clone(&self) -> Self {
        FiniteGroupoid {
            order: self.order,
            units: self.units.clone(),
            is_unit: self.is_unit.clone(),
            source: self.source.clone(),
            target: self.target.clone(),
            inverse: self.inverse.clone(),
            table: self.table.clone(),
            triples: self.triples.clone(),
            valid: self.valid.get().map(|&v| OnceLock::from(v)).unwrap_or_default(),
        }
    }
}

impl PartialEq for FiniteGroupoid {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order
            && self.units == other.units
            && self.source == other.source
            && self.target == other.target
            && self.inverse == other.inverse
            && self.table == other.table
    }
}

impl Eq for FiniteGroupoid {}

/// An equivalence class of units.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    pub members: Vec<ElementId>,
}

/// The group of loops at one unit, with its table in local indices.
#[derive(Debug, Clone)]
pub struct IsotropyGroup {
    pub base_unit: ElementId,
    /// Sorted element ids; position in this list is the local index.
    pub members: Vec<ElementId>,
    pub group_table: FiniteGroup,
}

impl IsotropyGroup {
    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn local_index(&self, gamma: ElementId) -> Option<usize> {
        self.members.binary_search(&gamma).ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    pub principal: bool,
    pub transitive: bool,
}

/// All elements from `u0` to `u1`, i.e. with `s = u0` and `r = u1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectingCoset {
    pub from: ElementId,
    pub to: ElementId,
    pub members: Vec<ElementId>,
    pub connected: bool,
}

impl FiniteGroupoid {
    /// Assembles a groupoid from raw maps and the list of defined triples
    /// `(a, b, a∘b)`. Only index ranges and duplicate entries are checked.
    pub fn from_parts(
        order: usize,
        units: Vec<ElementId>,
        source: Vec<ElementId>,
        target: Vec<ElementId>,
        inverse: Vec<ElementId>,
        compose: &[[usize; 3]],
    ) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidSize("groupoid order must be at least 1".into()));
        }
        if order >= UNDEFINED as usize {
            return Err(Error::InvalidSize(format!("order {order} too large")));
        }
        for (name, map) in [("source", &source), ("target", &target), ("inverse", &inverse)] {
            if map.len() != order {
                return Err(Error::Malformed(format!(
                    "{name} has {} entries, expected {order}",
                    map.len()
                )));
            }
            if let Some(&bad) = map.iter().find(|&&x| x >= order) {
                return Err(Error::ElementOutOfRange { index: bad, order });
            }
        }
        let mut is_unit = vec![false; order];
        for &u in &units {
            if u >= order {
                return Err(Error::ElementOutOfRange { index: u, order });
            }
            if is_unit[u] {
                return Err(Error::Malformed(format!("unit {u} listed twice")));
            }
            is_unit[u] = true;
        }
        let mut table = vec![UNDEFINED; order * order];
        for &[a, b, c] in compose {
            for x in [a, b, c] {
                if x >= order {
                    return Err(Error::ElementOutOfRange { index: x, order });
                }
            }
            let slot = &mut table[a * order + b];
            if *slot != UNDEFINED {
                return Err(Error::Malformed(format!("composition ({a}, {b}) listed twice")));
            }
            *slot = c as u32;
        }
        let units = (0..order).filter(|&u| is_unit[u]).collect();
        Ok(Self::assemble(order, units, is_unit, source, target, inverse, table))
    }

    fn assemble(
        order: usize,
        units: Vec<ElementId>,
        is_unit: Vec<bool>,
        source: Vec<ElementId>,
        target: Vec<ElementId>,
        inverse: Vec<ElementId>,
        table: Vec<u32>,
    ) -> Self {
        let triples = table
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != UNDEFINED)
            .map(|(idx, &c)| [(idx / order) as u32, (idx % order) as u32, c])
            .collect();
        FiniteGroupoid {
            order,
            units,
            is_unit,
            source,
            target,
            inverse,
            table,
            triples,
            valid: OnceLock::new(),
        }
    }

    /// Builds a groupoid from maps and a composition rule, defining
    /// `a∘b` exactly when `s(a) = r(b)`.
    fn from_rule<F>(
        order: usize,
        units: Vec<ElementId>,
        source: Vec<ElementId>,
        target: Vec<ElementId>,
        inverse: Vec<ElementId>,
        rule: F,
    ) -> Self
    where
        F: Fn(ElementId, ElementId) -> ElementId,
    {
        let mut is_unit = vec![false; order];
        for &u in &units {
            is_unit[u] = true;
        }
        let mut table = vec![UNDEFINED; order * order];
        for a in 0..order {
            for b in 0..order {
                if source[a] == target[b] {
                    table[a * order + b] = rule(a, b) as u32;
                }
            }
        }
        Self::assemble(order, units, is_unit, source, target, inverse, table)
    }

    /// The pair groupoid on `n` points; element `(i, k)` has index `i * n + k`.
    pub fn pair(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSize("pair groupoid needs n >= 1".into()));
        }
        let order = n * n;
        let units = (0..n).map(|i| i * n + i).collect();
        let target = (0..order).map(|g| (g / n) * n + g / n).collect();
        let source = (0..order).map(|g| (g % n) * n + g % n).collect();
        let inverse = (0..order).map(|g| (g % n) * n + g / n).collect();
        Ok(Self::from_rule(order, units, source, target, inverse, |a, b| {
            (a / n) * n + b % n
        }))
    }

    /// A group seen as a groupoid with a single unit.
    pub fn from_group(group: &FiniteGroup) -> Self {
        let order = group.order();
        let e = group.identity();
        Self::from_rule(
            order,
            vec![e],
            vec![e; order],
            vec![e; order],
            (0..order).map(|g| group.inv(g)).collect(),
            |a, b| group.mul(a, b),
        )
    }

    /// Action groupoid of a right action `x^g = act(x, g)` on `n_points`
    /// points. Element `(x, g)` has index `x * |G| + g`.
    pub fn action<F>(group: &FiniteGroup, n_points: usize, act: F) -> Result<Self>
    where
        F: Fn(usize, usize) -> usize,
    {
        if n_points == 0 {
            return Err(Error::InvalidSize("action groupoid needs at least one point".into()));
        }
        let m = group.order();
        let e = group.identity();
        let mut image = vec![0usize; n_points * m];
        for x in 0..n_points {
            for g in 0..m {
                let y = act(x, g);
                if y >= n_points {
                    return Err(Error::InvalidAction {
                        law: "closure",
                        witness: format!("x = {x}, g = {g} maps to {y}"),
                    });
                }
                image[x * m + g] = y;
            }
        }
        for x in 0..n_points {
            if image[x * m + e] != x {
                return Err(Error::InvalidAction {
                    law: "identity",
                    witness: format!("x = {x}"),
                });
            }
        }
        for x in 0..n_points {
            for g in 0..m {
                for h in 0..m {
                    if image[image[x * m + g] * m + h] != image[x * m + group.mul(g, h)] {
                        return Err(Error::InvalidAction {
                            law: "compatibility",
                            witness: format!("x = {x}, g = {g}, h = {h}"),
                        });
                    }
                }
            }
        }
        let order = n_points * m;
        let units = (0..n_points).map(|x| x * m + e).collect();
        let target = (0..order).map(|a| (a / m) * m + e).collect();
        let source = (0..order).map(|a| image[a] * m + e).collect();
        let inverse = (0..order)
            .map(|a| image[a] * m + group.inv(a % m))
            .collect();
        Ok(Self::from_rule(order, units, source, target, inverse, |a, b| {
            (a / m) * m + group.mul(a % m, b % m)
        }))
    }

    /// Action groupoid from a table `table[x * |G| + g] = x^g`.
    pub fn action_from_table(group: &FiniteGroup, n_points: usize, table: &[usize]) -> Result<Self> {
        if table.len() != n_points * group.order() {
            return Err(Error::DimensionMismatch {
                expected: n_points * group.order(),
                actual: table.len(),
            });
        }
        Self::action(group, n_points, |x, g| table[x * group.order() + g])
    }

    /// Transitive groupoid `pair(n) × H`; element `(i, j, h)` has index
    /// `(i * n + j) * |H| + h`.
    pub fn transitive(n: usize, isotropy: &FiniteGroup) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSize("transitive groupoid needs n >= 1".into()));
        }
        let m = isotropy.order();
        let e = isotropy.identity();
        let order = n * n * m;
        let split = |a: usize| (a / m / n, (a / m) % n, a % m);
        let index = |i: usize, j: usize, h: usize| (i * n + j) * m + h;
        let units = (0..n).map(|i| index(i, i, e)).collect();
        let target = (0..order).map(|a| { let (i, _, _) = split(a); index(i, i, e) }).collect();
        let source = (0..order).map(|a| { let (_, j, _) = split(a); index(j, j, e) }).collect();
        let inverse = (0..order)
            .map(|a| {
                let (i, j, h) = split(a);
                index(j, i, isotropy.inv(h))
            })
            .collect();
        Ok(Self::from_rule(order, units, source, target, inverse, |a, b| {
            let (i, _, h) = split(a);
            let (_, k, h2) = split(b);
            index(i, k, isotropy.mul(h, h2))
        }))
    }

    /// Index-shifted union; parts never compose with each other.
    pub fn disjoint_union(parts: &[FiniteGroupoid]) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::Empty("disjoint union of no groupoids"));
        }
        let order: usize = parts.iter().map(|p| p.order).sum();
        let mut units = Vec::new();
        let mut source = Vec::with_capacity(order);
        let mut target = Vec::with_capacity(order);
        let mut inverse = Vec::with_capacity(order);
        let mut compose = Vec::new();
        let mut offset = 0;
        for p in parts {
            units.extend(p.units.iter().map(|u| u + offset));
            source.extend(p.source.iter().map(|x| x + offset));
            target.extend(p.target.iter().map(|x| x + offset));
            inverse.extend(p.inverse.iter().map(|x| x + offset));
            compose.extend(p.triples.iter().map(|&[a, b, c]| {
                [a as usize + offset, b as usize + offset, c as usize + offset]
            }));
            offset += p.order;
        }
        Self::from_parts(order, units, source, target, inverse, &compose)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn units(&self) -> &[ElementId] {
        &self.units
    }

    pub fn is_unit(&self, gamma: ElementId) -> bool {
        self.is_unit.get(gamma).copied().unwrap_or(false)
    }

    pub fn source(&self, gamma: ElementId) -> ElementId {
        self.source[gamma]
    }

    pub fn target(&self, gamma: ElementId) -> ElementId {
        self.target[gamma]
    }

    pub fn inverse(&self, gamma: ElementId) -> ElementId {
        self.inverse[gamma]
    }

    pub fn sources(&self) -> &[ElementId] {
        &self.source
    }

    pub fn targets(&self) -> &[ElementId] {
        &self.target
    }

    pub fn inverses(&self) -> &[ElementId] {
        &self.inverse
    }

    pub fn compose(&self, a: ElementId, b: ElementId) -> Option<ElementId> {
        match self.table[a * self.order + b] {
            UNDEFINED => None,
            c => Some(c as usize),
        }
    }

    /// Defined triples `(a, b, a∘b)` in lexicographic order of `(a, b)`.
    pub fn triples(&self) -> &[[u32; 3]] {
        &self.triples
    }

    pub fn check_element(&self, gamma: ElementId) -> Result<()> {
        if gamma < self.order {
            Ok(())
        } else {
            Err(Error::ElementOutOfRange { index: gamma, order: self.order })
        }
    }

    /// The outer view: position of each unit in [`units`](Self::units),
    /// i.e. the base point that `r` and `s` land on.
    pub fn base_point(&self, unit: ElementId) -> Option<usize> {
        self.units.binary_search(&unit).ok()
    }

    /// `(r(γ), s(γ))` as base points.
    pub fn anchor(&self, gamma: ElementId) -> Option<(usize, usize)> {
        Some((self.base_point(self.target[gamma])?, self.base_point(self.source[gamma])?))
    }

    pub fn validate(&self) -> AxiomReport {
        validate_axioms(self, &ValidationOptions::default())
    }

    /// Whether all axioms hold. Computed once and cached.
    pub fn is_valid(&self) -> bool {
        *self.valid.get_or_init(|| self.validate().all_pass())
    }

    pub fn require_valid(&self) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            let report = self.validate();
            let failed: Vec<String> = report
                .failures()
                .map(|c| format!("{} at {:?}", c.axiom, c.witness.as_deref().unwrap_or(&[])))
                .collect();
            Err(Error::InvalidGroupoid(failed.join("; ")))
        }
    }

    /// Copy with the composition of `(a, b)` set to `value` (`None` makes it
    /// undefined).
    pub fn with_composition(&self, a: ElementId, b: ElementId, value: Option<ElementId>) -> Result<Self> {
        self.check_element(a)?;
        self.check_element(b)?;
        let mut table = self.table.clone();
        table[a * self.order + b] = match value {
            Some(c) => {
                self.check_element(c)?;
                c as u32
            }
            None => UNDEFINED,
        };
        Ok(Self::assemble(
            self.order,
            self.units.clone(),
            self.is_unit.clone(),
            self.source.clone(),
            self.target.clone(),
            self.inverse.clone(),
            table,
        ))
    }

    pub fn with_inverse(&self, gamma: ElementId, value: ElementId) -> Result<Self> {
        self.check_element(gamma)?;
        self.check_element(value)?;
        let mut g = self.clone();
        g.inverse[gamma] = value;
        g.valid = OnceLock::new();
        Ok(g)
    }

    pub fn with_source(&self, gamma: ElementId, value: ElementId) -> Result<Self> {
        self.check_element(gamma)?;
        self.check_element(value)?;
        let mut g = self.clone();
        g.source[gamma] = value;
        g.valid = OnceLock::new();
        Ok(g)
    }

    pub fn with_target(&self, gamma: ElementId, value: ElementId) -> Result<Self> {
        self.check_element(gamma)?;
        self.check_element(value)?;
        let mut g = self.clone();
        g.target[gamma] = value;
        g.valid = OnceLock::new();
        Ok(g)
    }

    /// Orbits of the unit set, ordered by smallest member.
    pub fn orbits(&self) -> Result<Vec<Orbit>> {
        self.require_valid()?;
        let mut parent: Vec<usize> = (0..self.order).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for gamma in 0..self.order {
            let a = find(&mut parent, self.target[gamma]);
            let b = find(&mut parent, self.source[gamma]);
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut orbits: Vec<Orbit> = Vec::new();
        let mut slot = vec![usize::MAX; self.order];
        for &u in &self.units {
            let root = find(&mut parent, u);
            if slot[root] == usize::MAX {
                slot[root] = orbits.len();
                orbits.push(Orbit { members: Vec::new() });
            }
            orbits[slot[root]].members.push(u);
        }
        Ok(orbits)
    }

    /// Restriction to the elements over one orbit, re-indexed in increasing
    /// order. Returns the subgroupoid and the original ids of its elements.
    pub fn restrict_to_orbit(&self, orbit: &Orbit) -> Result<(FiniteGroupoid, Vec<ElementId>)> {
        let members: BTreeSet<ElementId> = orbit.members.iter().copied().collect();
        let elements: Vec<ElementId> = (0..self.order)
            .filter(|&g| members.contains(&self.target[g]))
            .collect();
        let mut local = vec![usize::MAX; self.order];
        for (i, &g) in elements.iter().enumerate() {
            local[g] = i;
        }
        let map = |v: &[ElementId]| elements.iter().map(|&g| local[v[g]]).collect::<Vec<_>>();
        let compose: Vec<[usize; 3]> = self
            .triples
            .iter()
            .filter(|t| local[t[0] as usize] != usize::MAX)
            .map(|&[a, b, c]| [local[a as usize], local[b as usize], local[c as usize]])
            .collect();
        let sub = FiniteGroupoid::from_parts(
            elements.len(),
            orbit.members.iter().map(|&u| local[u]).collect(),
            map(&self.source),
            map(&self.target),
            map(&self.inverse),
            &compose,
        )?;
        Ok((sub, elements))
    }

    pub fn isotropy_group(&self, unit: ElementId) -> Result<IsotropyGroup> {
        self.check_element(unit)?;
        if !self.is_unit(unit) {
            return Err(Error::NotAUnit(unit));
        }
        self.require_valid()?;
        let members: Vec<ElementId> = (0..self.order)
            .filter(|&g| self.source[g] == unit && self.target[g] == unit)
            .collect();
        let k = members.len();
        let mut table = Vec::with_capacity(k * k);
        for &a in &members {
            for &b in &members {
                let c = self.compose(a, b).ok_or_else(|| {
                    Error::InvalidGroupoid(format!("isotropy elements {a}, {b} do not compose"))
                })?;
                let local = members.binary_search(&c).map_err(|_| {
                    Error::InvalidGroupoid(format!("isotropy product {c} leaves the group"))
                })?;
                table.push(local);
            }
        }
        let group_table = FiniteGroup::from_table(k, table, format!("H({unit})"))?;
        Ok(IsotropyGroup { base_unit: unit, members, group_table })
    }

    /// Conjugation `h ↦ γ∘h∘γ⁻¹` from the isotropy group at `s(γ)` to the one
    /// at `r(γ)`, as a local-index map. Checked to be a group isomorphism.
    pub fn conjugation_isomorphism(&self, gamma: ElementId) -> Result<Vec<usize>> {
        self.check_element(gamma)?;
        let from = self.isotropy_group(self.source[gamma])?;
        let to = self.isotropy_group(self.target[gamma])?;
        if from.order() != to.order() {
            return Err(Error::InvalidGroupoid("isotropy orders differ within an orbit".into()));
        }
        let inv = self.inverse[gamma];
        let mut map = Vec::with_capacity(from.order());
        for &h in &from.members {
            let img = self
                .compose(gamma, h)
                .and_then(|gh| self.compose(gh, inv))
                .and_then(|c| to.local_index(c))
                .ok_or_else(|| Error::InvalidGroupoid(format!("conjugation of {h} by {gamma} failed")))?;
            map.push(img);
        }
        let mut seen = vec![false; to.order()];
        for &m in &map {
            if std::mem::replace(&mut seen[m], true) {
                return Err(Error::InvalidGroupoid("conjugation is not injective".into()));
            }
        }
        let g0 = &from.group_table;
        let g1 = &to.group_table;
        for a in 0..from.order() {
            for b in 0..from.order() {
                if map[g0.mul(a, b)] != g1.mul(map[a], map[b]) {
                    return Err(Error::InvalidGroupoid("conjugation is not a homomorphism".into()));
                }
            }
        }
        Ok(map)
    }

    /// Whether `(r, s)` is injective and surjective onto units × units.
    pub fn classify(&self) -> Classification {
        let k = self.units.len();
        let mut hits = vec![0usize; k * k];
        let mut principal = true;
        for g in 0..self.order {
            match self.anchor(g) {
                Some((r, s)) => {
                    hits[r * k + s] += 1;
                    if hits[r * k + s] > 1 {
                        principal = false;
                    }
                }
                None => principal = false,
            }
        }
        Classification {
            principal,
            transitive: hits.iter().all(|&h| h > 0),
        }
    }

    /// All elements from `u0` to `u1`.
    pub fn connecting_coset(&self, u0: ElementId, u1: ElementId) -> Result<ConnectingCoset> {
        for u in [u0, u1] {
            self.check_element(u)?;
            if !self.is_unit(u) {
                return Err(Error::NotAUnit(u));
            }
        }
        let members: Vec<ElementId> = (0..self.order)
            .filter(|&g| self.source[g] == u0 && self.target[g] == u1)
            .collect();
        let connected = !members.is_empty();
        Ok(ConnectingCoset { from: u0, to: u1, members, connected })
    }

    /// Checks that the elements from `u0` to `u1` form both the left coset
    /// `γ H(u0)` and the right coset `H(u1) γ` for every member `γ`.
    pub fn coset_decomposition_holds(&self, u0: ElementId, u1: ElementId) -> Result<bool> {
        let coset = self.connecting_coset(u0, u1)?;
        if !coset.connected {
            return Ok(false);
        }
        let h0 = self.isotropy_group(u0)?;
        let h1 = self.isotropy_group(u1)?;
        let target: BTreeSet<ElementId> = coset.members.iter().copied().collect();
        for &gamma in &coset.members {
            let left: Option<BTreeSet<_>> =
                h0.members.iter().map(|&h| self.compose(gamma, h)).collect();
            let right: Option<BTreeSet<_>> =
                h1.members.iter().map(|&h| self.compose(h, gamma)).collect();
            if left.as_ref() != Some(&target) || right.as_ref() != Some(&target) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
