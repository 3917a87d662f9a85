//! Finite groupoids, their actions on finite sets and on other groupoids.
//!
//! Arrows and units are dense integer ids in input order. Composition is written
//! `compose(g, h) = gh` and is defined exactly when `src(g) == rng(h)`; it means
//! "first `h`, then `g`". The identity arrow of a unit carries the unit's label.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, ValidationReport, Violation};
use crate::group::{FiniteGroup, GroupDescriptor};

/// Sentinel for an undefined entry of a partial map stored as a dense table.
pub const UNDEFINED: usize = usize::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroupoid {
    unit_labels: Vec<String>,
    arrow_labels: Vec<String>,
    src: Vec<usize>,
    rng: Vec<usize>,
    inv: Vec<usize>,
    unit_arrow: Vec<usize>,
    compose: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowDescriptor {
    pub id: String,
    pub src: String,
    pub rng: String,
}

/// An explicit groupoid as read from JSON, before any checking.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawGroupoid {
    pub units: Vec<String>,
    pub arrows: Vec<ArrowDescriptor>,
    #[serde(default)]
    pub compose: Vec<[String; 3]>,
    #[serde(default)]
    pub inv: Vec<[String; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitiveDescriptor {
    pub units: Vec<String>,
    pub group: GroupDescriptor,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupoidDescriptor {
    Transitive { transitive: TransitiveDescriptor },
    Explicit(RawGroupoid),
}

impl GroupoidDescriptor {
    pub fn build(&self) -> Result<FiniteGroupoid> {
        match self {
            GroupoidDescriptor::Explicit(raw) => FiniteGroupoid::from_raw(raw),
            GroupoidDescriptor::Transitive { transitive } => {
                let group = FiniteGroup::from_descriptor(&transitive.group)?;
                build_transitive_groupoid(&transitive.units, &group)
            }
        }
    }

    pub fn validate(&self) -> Result<ValidationReport> {
        match self {
            GroupoidDescriptor::Explicit(raw) => validate_groupoid(raw),
            GroupoidDescriptor::Transitive { transitive } => {
                if transitive.units.is_empty() {
                    return Err(Error::Precondition("transitive groupoid needs at least one unit".into()));
                }
                match FiniteGroup::from_descriptor(&transitive.group) {
                    Ok(_) => Ok(ValidationReport::ok()),
                    Err(Error::Validation(r)) => Ok(r),
                    Err(e) => Err(e),
                }
            }
        }
    }
}

fn index_labels<'a>(labels: impl Iterator<Item = &'a String>, what: &str) -> Result<HashMap<&'a str, usize>> {
    let mut map = HashMap::new();
    for (i, l) in labels.enumerate() {
        if map.insert(l.as_str(), i).is_some() {
            return Err(Error::Structural(format!("duplicate {what} id {l}")));
        }
    }
    Ok(map)
}

fn lookup(map: &HashMap<&str, usize>, id: &str, what: &str) -> Result<usize> {
    map.get(id)
        .copied()
        .ok_or_else(|| Error::Structural(format!("dangling {what} id {id}")))
}

struct Resolved {
    src: Vec<usize>,
    rng: Vec<usize>,
    unit_arrow: Vec<Option<usize>>,
    compose: Vec<usize>,
    inv: Vec<Option<usize>>,
    violations: Vec<Violation>,
}

fn resolve(raw: &RawGroupoid) -> Result<Resolved> {
    let units = index_labels(raw.units.iter(), "unit")?;
    let arrows = index_labels(raw.arrows.iter().map(|a| &a.id), "arrow")?;
    let n = raw.arrows.len();
    let mut src = Vec::with_capacity(n);
    let mut rng = Vec::with_capacity(n);
    for a in &raw.arrows {
        src.push(lookup(&units, &a.src, "unit")?);
        rng.push(lookup(&units, &a.rng, "unit")?);
    }
    let mut violations = Vec::new();
    let unit_arrow = raw.units.iter().map(|u| arrows.get(u.as_str()).copied()).collect();
    let mut compose = vec![UNDEFINED; n * n];
    for [g, h, gh] in &raw.compose {
        let (gi, hi, ghi) = (
            lookup(&arrows, g, "arrow")?,
            lookup(&arrows, h, "arrow")?,
            lookup(&arrows, gh, "arrow")?,
        );
        let slot = &mut compose[gi * n + hi];
        if *slot != UNDEFINED && *slot != ghi {
            violations.push(Violation::new("function", vec![g.clone(), h.clone()]));
        }
        *slot = ghi;
    }
    let mut inv = vec![None; n];
    for [g, gi] in &raw.inv {
        let (a, b) = (lookup(&arrows, g, "arrow")?, lookup(&arrows, gi, "arrow")?);
        if inv[a].is_some_and(|x| x != b) {
            violations.push(Violation::new("function", vec![g.clone()]));
        }
        inv[a] = Some(b);
    }
    Ok(Resolved { src, rng, unit_arrow, compose, inv, violations })
}

/// Check every groupoid axiom on an explicit description.
///
/// Dangling or duplicate ids are reported as `Err(Error::Structural)`; axiom
/// failures are listed in the report, each with a concrete witness.
pub fn validate_groupoid(raw: &RawGroupoid) -> Result<ValidationReport> {
    let r = resolve(raw)?;
    let label = |a: usize| raw.arrows[a].id.clone();
    let n = raw.arrows.len();
    let mut v = r.violations;
    let comp = |g: usize, h: usize| {
        let c = r.compose[g * n + h];
        (c != UNDEFINED).then_some(c)
    };

    for (u, ua) in r.unit_arrow.iter().enumerate() {
        match *ua {
            Some(a) if r.src[a] == u && r.rng[a] == u => {}
            Some(a) => v.push(Violation::new("unit", vec![raw.units[u].clone(), label(a)])),
            None => v.push(Violation::new("unit", vec![raw.units[u].clone()])),
        }
    }
    for g in 0..n {
        for h in 0..n {
            let composable = r.src[g] == r.rng[h];
            match (composable, comp(g, h)) {
                (false, Some(_)) => v.push(Violation::new("composability", vec![label(g), label(h)])),
                (true, None) => v.push(Violation::new("closure", vec![label(g), label(h)])),
                (true, Some(gh)) if r.src[gh] != r.src[h] || r.rng[gh] != r.rng[g] => {
                    v.push(Violation::new("endpoints", vec![label(g), label(h), label(gh)]))
                }
                _ => {}
            }
        }
    }
    for g in 0..n {
        let (s, t) = (r.src[g], r.rng[g]);
        if let (Some(us), Some(ut)) = (r.unit_arrow[s], r.unit_arrow[t]) {
            if comp(ut, g) != Some(g) || comp(g, us) != Some(g) {
                v.push(Violation::new("unit", vec![label(g)]));
            }
        }
        match r.inv[g] {
            None => v.push(Violation::new("inverse", vec![label(g)])),
            Some(gi) => {
                let ok = r.src[gi] == t
                    && r.rng[gi] == s
                    && r.unit_arrow[t].is_some_and(|ut| comp(g, gi) == Some(ut))
                    && r.unit_arrow[s].is_some_and(|us| comp(gi, g) == Some(us));
                if !ok {
                    v.push(Violation::new("inverse", vec![label(g), label(gi)]));
                }
            }
        }
    }
    for f in 0..n {
        for g in 0..n {
            let Some(fg) = comp(f, g) else { continue };
            for h in 0..n {
                let left = comp(fg, h);
                let right = comp(g, h).and_then(|gh| comp(f, gh));
                if (left.is_some() || right.is_some()) && left != right {
                    v.push(Violation::new("associativity", vec![label(f), label(g), label(h)]));
                }
            }
        }
    }
    Ok(ValidationReport::from_violations(v))
}

impl FiniteGroupoid {
    /// Parse and validate an explicit description.
    pub fn from_raw(raw: &RawGroupoid) -> Result<Self> {
        validate_groupoid(raw)?.into_result()?;
        let r = resolve(raw)?;
        Ok(FiniteGroupoid {
            unit_labels: raw.units.clone(),
            arrow_labels: raw.arrows.iter().map(|a| a.id.clone()).collect(),
            src: r.src,
            rng: r.rng,
            inv: r.inv.into_iter().map(|x| x.expect("validated")).collect(),
            unit_arrow: r.unit_arrow.into_iter().map(|x| x.expect("validated")).collect(),
            compose: r.compose,
        })
    }

    /// Assemble a groupoid from a composition rule; inverses are found by search.
    ///
    /// Only the inverse search is checked here, call [`FiniteGroupoid::check_axioms`]
    /// for the full exhaustive validation.
    pub fn from_fn(
        unit_labels: Vec<String>,
        arrow_labels: Vec<String>,
        src: Vec<usize>,
        rng: Vec<usize>,
        unit_arrow: Vec<usize>,
        compose: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        let n = arrow_labels.len();
        let mut table = vec![UNDEFINED; n * n];
        for g in 0..n {
            for h in 0..n {
                if src[g] == rng[h] {
                    table[g * n + h] = compose(g, h);
                }
            }
        }
        let mut inv = vec![UNDEFINED; n];
        for g in 0..n {
            let target = unit_arrow[rng[g]];
            inv[g] = (0..n)
                .find(|&h| rng[h] == src[g] && table[g * n + h] == target)
                .ok_or_else(|| Error::Consistency(format!("arrow {} has no inverse", arrow_labels[g])))?;
        }
        Ok(FiniteGroupoid { unit_labels, arrow_labels, src, rng, inv, unit_arrow, compose: table })
    }

    pub fn to_raw(&self) -> RawGroupoid {
        let n = self.num_arrows();
        let l = |a: usize| self.arrow_labels[a].clone();
        let mut compose = Vec::new();
        for g in 0..n {
            for h in 0..n {
                if let Some(gh) = self.compose(g, h) {
                    compose.push([l(g), l(h), l(gh)]);
                }
            }
        }
        RawGroupoid {
            units: self.unit_labels.clone(),
            arrows: (0..n)
                .map(|a| ArrowDescriptor {
                    id: l(a),
                    src: self.unit_labels[self.src[a]].clone(),
                    rng: self.unit_labels[self.rng[a]].clone(),
                })
                .collect(),
            compose,
            inv: (0..n).map(|a| [l(a), l(self.inv[a])]).collect(),
        }
    }

    /// Exhaustive axiom check, including associativity on all composable triples.
    pub fn check_axioms(&self) -> ValidationReport {
        validate_groupoid(&self.to_raw()).expect("ids are consistent by construction")
    }

    /// The groupoid on `units` with a single arrow per unit.
    pub fn units_only(units: Vec<String>) -> Self {
        let n = units.len();
        FiniteGroupoid::from_fn(units.clone(), units, (0..n).collect(), (0..n).collect(), (0..n).collect(), |g, _| g)
            .expect("unit groupoid")
    }

    /// A group viewed as a groupoid with one unit named `unit`.
    pub fn from_group(unit: &str, group: &FiniteGroup) -> Self {
        build_transitive_groupoid(&[unit.to_string()], group).expect("one unit")
    }

    /// The pair groupoid on `units`: exactly one arrow between any two units.
    pub fn pair(units: Vec<String>) -> Self {
        build_transitive_groupoid(&units, &FiniteGroup::trivial()).expect("nonempty")
    }

    pub fn num_units(&self) -> usize {
        self.unit_labels.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.arrow_labels.len()
    }

    #[inline]
    pub fn src(&self, g: usize) -> usize {
        self.src[g]
    }

    #[inline]
    pub fn rng(&self, g: usize) -> usize {
        self.rng[g]
    }

    #[inline]
    pub fn inv(&self, g: usize) -> usize {
        self.inv[g]
    }

    #[inline]
    pub fn unit_arrow(&self, u: usize) -> usize {
        self.unit_arrow[u]
    }

    pub fn is_unit_arrow(&self, g: usize) -> bool {
        self.unit_arrow[self.src[g]] == g
    }

    /// `gh`, defined when `src(g) == rng(h)`.
    #[inline]
    pub fn compose(&self, g: usize, h: usize) -> Option<usize> {
        let c = self.compose[g * self.num_arrows() + h];
        (c != UNDEFINED).then_some(c)
    }

    /// Composition when the caller already knows the pair is composable.
    #[inline]
    pub fn mul(&self, g: usize, h: usize) -> usize {
        let c = self.compose[g * self.num_arrows() + h];
        debug_assert_ne!(c, UNDEFINED);
        c
    }

    pub fn unit_label(&self, u: usize) -> &str {
        &self.unit_labels[u]
    }

    pub fn arrow_label(&self, g: usize) -> &str {
        &self.arrow_labels[g]
    }

    pub fn unit_labels(&self) -> &[String] {
        &self.unit_labels
    }

    pub fn arrow_labels(&self) -> &[String] {
        &self.arrow_labels
    }

    pub fn unit_index(&self, label: &str) -> Option<usize> {
        self.unit_labels.iter().position(|l| l == label)
    }

    pub fn arrow_index(&self, label: &str) -> Option<usize> {
        self.arrow_labels.iter().position(|l| l == label)
    }

    /// Arrows `u -> v`, in id order.
    pub fn hom(&self, u: usize, v: usize) -> Vec<usize> {
        (0..self.num_arrows()).filter(|&g| self.src[g] == u && self.rng[g] == v).collect()
    }

    /// Arrows with source `u`.
    pub fn from_unit(&self, u: usize) -> Vec<usize> {
        (0..self.num_arrows()).filter(|&g| self.src[g] == u).collect()
    }

    /// The isotropy group at `u` together with the arrow id of each group element.
    pub fn isotropy_group(&self, u: usize) -> (FiniteGroup, Vec<usize>) {
        let arrows = self.hom(u, u);
        let group = self.group_on(&arrows).expect("isotropy is a group");
        (group, arrows)
    }

    /// The arrows in `arrows` (all loops at one unit, closed under composition) as a group.
    pub fn group_on(&self, arrows: &[usize]) -> Result<FiniteGroup> {
        let pos: HashMap<usize, usize> = arrows.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let labels = arrows.iter().map(|&a| self.arrow_labels[a].clone()).collect();
        FiniteGroup::from_closed_op(labels, |i, j| {
            self.compose(arrows[i], arrows[j]).and_then(|c| pos.get(&c).copied())
        })
    }

    pub fn is_transitive(&self) -> bool {
        self.transitive_components().len() == 1
    }

    /// Orbits of units under the groupoid, each with its isotropy group at the
    /// smallest unit of the orbit.
    pub fn transitive_components(&self) -> Vec<TransitiveComponent> {
        let mut comp = vec![UNDEFINED; self.num_units()];
        let mut out = Vec::new();
        for u in 0..self.num_units() {
            if comp[u] != UNDEFINED {
                continue;
            }
            let mut units: Vec<usize> = self.from_unit(u).into_iter().map(|g| self.rng[g]).collect();
            units.sort_unstable();
            units.dedup();
            for &w in &units {
                comp[w] = out.len();
            }
            let (isotropy, isotropy_arrows) = self.isotropy_group(u);
            out.push(TransitiveComponent { units, basepoint: u, isotropy, isotropy_arrows });
        }
        out
    }

    /// The subgroupoid on a set of arrows; it must contain the unit arrows of the
    /// endpoints and be closed under composition and inversion.
    pub fn subgroupoid(&self, arrows: &[usize]) -> Result<FiniteGroupoid> {
        let mut keep = vec![false; self.num_arrows()];
        for &a in arrows {
            keep[a] = true;
        }
        for &a in arrows {
            for u in [self.src[a], self.rng[a]] {
                if !keep[self.unit_arrow[u]] {
                    return Err(Error::Consistency(format!("subgroupoid misses unit {}", self.unit_labels[u])));
                }
            }
            if !keep[self.inv[a]] {
                return Err(Error::Consistency(format!("subgroupoid not closed under inverse at {}", self.arrow_labels[a])));
            }
            for &b in arrows {
                if let Some(c) = self.compose(a, b) {
                    if !keep[c] {
                        return Err(Error::Consistency(format!(
                            "subgroupoid not closed: {} {}",
                            self.arrow_labels[a], self.arrow_labels[b]
                        )));
                    }
                }
            }
        }
        let units: Vec<usize> = (0..self.num_units()).filter(|&u| keep[self.unit_arrow[u]]).collect();
        let upos: HashMap<usize, usize> = units.iter().enumerate().map(|(i, &u)| (u, i)).collect();
        let sel: Vec<usize> = (0..self.num_arrows()).filter(|&a| keep[a]).collect();
        let apos: HashMap<usize, usize> = sel.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        FiniteGroupoid::from_fn(
            units.iter().map(|&u| self.unit_labels[u].clone()).collect(),
            sel.iter().map(|&a| self.arrow_labels[a].clone()).collect(),
            sel.iter().map(|&a| upos[&self.src[a]]).collect(),
            sel.iter().map(|&a| upos[&self.rng[a]]).collect(),
            units.iter().map(|&u| apos[&self.unit_arrow[u]]).collect(),
            |g, h| apos[&self.mul(sel[g], sel[h])],
        )
    }

    /// Whether `other` is this groupoid with arrows renamed by `arrow_map` and
    /// units renamed by `unit_map` (both bijections).
    pub fn is_isomorphic_via(&self, other: &FiniteGroupoid, unit_map: &[usize], arrow_map: &[usize]) -> bool {
        let n = self.num_arrows();
        if n != other.num_arrows() || self.num_units() != other.num_units() {
            return false;
        }
        for g in 0..n {
            let fg = arrow_map[g];
            if other.src(fg) != unit_map[self.src[g]] || other.rng(fg) != unit_map[self.rng[g]] {
                return false;
            }
            for h in 0..n {
                if self.compose(g, h).map(|c| arrow_map[c]) != other.compose(fg, arrow_map[h]) {
                    return false;
                }
            }
        }
        (0..self.num_units()).all(|u| arrow_map[self.unit_arrow[u]] == other.unit_arrow(unit_map[u]))
    }
}

#[derive(Debug, Clone)]
pub struct TransitiveComponent {
    pub units: Vec<usize>,
    pub basepoint: usize,
    pub isotropy: FiniteGroup,
    pub isotropy_arrows: Vec<usize>,
}

/// The transitive groupoid `units × K × units`, where `(v, k, u)` is an arrow
/// `u -> v` and `(w, k1, v)(v, k2, u) = (w, k1 k2, u)`.
///
/// Arrow `(v, k, u)` has id `(v * |K| + k) * |units| + u`. Identity arrows are
/// labelled by their unit, the others `(v,k,u)`.
pub fn build_transitive_groupoid(units: &[String], group: &FiniteGroup) -> Result<FiniteGroupoid> {
    if units.is_empty() {
        return Err(Error::Precondition("transitive groupoid needs at least one unit".into()));
    }
    let nu = units.len();
    let nk = group.order();
    let e = group.identity();
    let id = |v: usize, k: usize, u: usize| (v * nk + k) * nu + u;
    let n = nu * nu * nk;
    let mut labels = vec![String::new(); n];
    let (mut src, mut rng) = (vec![0; n], vec![0; n]);
    for v in 0..nu {
        for k in 0..nk {
            for u in 0..nu {
                let a = id(v, k, u);
                src[a] = u;
                rng[a] = v;
                labels[a] = if u == v && k == e {
                    units[u].clone()
                } else {
                    format!("({},{},{})", units[v], group.label(k), units[u])
                };
            }
        }
    }
    let unpack = |a: usize| (a / (nk * nu), (a / nu) % nk, a % nu);
    FiniteGroupoid::from_fn(
        units.to_vec(),
        labels,
        src,
        rng,
        (0..nu).map(|u| id(u, e, u)).collect(),
        |g, h| {
            let (w, k1, _) = unpack(g);
            let (_, k2, u) = unpack(h);
            id(w, group.mul(k1, k2), u)
        },
    )
}

/// Arrow id of `(v, k, u)` in [`build_transitive_groupoid`]'s numbering.
pub fn transitive_arrow(num_units: usize, group_order: usize, v: usize, k: usize, u: usize) -> usize {
    (v * group_order + k) * num_units + u
}

/// Disjoint union of groupoids, ids concatenated in order.
pub fn disjoint_union(parts: &[&FiniteGroupoid]) -> FiniteGroupoid {
    let mut unit_labels = Vec::new();
    let mut arrow_labels = Vec::new();
    let (mut src, mut rng, mut unit_arrow) = (Vec::new(), Vec::new(), Vec::new());
    let mut offsets = Vec::new();
    let (mut uo, mut ao) = (0, 0);
    for p in parts {
        offsets.push((uo, ao));
        unit_labels.extend(p.unit_labels.iter().cloned());
        arrow_labels.extend(p.arrow_labels.iter().cloned());
        src.extend(p.src.iter().map(|&u| u + uo));
        rng.extend(p.rng.iter().map(|&u| u + uo));
        unit_arrow.extend(p.unit_arrow.iter().map(|&a| a + ao));
        uo += p.num_units();
        ao += p.num_arrows();
    }
    let owner = |a: usize| offsets.iter().rposition(|&(_, o)| o <= a).expect("offset");
    FiniteGroupoid::from_fn(unit_labels, arrow_labels, src, rng, unit_arrow, |g, h| {
        let (pg, ph) = (owner(g), owner(h));
        if pg != ph {
            return UNDEFINED;
        }
        let o = offsets[pg].1;
        parts[pg].mul(g - o, h - o) + o
    })
    .expect("parts are groupoids")
}

// ---------------------------------------------------------------------------
// Actions on finite sets

/// A groupoid acting on a finite set through an anchor map.
#[derive(Debug, Clone)]
pub struct SpaceAction {
    groupoid: Arc<FiniteGroupoid>,
    point_labels: Vec<String>,
    anchor: Vec<usize>,
    act: Vec<usize>,
}

impl SpaceAction {
    /// Build and validate. `act(g, x)` is consulted only when `src(g) == anchor[x]`.
    pub fn new(
        groupoid: Arc<FiniteGroupoid>,
        point_labels: Vec<String>,
        anchor: Vec<usize>,
        act: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        let a = Self::new_unchecked(groupoid, point_labels, anchor, act);
        a.validate().into_result()?;
        Ok(a)
    }

    pub(crate) fn new_unchecked(
        groupoid: Arc<FiniteGroupoid>,
        point_labels: Vec<String>,
        anchor: Vec<usize>,
        act: impl Fn(usize, usize) -> usize,
    ) -> Self {
        let np = point_labels.len();
        let mut table = vec![UNDEFINED; groupoid.num_arrows() * np];
        for g in 0..groupoid.num_arrows() {
            for x in 0..np {
                if groupoid.src(g) == anchor[x] {
                    table[g * np + x] = act(g, x);
                }
            }
        }
        SpaceAction { groupoid, point_labels, anchor, act: table }
    }

    /// Build from an explicit partial table (sentinel [`UNDEFINED`] for missing entries)
    /// without filtering, so definedness mismatches surface in [`SpaceAction::validate`].
    pub fn from_table(
        groupoid: Arc<FiniteGroupoid>,
        point_labels: Vec<String>,
        anchor: Vec<usize>,
        table: Vec<usize>,
    ) -> Self {
        SpaceAction { groupoid, point_labels, anchor, act: table }
    }

    /// The three action axioms plus definedness and bijectivity of each arrow.
    pub fn validate(&self) -> ValidationReport {
        let g = &*self.groupoid;
        let np = self.num_points();
        let lp = |x: usize| self.point_labels[x].clone();
        let la = |a: usize| g.arrow_label(a).to_string();
        let mut v = Vec::new();
        for a in 0..g.num_arrows() {
            for x in 0..np {
                let defined = self.act[a * np + x] != UNDEFINED;
                if defined != (g.src(a) == self.anchor[x]) {
                    v.push(Violation::new("definedness", vec![la(a), lp(x)]));
                    continue;
                }
                if !defined {
                    continue;
                }
                let y = self.act[a * np + x];
                if y >= np {
                    v.push(Violation::new("definedness", vec![la(a), lp(x)]));
                    continue;
                }
                if self.anchor[y] != g.rng(a) {
                    v.push(Violation::new("anchor", vec![la(a), lp(x)]));
                }
            }
        }
        if !v.is_empty() {
            return ValidationReport::from_violations(v);
        }
        for x in 0..np {
            if self.act[g.unit_arrow(self.anchor[x]) * np + x] != x {
                v.push(Violation::new("unit", vec![lp(x)]));
            }
        }
        for a in 0..g.num_arrows() {
            for b in 0..g.num_arrows() {
                let Some(ab) = g.compose(a, b) else { continue };
                for x in 0..np {
                    if self.anchor[x] != g.src(b) {
                        continue;
                    }
                    let bx = self.act[b * np + x];
                    if self.act[ab * np + x] != self.act[a * np + bx] {
                        v.push(Violation::new("multiplicativity", vec![la(a), la(b), lp(x)]));
                    }
                }
            }
        }
        ValidationReport::from_violations(v)
    }

    pub fn groupoid(&self) -> &FiniteGroupoid {
        &self.groupoid
    }

    pub fn groupoid_arc(&self) -> &Arc<FiniteGroupoid> {
        &self.groupoid
    }

    pub fn num_points(&self) -> usize {
        self.point_labels.len()
    }

    pub fn point_label(&self, x: usize) -> &str {
        &self.point_labels[x]
    }

    pub fn point_labels(&self) -> &[String] {
        &self.point_labels
    }

    pub fn point_index(&self, label: &str) -> Option<usize> {
        self.point_labels.iter().position(|l| l == label)
    }

    #[inline]
    pub fn anchor(&self, x: usize) -> usize {
        self.anchor[x]
    }

    pub fn anchors(&self) -> &[usize] {
        &self.anchor
    }

    #[inline]
    pub fn act(&self, g: usize, x: usize) -> Option<usize> {
        let y = self.act[g * self.num_points() + x];
        (y != UNDEFINED).then_some(y)
    }

    /// `g·x` for a pair already known to be composable.
    #[inline]
    pub fn apply(&self, g: usize, x: usize) -> usize {
        let y = self.act[g * self.num_points() + x];
        debug_assert_ne!(y, UNDEFINED);
        y
    }

    pub fn orbit_of(&self, x: usize) -> Vec<usize> {
        let mut o: Vec<usize> = self.groupoid.from_unit(self.anchor[x]).into_iter().map(|g| self.apply(g, x)).collect();
        o.sort_unstable();
        o.dedup();
        o
    }

    /// Orbit partition, each orbit sorted, orbits ordered by smallest element.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.num_points()];
        let mut out = Vec::new();
        for x in 0..self.num_points() {
            if !seen[x] {
                let o = self.orbit_of(x);
                for &y in &o {
                    seen[y] = true;
                }
                out.push(o);
            }
        }
        out
    }

    /// `orbit_index[x]` for the partition returned by [`SpaceAction::orbits`].
    pub fn orbit_index(&self) -> Vec<usize> {
        let mut idx = vec![0; self.num_points()];
        for (i, o) in self.orbits().iter().enumerate() {
            for &x in o {
                idx[x] = i;
            }
        }
        idx
    }

    /// Arrows fixing `x`; a subgroup of the isotropy at `anchor(x)`.
    pub fn stabilizer(&self, x: usize) -> Vec<usize> {
        let u = self.anchor[x];
        self.groupoid.hom(u, u).into_iter().filter(|&g| self.apply(g, x) == x).collect()
    }

    pub fn stabilizer_group(&self, x: usize) -> (FiniteGroup, Vec<usize>) {
        let arrows = self.stabilizer(x);
        (self.groupoid.group_on(&arrows).expect("stabilizer is a group"), arrows)
    }

    /// Points fixed by every isotropy arrow at their anchor.
    pub fn fixed_points(&self) -> Vec<usize> {
        (0..self.num_points())
            .filter(|&x| {
                let u = self.anchor[x];
                self.groupoid.hom(u, u).into_iter().all(|g| self.apply(g, x) == x)
            })
            .collect()
    }

    pub fn is_free(&self) -> bool {
        (0..self.num_points()).all(|x| self.stabilizer(x).len() == 1)
    }

    /// Smallest arrow carrying `x` to `y`, if any.
    pub fn transporter(&self, x: usize, y: usize) -> Option<usize> {
        self.groupoid.from_unit(self.anchor[x]).into_iter().find(|&g| self.apply(g, x) == y)
    }
}

/// The action groupoid `G ⋉ X`: arrows `(g, x)` with `src(g) = anchor(x)`, from `x` to `g·x`.
#[derive(Debug, Clone)]
pub struct ActionGroupoid {
    pub groupoid: FiniteGroupoid,
    /// `(g, x)` for each arrow id.
    pub pairs: Vec<(usize, usize)>,
    index: Vec<usize>,
    num_points: usize,
}

impl ActionGroupoid {
    /// Arrow id of `(g, x)`.
    pub fn index_of(&self, g: usize, x: usize) -> Option<usize> {
        let i = self.index[g * self.num_points + x];
        (i != UNDEFINED).then_some(i)
    }
}

pub fn action_groupoid(action: &SpaceAction) -> ActionGroupoid {
    let g = action.groupoid();
    let np = action.num_points();
    let mut pairs = Vec::new();
    let mut index = vec![UNDEFINED; g.num_arrows() * np];
    for a in 0..g.num_arrows() {
        for x in 0..np {
            if g.src(a) == action.anchor(x) {
                index[a * np + x] = pairs.len();
                pairs.push((a, x));
            }
        }
    }
    let labels = pairs
        .iter()
        .map(|&(a, x)| {
            if g.is_unit_arrow(a) {
                action.point_label(x).to_string()
            } else {
                format!("({},{})", g.arrow_label(a), action.point_label(x))
            }
        })
        .collect();
    let groupoid = FiniteGroupoid::from_fn(
        action.point_labels().to_vec(),
        labels,
        pairs.iter().map(|&(_, x)| x).collect(),
        pairs.iter().map(|&(a, x)| action.apply(a, x)).collect(),
        (0..np).map(|x| index[g.unit_arrow(action.anchor(x)) * np + x]).collect(),
        |p, q| {
            let (a1, _) = pairs[p];
            let (a2, x) = pairs[q];
            index[g.mul(a1, a2) * np + x]
        },
    )
    .expect("action groupoid");
    ActionGroupoid { groupoid, pairs, index, num_points: np }
}

// ---------------------------------------------------------------------------
// Actions on groupoids

/// `G` acting on the arrows of `H` through an anchor `p: H → G⁰`.
#[derive(Debug, Clone)]
pub struct GroupoidOnGroupoidAction {
    actor: Arc<FiniteGroupoid>,
    target: Arc<FiniteGroupoid>,
    anchor: Vec<usize>,
    act: Vec<usize>,
}

impl GroupoidOnGroupoidAction {
    /// `anchor` is indexed by arrows of `target`; `act(g, h)` is consulted when `src(g) = anchor[h]`.
    pub fn new(
        actor: Arc<FiniteGroupoid>,
        target: Arc<FiniteGroupoid>,
        anchor: Vec<usize>,
        act: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        let nh = target.num_arrows();
        let mut table = vec![UNDEFINED; actor.num_arrows() * nh];
        for g in 0..actor.num_arrows() {
            for h in 0..nh {
                if actor.src(g) == anchor[h] {
                    table[g * nh + h] = act(g, h);
                }
            }
        }
        let a = GroupoidOnGroupoidAction { actor, target, anchor, act: table };
        a.validate().into_result()?;
        Ok(a)
    }

    pub fn validate(&self) -> ValidationReport {
        let (g, h) = (&*self.actor, &*self.target);
        let nh = h.num_arrows();
        let la = |a: usize| g.arrow_label(a).to_string();
        let lh = |x: usize| h.arrow_label(x).to_string();
        let mut v = Vec::new();
        for x in 0..nh {
            let p = self.anchor[x];
            if self.anchor[h.unit_arrow(h.src(x))] != p || self.anchor[h.unit_arrow(h.rng(x))] != p {
                v.push(Violation::new("anchor", vec![lh(x)]));
            }
        }
        for a in 0..g.num_arrows() {
            for x in 0..nh {
                let y = self.act[a * nh + x];
                if (y != UNDEFINED) != (g.src(a) == self.anchor[x]) || (y != UNDEFINED && y >= nh) {
                    v.push(Violation::new("definedness", vec![la(a), lh(x)]));
                } else if y != UNDEFINED && self.anchor[y] != g.rng(a) {
                    v.push(Violation::new("anchor", vec![la(a), lh(x)]));
                }
            }
        }
        if !v.is_empty() {
            return ValidationReport::from_violations(v);
        }
        let act = |a: usize, x: usize| self.act[a * nh + x];
        for x in 0..nh {
            if act(g.unit_arrow(self.anchor[x]), x) != x {
                v.push(Violation::new("unit", vec![lh(x)]));
            }
        }
        for a in 0..g.num_arrows() {
            for x in 0..nh {
                if g.src(a) != self.anchor[x] {
                    continue;
                }
                let y = act(a, x);
                // s(g·h) = g·s(h) and r(g·h) = g·r(h), with units read as identity arrows
                let s_ok = h.unit_arrow(h.src(y)) == act(a, h.unit_arrow(h.src(x)));
                let r_ok = h.unit_arrow(h.rng(y)) == act(a, h.unit_arrow(h.rng(x)));
                if !(s_ok && r_ok) {
                    v.push(Violation::new("endpoints", vec![la(a), lh(x)]));
                }
                for b in 0..g.num_arrows() {
                    if let Some(ab) = g.compose(b, a) {
                        if act(ab, x) != act(b, act(a, x)) {
                            v.push(Violation::new("multiplicativity", vec![la(b), la(a), lh(x)]));
                        }
                    }
                }
                for x2 in 0..nh {
                    if let Some(xx) = h.compose(x, x2) {
                        if h.compose(act(a, x), act(a, x2)) != Some(act(a, xx)) {
                            v.push(Violation::new("homomorphism", vec![la(a), lh(x), lh(x2)]));
                        }
                    }
                }
            }
        }
        ValidationReport::from_violations(v)
    }

    pub fn actor(&self) -> &FiniteGroupoid {
        &self.actor
    }

    pub fn target(&self) -> &FiniteGroupoid {
        &self.target
    }

    pub fn actor_arc(&self) -> &Arc<FiniteGroupoid> {
        &self.actor
    }

    pub fn anchor(&self, h: usize) -> usize {
        self.anchor[h]
    }

    pub fn act(&self, g: usize, h: usize) -> Option<usize> {
        let y = self.act[g * self.target.num_arrows() + h];
        (y != UNDEFINED).then_some(y)
    }

    fn apply(&self, g: usize, h: usize) -> usize {
        self.act[g * self.target.num_arrows() + h]
    }

    /// Action induced on units of `H` (as unit ids).
    pub fn act_on_unit(&self, g: usize, u: usize) -> Option<usize> {
        self.act(g, self.target.unit_arrow(u)).map(|a| self.target.src(a))
    }

    /// The induced action on the unit space of `H`.
    pub fn unit_action(&self) -> SpaceAction {
        let h = &*self.target;
        SpaceAction::new_unchecked(
            self.actor.clone(),
            h.unit_labels().to_vec(),
            (0..h.num_units()).map(|u| self.anchor[h.unit_arrow(u)]).collect(),
            |g, u| h.src(self.apply(g, h.unit_arrow(u))),
        )
    }
}

/// `G ⋉ H` with product `(g1,h1)(g2,h2) = (g1 g2, (g2⁻¹·h1) h2)`.
///
/// Arrows are the pairs `(g, h)` with `src(g) = p(h)`, numbered `g`-major. Units are
/// identified with the units of `H`; `s(g,h) = s(h)` and `r(g,h) = g·r(h)`.
pub fn crossed_product_groupoid(action: &GroupoidOnGroupoidAction) -> (FiniteGroupoid, Vec<(usize, usize)>) {
    let (g, h) = (action.actor(), action.target());
    let nh = h.num_arrows();
    let mut pairs = Vec::new();
    let mut index = vec![UNDEFINED; g.num_arrows() * nh];
    for a in 0..g.num_arrows() {
        for x in 0..nh {
            if g.src(a) == action.anchor(x) {
                index[a * nh + x] = pairs.len();
                pairs.push((a, x));
            }
        }
    }
    let labels = pairs
        .iter()
        .map(|&(a, x)| {
            if g.is_unit_arrow(a) && h.is_unit_arrow(x) {
                h.arrow_label(x).to_string()
            } else {
                format!("({},{})", g.arrow_label(a), h.arrow_label(x))
            }
        })
        .collect();
    let unit_of = |u: usize| {
        let hu = h.unit_arrow(u);
        index[g.unit_arrow(action.anchor(hu)) * nh + hu]
    };
    let src = pairs.iter().map(|&(_, x)| h.src(x)).collect();
    let rng = pairs
        .iter()
        .map(|&(a, x)| h.src(action.apply(a, h.unit_arrow(h.rng(x)))))
        .collect();
    let cp = FiniteGroupoid::from_fn(
        h.unit_labels().to_vec(),
        labels,
        src,
        rng,
        (0..h.num_units()).map(unit_of).collect(),
        |p, q| {
            let (g1, h1) = pairs[p];
            let (g2, h2) = pairs[q];
            let moved = action.apply(g.inv(g2), h1);
            match h.compose(moved, h2) {
                Some(hh) => index[g.mul(g1, g2) * nh + hh],
                None => UNDEFINED,
            }
        },
    )
    .expect("crossed product groupoid");
    (cp, pairs)
}

/// `H^G`: arrows of `H` fixed by the whole isotropy group at their anchor.
pub fn fixed_subgroupoid(action: &GroupoidOnGroupoidAction) -> Result<Option<FiniteGroupoid>> {
    let (g, h) = (action.actor(), action.target());
    let fixed: Vec<usize> = (0..h.num_arrows())
        .filter(|&x| {
            let u = action.anchor(x);
            g.hom(u, u).into_iter().all(|a| action.apply(a, x) == x)
        })
        .collect();
    if fixed.is_empty() {
        return Ok(None);
    }
    h.subgroupoid(&fixed).map(Some)
}

/// Invariant sections `σ: G⁰ → H⁰` (returned as unit ids of `H`, indexed by units of `G`).
///
/// Requires a transitive actor: a section is then determined by its value at unit 0,
/// which must be an isotropy-fixed unit of `H` over unit 0.
pub fn invariant_sections(action: &GroupoidOnGroupoidAction) -> Result<Vec<Vec<usize>>> {
    let (g, h) = (action.actor(), action.target());
    if !g.is_transitive() {
        return Err(Error::Precondition("invariant sections need a transitive actor".into()));
    }
    let base = 0;
    let transport: Vec<usize> = (0..g.num_units())
        .map(|v| g.hom(base, v)[0])
        .collect();
    let mut out = Vec::new();
    for a in 0..h.num_units() {
        let ha = h.unit_arrow(a);
        if action.anchor(ha) != base {
            continue;
        }
        if !g.hom(base, base).into_iter().all(|k| action.apply(k, ha) == ha) {
            continue;
        }
        let sigma: Vec<usize> = transport
            .iter()
            .map(|&t| h.src(action.apply(t, ha)))
            .collect();
        debug_assert!((0..g.num_arrows()).all(|k| action.act_on_unit(k, sigma[g.src(k)]) == Some(sigma[g.rng(k)])));
        out.push(sigma);
    }
    Ok(out)
}

/// Brute-force enumeration of invariant sections over all maps `G⁰ → H⁰`; used to
/// cross-check [`invariant_sections`] on small inputs.
pub fn invariant_sections_brute_force(action: &GroupoidOnGroupoidAction) -> Vec<Vec<usize>> {
    let (g, h) = (action.actor(), action.target());
    let over: Vec<Vec<usize>> = (0..g.num_units())
        .map(|u| (0..h.num_units()).filter(|&a| action.anchor(h.unit_arrow(a)) == u).collect())
        .collect();
    let mut out = Vec::new();
    let mut current = vec![0; g.num_units()];
    fn rec(
        i: usize,
        over: &[Vec<usize>],
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        check: &dyn Fn(&[usize]) -> bool,
    ) {
        if i == over.len() {
            if check(current) {
                out.push(current.clone());
            }
            return;
        }
        for &a in &over[i] {
            current[i] = a;
            rec(i + 1, over, current, out, check);
        }
    }
    let check = |sigma: &[usize]| {
        (0..g.num_arrows()).all(|k| action.act_on_unit(k, sigma[g.src(k)]) == Some(sigma[g.rng(k)]))
    };
    rec(0, &over, &mut current, &mut out, &check);
    out.sort();
    out
}

/// Summary of a groupoid's orbit structure, for reports.
#[derive(Debug, Clone, Serialize)]
pub struct ComponentSummary {
    pub units: Vec<String>,
    pub basepoint: String,
    pub isotropy_order: usize,
}

pub fn component_summaries(g: &FiniteGroupoid) -> Vec<ComponentSummary> {
    g.transitive_components()
        .into_iter()
        .map(|c| ComponentSummary {
            units: c.units.iter().map(|&u| g.unit_label(u).to_string()).collect(),
            basepoint: g.unit_label(c.basepoint).to_string(),
            isotropy_order: c.isotropy.order(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> String {
        x.to_string()
    }

    fn z2_raw() -> RawGroupoid {
        RawGroupoid {
            units: vec![s("u")],
            arrows: vec![
                ArrowDescriptor { id: s("u"), src: s("u"), rng: s("u") },
                ArrowDescriptor { id: s("t"), src: s("u"), rng: s("u") },
            ],
            compose: vec![
                [s("u"), s("u"), s("u")],
                [s("u"), s("t"), s("t")],
                [s("t"), s("u"), s("t")],
                [s("t"), s("t"), s("u")],
            ],
            inv: vec![[s("u"), s("u")], [s("t"), s("t")]],
        }
    }

    #[test]
    fn trivial_groupoid_validates() {
        let raw = RawGroupoid {
            units: vec![s("u")],
            arrows: vec![ArrowDescriptor { id: s("u"), src: s("u"), rng: s("u") }],
            compose: vec![[s("u"), s("u"), s("u")]],
            inv: vec![[s("u"), s("u")]],
        };
        assert!(validate_groupoid(&raw).unwrap().ok);
    }

    #[test]
    fn z2_as_groupoid_validates() {
        assert!(validate_groupoid(&z2_raw()).unwrap().ok);
        let g = FiniteGroupoid::from_raw(&z2_raw()).unwrap();
        assert_eq!(g.num_arrows(), 2);
    }

    #[test]
    fn bad_composability_is_witnessed() {
        let mut raw = RawGroupoid {
            units: vec![s("a"), s("b")],
            arrows: vec![
                ArrowDescriptor { id: s("a"), src: s("a"), rng: s("a") },
                ArrowDescriptor { id: s("b"), src: s("b"), rng: s("b") },
            ],
            compose: vec![[s("a"), s("a"), s("a")], [s("b"), s("b"), s("b")]],
            inv: vec![[s("a"), s("a")], [s("b"), s("b")]],
        };
        assert!(validate_groupoid(&raw).unwrap().ok);
        raw.compose.push([s("a"), s("b"), s("a")]);
        let rep = validate_groupoid(&raw).unwrap();
        assert!(!rep.ok);
        let v = rep.violations.iter().find(|v| v.axiom == "composability").unwrap();
        assert_eq!(v.witness, vec![s("a"), s("b")]);
    }

    #[test]
    fn dangling_id_is_structural() {
        let mut raw = z2_raw();
        raw.compose.push([s("t"), s("zzz"), s("u")]);
        assert!(matches!(validate_groupoid(&raw), Err(Error::Structural(_))));
        let mut raw = z2_raw();
        raw.arrows[1].src = s("nowhere");
        assert!(matches!(validate_groupoid(&raw), Err(Error::Structural(_))));
    }

    #[test]
    fn broken_inverse_detected() {
        // t·t = t is associative but leaves t without an inverse
        let mut raw = z2_raw();
        raw.compose[3] = [s("t"), s("t"), s("t")];
        let rep = validate_groupoid(&raw).unwrap();
        assert!(rep.has("inverse"));
        assert!(!rep.has("associativity"));
    }

    #[test]
    fn nonassociative_loop_detected() {
        // a Latin square with identity 0 and x·x = 0 cannot be a group of order 5
        let t = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]];
        let name = |i: usize| if i == 0 { s("u") } else { format!("x{i}") };
        let raw = RawGroupoid {
            units: vec![s("u")],
            arrows: (0..5).map(|i| ArrowDescriptor { id: name(i), src: s("u"), rng: s("u") }).collect(),
            compose: (0..5).flat_map(|a| (0..5).map(move |b| (a, b))).map(|(a, b)| [name(a), name(b), name(t[a][b])]).collect(),
            inv: (0..5).map(|i| [name(i), name(i)]).collect(),
        };
        let rep = validate_groupoid(&raw).unwrap();
        assert!(rep.has("associativity"));
        assert!(!rep.has("inverse"));
    }

    #[test]
    fn transitive_counts() {
        let s3 = FiniteGroup::symmetric(3);
        let g = build_transitive_groupoid(&[s("v1"), s("v2")], &s3).unwrap();
        assert_eq!(g.num_arrows(), 24);
        assert!(g.check_axioms().ok);
        let comps = g.transitive_components();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].isotropy.order(), 6);

        let t = build_transitive_groupoid(&[s("u")], &FiniteGroup::trivial()).unwrap();
        assert_eq!(t.num_arrows(), 1);

        let z = build_transitive_groupoid(&[s("a"), s("b"), s("c")], &FiniteGroup::cyclic(2)).unwrap();
        assert_eq!(z.num_arrows(), 18);
        assert!(z.check_axioms().ok);

        assert!(matches!(build_transitive_groupoid(&[], &s3), Err(Error::Precondition(_))));
    }

    #[test]
    fn components_of_disjoint_unions() {
        let a = FiniteGroupoid::from_group("x", &FiniteGroup::cyclic(2));
        let b = FiniteGroupoid::from_group("y", &FiniteGroup::cyclic(3));
        let g = disjoint_union(&[&a, &b]);
        assert!(g.check_axioms().ok);
        let c = g.transitive_components();
        assert_eq!(c.len(), 2);
        assert_eq!((c[0].isotropy.order(), c[1].isotropy.order()), (2, 3));

        let t = FiniteGroupoid::units_only(vec![s("p"), s("q"), s("r")]);
        let c = t.transitive_components();
        assert_eq!(c.len(), 3);
        assert!(c.iter().all(|c| c.isotropy.order() == 1));
    }

    #[test]
    fn free_swap_action() {
        let g = Arc::new(FiniteGroupoid::from_group("u", &FiniteGroup::cyclic(2)));
        let act = SpaceAction::new(g, vec![s("x"), s("y")], vec![0, 0], |a, x| if a == 0 { x } else { 1 - x }).unwrap();
        assert_eq!(act.orbits(), vec![vec![0, 1]]);
        assert!(act.is_free());
        assert!(act.fixed_points().is_empty());
        let ag = action_groupoid(&act);
        assert!(ag.groupoid.check_axioms().ok);
        // pair groupoid on two points: one arrow between any ordered pair
        assert_eq!(ag.groupoid.num_arrows(), 4);
        for x in 0..2 {
            for y in 0..2 {
                assert_eq!(ag.groupoid.hom(x, y).len(), 1);
            }
        }
    }

    #[test]
    fn trivial_isotropy_fixes_everything() {
        let g = Arc::new(FiniteGroupoid::pair(vec![s("a"), s("b")]));
        let act = SpaceAction::new(g.clone(), vec![s("a"), s("b")], vec![0, 1], |a, _| g.rng(a)).unwrap();
        assert_eq!(act.fixed_points(), vec![0, 1]);
    }

    #[test]
    fn broken_action_reports() {
        let g = Arc::new(FiniteGroupoid::from_group("u", &FiniteGroup::cyclic(2)));
        // the non-identity arrow acts by a map that does not square to the identity
        let table = vec![0, 1, 2, 0, 0, 2];
        let act = SpaceAction::from_table(g, vec![s("x"), s("y"), s("z")], vec![0, 0, 0], table);
        let rep = act.validate();
        assert!(rep.has("multiplicativity"));
    }

    #[test]
    fn z2_on_pair_groupoid_crossed_product() {
        let g = Arc::new(FiniteGroupoid::from_group("u", &FiniteGroup::cyclic(2)));
        let h = Arc::new(FiniteGroupoid::pair(vec![s("1"), s("2")]));
        // swap: (i, j) -> (σi, σj); pair-groupoid arrow (v,e,u) has id v*2+u
        let swap = |x: usize| {
            let (v, u) = (x / 2, x % 2);
            (1 - v) * 2 + (1 - u)
        };
        let action = GroupoidOnGroupoidAction::new(g, h, vec![0; 4], |a, x| if a == 0 { x } else { swap(x) }).unwrap();
        let (cp, _) = crossed_product_groupoid(&action);
        assert_eq!(cp.num_arrows(), 8);
        assert!(cp.check_axioms().ok);
        assert!(fixed_subgroupoid(&action).unwrap().is_none());
        assert!(invariant_sections(&action).unwrap().is_empty());
    }

    #[test]
    fn trivial_actor_gives_target() {
        let g = Arc::new(FiniteGroupoid::units_only(vec![s("u")]));
        let h = Arc::new(FiniteGroupoid::from_group("x", &FiniteGroup::cyclic(3)));
        let action = GroupoidOnGroupoidAction::new(g, h.clone(), vec![0; 3], |_, x| x).unwrap();
        let (cp, pairs) = crossed_product_groupoid(&action);
        let arrow_map: Vec<usize> = (0..3).map(|x| pairs.iter().position(|&(_, y)| y == x).unwrap()).collect();
        assert!(h.is_isomorphic_via(&cp, &[0], &arrow_map));
        let fixed = fixed_subgroupoid(&action).unwrap().unwrap();
        assert_eq!(fixed.num_arrows(), 3);
        assert_eq!(invariant_sections(&action).unwrap(), vec![vec![0]]);
    }

    #[test]
    fn sections_need_transitive_actor() {
        let g = Arc::new(FiniteGroupoid::units_only(vec![s("u"), s("v")]));
        let h = Arc::new(FiniteGroupoid::units_only(vec![s("a"), s("b")]));
        let action = GroupoidOnGroupoidAction::new(g, h, vec![0, 1], |_, x| x).unwrap();
        assert!(matches!(invariant_sections(&action), Err(Error::Precondition(_))));
    }
}
