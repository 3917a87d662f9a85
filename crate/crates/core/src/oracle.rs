//! Brute-force ground truth for the quotient graph.
//!
//! `C₀(E⁰)⋊G` is realised as the convolution algebra of the action groupoid
//! `G⋉E⁰` (counting measure), `H_E⋊G` as an explicit bimodule with basis pairs
//! `(k, e)`, and the quotient-graph incidence numbers as dimensions of corners
//! `p_x (H_E⋊G) p_y` cut out by minimal central projections.

use std::collections::{BTreeMap, HashMap};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::chartab::{character_table, CERT_TOL};
use crate::error::{Error, Result, ValidationReport, Violation};
use crate::graph::GraphAction;
use crate::groupoid::{action_groupoid, ActionGroupoid, FiniteGroupoid, UNDEFINED};
use crate::linalg::{certify_integer, hermitian_clusters, rational_to_f64, SparseEchelon};

/// Tolerance for certifying projections.
pub const PROJ_TOL: f64 = 1e-8;

const SEED: u64 = 0x0c0a_1e5c;

fn czero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// A finite-dimensional *-algebra whose basis is closed under multiplication up
/// to zero, as for groupoid algebras: `b_i b_j` is a basis element or `0`.
#[derive(Debug, Clone)]
pub struct FDStarAlgebra {
    labels: Vec<String>,
    product: Vec<usize>,
    star: Vec<usize>,
    unit: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AlgebraJson {
    pub basis: Vec<String>,
    /// `[a, b, ab]` for every nonzero product of basis elements.
    pub products: Vec<[String; 3]>,
    pub star: Vec<[String; 2]>,
    pub unit: Vec<String>,
}

/// `δ_γ δ_γ' = δ_{γγ'}` when composable, `δ_γ* = δ_{γ⁻¹}`.
pub fn groupoid_algebra(g: &FiniteGroupoid) -> FDStarAlgebra {
    let n = g.num_arrows();
    let mut product = vec![UNDEFINED; n * n];
    for a in 0..n {
        for b in 0..n {
            if let Some(ab) = g.compose(a, b) {
                product[a * n + b] = ab;
            }
        }
    }
    FDStarAlgebra {
        labels: g.arrow_labels().to_vec(),
        product,
        star: (0..n).map(|a| g.inv(a)).collect(),
        unit: (0..g.num_units()).map(|u| g.unit_arrow(u)).collect(),
    }
}

/// The vertex crossed product `C₀(E⁰)⋊G` together with its groupoid.
pub fn vertex_crossed_product(a: &GraphAction) -> (FDStarAlgebra, ActionGroupoid) {
    let ag = action_groupoid(a.vertex_action());
    (groupoid_algebra(&ag.groupoid), ag)
}

impl FDStarAlgebra {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Basis product, `None` for zero.
    #[inline]
    pub fn basis_mul(&self, a: usize, b: usize) -> Option<usize> {
        let c = self.product[a * self.dim() + b];
        (c != UNDEFINED).then_some(c)
    }

    pub fn basis_star(&self, a: usize) -> usize {
        self.star[a]
    }

    pub fn one(&self) -> Vec<Complex64> {
        let mut x = vec![czero(); self.dim()];
        for &u in &self.unit {
            x[u] = Complex64::new(1.0, 0.0);
        }
        x
    }

    pub fn basis_element(&self, a: usize) -> Vec<Complex64> {
        let mut x = vec![czero(); self.dim()];
        x[a] = Complex64::new(1.0, 0.0);
        x
    }

    pub fn mul(&self, x: &[Complex64], y: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim();
        let ys: Vec<usize> = (0..n).filter(|&b| y[b] != czero()).collect();
        let mut out = vec![czero(); n];
        for a in 0..n {
            if x[a] == czero() {
                continue;
            }
            for &b in &ys {
                if let Some(c) = self.basis_mul(a, b) {
                    out[c] += x[a] * y[b];
                }
            }
        }
        out
    }

    pub fn star(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![czero(); self.dim()];
        for (a, v) in x.iter().enumerate() {
            out[self.star[a]] += v.conj();
        }
        out
    }

    /// Trace of left multiplication by `x` on the algebra itself.
    pub fn regular_trace(&self, x: &[Complex64]) -> Complex64 {
        let n = self.dim();
        let mut t = czero();
        for a in 0..n {
            if x[a] == czero() {
                continue;
            }
            for b in 0..n {
                if self.basis_mul(a, b) == Some(b) {
                    t += x[a];
                }
            }
        }
        t
    }

    /// Associativity on basis triples and the involution axioms.
    pub fn check_invariants(&self) -> ValidationReport {
        let n = self.dim();
        let l = |a: usize| self.labels[a].clone();
        let mut v = Vec::new();
        for a in 0..n {
            if self.star[self.star[a]] != a {
                v.push(Violation::new("involution", vec![l(a)]));
            }
            for b in 0..n {
                let ab = self.basis_mul(a, b);
                let bs_as = self.basis_mul(self.star[b], self.star[a]);
                if ab.map(|c| self.star[c]) != bs_as {
                    v.push(Violation::new("anti-multiplicative", vec![l(a), l(b)]));
                }
                for c in 0..n {
                    let left = ab.and_then(|ab| self.basis_mul(ab, c));
                    let right = self.basis_mul(b, c).and_then(|bc| self.basis_mul(a, bc));
                    if left != right {
                        v.push(Violation::new("associativity", vec![l(a), l(b), l(c)]));
                    }
                }
            }
        }
        ValidationReport::from_violations(v)
    }

    pub fn to_json(&self) -> AlgebraJson {
        let n = self.dim();
        let l = |a: usize| self.labels[a].clone();
        let mut products = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if let Some(c) = self.basis_mul(a, b) {
                    products.push([l(a), l(b), l(c)]);
                }
            }
        }
        AlgebraJson {
            basis: self.labels.clone(),
            products,
            star: (0..n).map(|a| [l(a), l(self.star[a])]).collect(),
            unit: self.unit.iter().map(|&u| l(u)).collect(),
        }
    }

    /// A real basis of the center, from the exact commutant equations
    /// `b z = z b` for every basis element `b`.
    pub fn center_basis(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        let mut ech = SparseEchelon::new(n);
        for b in 0..n {
            // coefficient of each basis element γ in b z - z b
            let mut eqs: BTreeMap<usize, Vec<(usize, i64)>> = BTreeMap::new();
            for a in 0..n {
                if let Some(g) = self.basis_mul(b, a) {
                    eqs.entry(g).or_default().push((a, 1));
                }
                if let Some(g) = self.basis_mul(a, b) {
                    eqs.entry(g).or_default().push((a, -1));
                }
            }
            for (_, row) in eqs {
                ech.insert_i64(&row);
            }
        }
        ech.nullspace()
            .into_iter()
            .map(|v| {
                let mut x = vec![0.0; n];
                for (k, q) in v {
                    x[k] = rational_to_f64(&q);
                }
                x
            })
            .collect()
    }
}

/// One Wedderburn block: its minimal central projection and matrix size.
#[derive(Debug, Clone, Serialize)]
pub struct Block {
    pub projection: Vec<Complex64>,
    pub size: usize,
    /// Smallest basis id in the support of the projection.
    pub min_support: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct BlockDecomposition {
    pub blocks: Vec<Block>,
}

impl BlockDecomposition {
    pub fn sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.size).collect()
    }
}

fn orthonormalize(vs: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for v in vs {
        let mut w = v.clone();
        for _ in 0..2 {
            for q in &out {
                let d: f64 = w.iter().zip(q).map(|(a, b)| a * b).sum();
                for (x, y) in w.iter_mut().zip(q) {
                    *x -= d * y;
                }
            }
        }
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        for x in &mut w {
            *x /= norm;
        }
        out.push(w);
    }
    out
}

fn close(x: &[Complex64], y: &[Complex64], tol: f64) -> bool {
    x.iter().zip(y).all(|(a, b)| (a - b).norm() <= tol)
}

/// Minimal central projections, found by diagonalising a random self-adjoint
/// central element on the center and projecting the unit onto its eigenspaces.
///
/// Every projection is certified idempotent, self-adjoint, central and
/// orthogonal to the others, summing to the unit, to [`PROJ_TOL`].
pub fn minimal_central_projections(alg: &FDStarAlgebra) -> Result<BlockDecomposition> {
    let n = alg.dim();
    let zb = orthonormalize(&alg.center_basis());
    let r = zb.len();
    let one = alg.one();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _attempt in 0..16 {
        let mut z = vec![czero(); n];
        for q in &zb {
            let (s, t): (f64, f64) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let qc: Vec<Complex64> = q.iter().map(|&x| Complex64::new(x, 0.0)).collect();
            let qs = alg.star(&qc);
            for a in 0..n {
                z[a] += (qc[a] + qs[a]) * s + (qc[a] - qs[a]) * Complex64::new(0.0, t);
            }
        }
        // z restricted to the center, in the orthonormal basis zb
        let images: Vec<Vec<Complex64>> = zb
            .iter()
            .map(|q| alg.mul(&z, &q.iter().map(|&x| Complex64::new(x, 0.0)).collect::<Vec<_>>()))
            .collect();
        let mut h = DMatrix::<Complex64>::zeros(r, r);
        let mut scale: f64 = 1e-300;
        for (j, img) in images.iter().enumerate() {
            for (i, q) in zb.iter().enumerate() {
                let v: Complex64 = q.iter().zip(img).map(|(a, b)| b * *a).sum();
                scale = scale.max(v.norm());
                h[(i, j)] = v;
            }
        }
        let Some(clusters) = hermitian_clusters(&h, 1e-9 * scale, 1e-6 * scale) else { continue };
        if clusters.len() != r || clusters.iter().any(|c| c.multiplicity != 1) {
            continue;
        }
        let one_coords: Vec<Complex64> =
            zb.iter().map(|q| q.iter().zip(&one).map(|(a, b)| b * *a).sum()).collect();
        let mut blocks = Vec::with_capacity(r);
        for c in &clusters {
            let coords = c.project(&one_coords);
            let mut p = vec![czero(); n];
            for (q, w) in zb.iter().zip(&coords) {
                for a in 0..n {
                    p[a] += w * q[a];
                }
            }
            for x in &mut p {
                if x.norm() < 1e-13 {
                    *x = czero();
                }
            }
            let n2 = certify_integer(alg.regular_trace(&p), 1e-6)
                .ok_or_else(|| Error::Consistency("block dimension is not an integer".into()))?;
            let size = (n2 as f64).sqrt().round() as usize;
            if size == 0 || (size * size) as i64 != n2 {
                return Err(Error::Consistency(format!("block dimension {n2} is not a positive square")));
            }
            let min_support = (0..n).find(|&a| p[a].norm() > PROJ_TOL).unwrap_or(0);
            blocks.push(Block { projection: p, size, min_support });
        }
        certify_blocks(alg, &blocks)?;
        blocks.sort_by_key(|b| (b.size, b.min_support));
        return Ok(BlockDecomposition { blocks });
    }
    Err(Error::Consistency("could not separate the center's spectrum".into()))
}

fn certify_blocks(alg: &FDStarAlgebra, blocks: &[Block]) -> Result<()> {
    let n = alg.dim();
    let mut total = vec![czero(); n];
    for (i, b) in blocks.iter().enumerate() {
        let p = &b.projection;
        if !close(&alg.mul(p, p), p, PROJ_TOL) {
            return Err(Error::Consistency(format!("block {i}: projection is not idempotent")));
        }
        if !close(&alg.star(p), p, PROJ_TOL) {
            return Err(Error::Consistency(format!("block {i}: projection is not self-adjoint")));
        }
        for a in 0..n {
            let e = alg.basis_element(a);
            if !close(&alg.mul(&e, p), &alg.mul(p, &e), PROJ_TOL) {
                return Err(Error::Consistency(format!("block {i}: projection is not central")));
            }
        }
        for (j, c) in blocks.iter().enumerate().skip(i + 1) {
            if alg.mul(p, &c.projection).iter().any(|x| x.norm() > PROJ_TOL) {
                return Err(Error::Consistency(format!("blocks {i} and {j} are not orthogonal")));
            }
        }
        for a in 0..n {
            total[a] += p[a];
        }
    }
    if !close(&total, &alg.one(), PROJ_TOL) {
        return Err(Error::Consistency("projections do not sum to the unit".into()));
    }
    Ok(())
}

/// The correspondence `H_E⋊G` over `C₀(E⁰)⋊G`.
///
/// Basis pairs `(k, e)` with `k` an arrow of `G` and `p(r(e)) = r(k)`. For an
/// action-groupoid arrow `(h, x)`:
/// - `(h, x)·(k, e) = (hk, h·e)` when `s(h) = r(k)` and `r(e) = x`;
/// - `(k, e)·(h, x) = (kh, e)` when `s(k) = r(h)` and `(kh)·x = s(e)`;
/// - `⟨(k, e), (k', e')⟩ = (k⁻¹k', k'⁻¹·s(e))` when `e = e'` and `r(k) = r(k')`.
#[derive(Debug, Clone)]
pub struct FDCorrespondence {
    basis: Vec<(usize, usize)>,
    algebra_dim: usize,
    left: Vec<usize>,
    right: Vec<usize>,
    inner: Vec<usize>,
}

pub fn correspondence_crossed_product(a: &GraphAction, ag: &ActionGroupoid) -> FDCorrespondence {
    let g = a.groupoid();
    let graph = a.graph();
    let mut basis = Vec::new();
    let mut index = HashMap::new();
    for k in 0..g.num_arrows() {
        for e in 0..graph.num_edges() {
            if a.p(graph.rng(e)) == g.rng(k) {
                index.insert((k, e), basis.len());
                basis.push((k, e));
            }
        }
    }
    let d = basis.len();
    let na = ag.pairs.len();
    let mut left = vec![UNDEFINED; na * d];
    let mut right = vec![UNDEFINED; na * d];
    for (ai, &(h, x)) in ag.pairs.iter().enumerate() {
        for (bi, &(k, e)) in basis.iter().enumerate() {
            if g.src(h) == g.rng(k) && graph.rng(e) == x {
                let img = (g.mul(h, k), a.edge_action().apply(h, e));
                left[ai * d + bi] = index[&img];
            }
            if g.src(k) == g.rng(h) {
                let kh = g.mul(k, h);
                if a.vertex_action().apply(kh, x) == graph.src(e) {
                    right[ai * d + bi] = index[&(kh, e)];
                }
            }
        }
    }
    let mut inner = vec![UNDEFINED; d * d];
    for (i, &(k, e)) in basis.iter().enumerate() {
        for (j, &(k2, e2)) in basis.iter().enumerate() {
            if e == e2 && g.rng(k) == g.rng(k2) {
                let arrow = g.mul(g.inv(k), k2);
                let x = a.vertex_action().apply(g.inv(k2), graph.src(e));
                inner[i * d + j] = ag.index_of(arrow, x).expect("inner product lands in the action groupoid");
            }
        }
    }
    FDCorrespondence { basis, algebra_dim: na, left, right, inner }
}

impl FDCorrespondence {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `(k, e)` for each basis id.
    pub fn basis(&self) -> &[(usize, usize)] {
        &self.basis
    }

    #[inline]
    pub fn left(&self, a: usize, b: usize) -> Option<usize> {
        let x = self.left[a * self.dim() + b];
        (x != UNDEFINED).then_some(x)
    }

    #[inline]
    pub fn right(&self, a: usize, b: usize) -> Option<usize> {
        let x = self.right[a * self.dim() + b];
        (x != UNDEFINED).then_some(x)
    }

    #[inline]
    pub fn inner(&self, b1: usize, b2: usize) -> Option<usize> {
        let x = self.inner[b1 * self.dim() + b2];
        (x != UNDEFINED).then_some(x)
    }

    /// Bimodule identities on basis elements.
    pub fn check_invariants(&self, alg: &FDStarAlgebra) -> ValidationReport {
        let d = self.dim();
        let na = self.algebra_dim;
        let mut v = Vec::new();
        let s = |x: usize| x.to_string();
        for a in 0..na {
            for c in 0..na {
                for b in 0..d {
                    let lr = self.right(c, b).and_then(|y| self.left(a, y));
                    let rl = self.left(a, b).and_then(|y| self.right(c, y));
                    if lr != rl {
                        v.push(Violation::new("bimodule", vec![s(a), s(c), s(b)]));
                    }
                    let ll = self.left(c, b).and_then(|y| self.left(a, y));
                    if ll != alg.basis_mul(a, c).and_then(|ac| self.left(ac, b)) {
                        v.push(Violation::new("left-module", vec![s(a), s(c), s(b)]));
                    }
                    let rr = self.right(a, b).and_then(|y| self.right(c, y));
                    if rr != alg.basis_mul(a, c).and_then(|ac| self.right(ac, b)) {
                        v.push(Violation::new("right-module", vec![s(a), s(c), s(b)]));
                    }
                }
            }
        }
        for b1 in 0..d {
            for b2 in 0..d {
                if self.inner(b1, b2).map(|x| alg.basis_star(x)) != self.inner(b2, b1) {
                    v.push(Violation::new("inner-star", vec![s(b1), s(b2)]));
                }
                for a in 0..na {
                    let lhs = self.right(a, b2).and_then(|y| self.inner(b1, y));
                    let rhs = self.inner(b1, b2).and_then(|x| alg.basis_mul(x, a));
                    if lhs != rhs {
                        v.push(Violation::new("inner-linear", vec![s(b1), s(b2), s(a)]));
                    }
                    // ⟨a ξ, η⟩ = ⟨ξ, a* η⟩
                    let l1 = self.left(a, b1).and_then(|y| self.inner(y, b2));
                    let l2 = self.left(alg.basis_star(a), b2).and_then(|y| self.inner(b1, y));
                    if l1 != l2 {
                        v.push(Violation::new("adjointable", vec![s(b1), s(b2), s(a)]));
                    }
                }
            }
        }
        ValidationReport::from_violations(v)
    }

    /// `C[(a, a')] = #{b : a·b·a' = b}`, the trace of `ξ ↦ a ξ a'` for basis elements.
    fn trace_counts(&self) -> HashMap<(usize, usize), u32> {
        let d = self.dim();
        let na = self.algebra_dim;
        // left-multiplier carrying y to b, if any, for each (y, b)
        let mut carrier: HashMap<(usize, usize), usize> = HashMap::new();
        for a in 0..na {
            for y in 0..d {
                if let Some(b) = self.left(a, y) {
                    carrier.insert((y, b), a);
                }
            }
        }
        let mut counts = HashMap::new();
        for b in 0..d {
            for a2 in 0..na {
                let Some(y) = self.right(a2, b) else { continue };
                if let Some(&a1) = carrier.get(&(y, b)) {
                    *counts.entry((a1, a2)).or_insert(0) += 1;
                }
            }
        }
        counts
    }

    /// Dense matrix of `ξ ↦ p ξ q`, for cross-checking ranks numerically.
    pub fn corner_operator(&self, p: &[Complex64], q: &[Complex64]) -> DMatrix<Complex64> {
        let d = self.dim();
        let mut m = DMatrix::<Complex64>::zeros(d, d);
        for b in 0..d {
            for (a2, qv) in q.iter().enumerate() {
                if *qv == czero() {
                    continue;
                }
                let Some(y) = self.right(a2, b) else { continue };
                for (a1, pv) in p.iter().enumerate() {
                    if *pv == czero() {
                        continue;
                    }
                    if let Some(z) = self.left(a1, y) {
                        m[(z, b)] += pv * qv;
                    }
                }
            }
        }
        m
    }
}

/// `dim p·M·q` for central projections `p`, `q`, as the trace of the idempotent
/// `ξ ↦ pξq` (which equals its rank).
pub fn corner_dimension(m: &FDCorrespondence, p: &[Complex64], q: &[Complex64]) -> Result<usize> {
    corner_dimension_from_counts(&m.trace_counts(), p, q)
}

fn corner_dimension_from_counts(counts: &HashMap<(usize, usize), u32>, p: &[Complex64], q: &[Complex64]) -> Result<usize> {
    let mut keys: Vec<_> = counts.iter().collect();
    keys.sort();
    let t: Complex64 = keys.iter().map(|(&(a1, a2), &c)| p[a1] * q[a2] * c as f64).sum();
    match certify_integer(t, 1e-6) {
        Some(v) if v >= 0 => Ok(v as usize),
        _ => Err(Error::Consistency(format!("corner dimension {t} is not a nonnegative integer"))),
    }
}

/// `(vertex orbit, irrep of the basepoint stabilizer)` for an oracle block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct BlockLabel {
    pub orbit: usize,
    pub irrep: usize,
}

/// Identify each block with a spectrum point by reading the projection's
/// coefficients on the isotropy at the orbit basepoint, which form the central
/// idempotent `(d/|K|) Σ conj χ(k) k` of the stabilizer's group algebra.
pub fn label_blocks(a: &GraphAction, ag: &ActionGroupoid, blocks: &BlockDecomposition) -> Result<Vec<BlockLabel>> {
    let va = a.vertex_action();
    let orbits = va.orbits();
    let orbit_of = va.orbit_index();
    let mut labels = Vec::with_capacity(blocks.blocks.len());
    for (bi, b) in blocks.blocks.iter().enumerate() {
        let (_, x) = ag.pairs[b.min_support];
        let orbit = orbit_of[x];
        let v = orbits[orbit][0];
        let (k, arrows) = va.stabilizer_group(v);
        let table = character_table(&k)?;
        let order = k.order() as f64;
        let coef: Vec<Complex64> = arrows
            .iter()
            .map(|&g| b.projection[ag.index_of(g, v).expect("stabilizer arrow acts at v")])
            .collect();
        // the identity coefficient is d²/|K|
        let d2 = coef[k.identity()] * order;
        let irrep = (0..table.num_irreps()).find(|&i| {
            let di = table.degree(i) as f64;
            (d2 - Complex64::new(di * di, 0.0)).norm() < CERT_TOL
                && (0..k.order()).all(|g| (coef[g].conj() * order / di - table.value(i, g)).norm() < CERT_TOL)
        });
        match irrep {
            Some(irrep) => labels.push(BlockLabel { orbit, irrep }),
            None => return Err(Error::Consistency(format!("oracle block {bi} matches no irreducible character"))),
        }
    }
    Ok(labels)
}

/// Oracle incidence matrix, rows and columns in spectrum order.
#[derive(Debug, Clone, Serialize)]
pub struct OracleAdjacency {
    pub labels: Vec<BlockLabel>,
    pub sizes: Vec<usize>,
    pub adjacency: Vec<Vec<i64>>,
    pub algebra_dim: usize,
    pub correspondence_dim: usize,
}

pub fn oracle_adjacency(a: &GraphAction) -> Result<OracleAdjacency> {
    let (alg, ag) = vertex_crossed_product(a);
    let blocks = minimal_central_projections(&alg)?;
    let labels = label_blocks(a, &ag, &blocks)?;
    let mut order: Vec<usize> = (0..labels.len()).collect();
    order.sort_by_key(|&i| labels[i]);
    if order.windows(2).any(|w| labels[w[0]] == labels[w[1]]) {
        return Err(Error::Consistency("two oracle blocks carry the same label".into()));
    }
    let m = correspondence_crossed_product(a, &ag);
    let counts = m.trace_counts();
    let mut adjacency = vec![vec![0; order.len()]; order.len()];
    for (x, &bx) in order.iter().enumerate() {
        for (y, &by) in order.iter().enumerate() {
            let (px, py) = (&blocks.blocks[bx], &blocks.blocks[by]);
            let t = corner_dimension_from_counts(&counts, &px.projection, &py.projection)?;
            let nn = px.size * py.size;
            if t % nn != 0 {
                return Err(Error::Consistency(format!(
                    "corner dimension {t} is not divisible by {}·{}",
                    px.size, py.size
                )));
            }
            adjacency[x][y] = (t / nn) as i64;
        }
    }
    Ok(OracleAdjacency {
        labels: order.iter().map(|&i| labels[i]).collect(),
        sizes: order.iter().map(|&i| blocks.blocks[i].size).collect(),
        adjacency,
        algebra_dim: alg.dim(),
        correspondence_dim: m.dim(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct KappaReport {
    /// Dimension of the span of rank-one operators `θ_{ξ,η}` on `H_E⋊G`.
    pub compacts_of_crossed_product: usize,
    /// `Σ_g dim K(H_{r(g)})`, the crossed product of the fiberwise compacts.
    pub crossed_product_of_compacts: usize,
    pub ok: bool,
}

/// Dimension shadow of `K_{A⋊G}(H⋊G) ≅ K_A(H)⋊G`.
pub fn kappa_dimension_check(a: &GraphAction) -> KappaReport {
    let (_, ag) = vertex_crossed_product(a);
    let m = correspondence_crossed_product(a, &ag);
    let d = m.dim();
    // θ_{ξ,η}(ζ) = ξ·⟨η, ζ⟩ is a partial 0/1 map on basis elements
    let mut ops: Vec<Vec<(usize, i64)>> = Vec::new();
    for xi in 0..d {
        for eta in 0..d {
            let row: Vec<(usize, i64)> = (0..d)
                .filter_map(|zeta| {
                    let img = m.inner(eta, zeta).and_then(|c| m.right(c, xi))?;
                    Some((zeta * d + img, 1))
                })
                .collect();
            if !row.is_empty() {
                ops.push(row);
            }
        }
    }
    ops.sort();
    ops.dedup();
    let mut ech = SparseEchelon::new(d * d);
    for r in &ops {
        ech.insert_i64(r);
    }
    let left = ech.rank();

    let g = a.groupoid();
    let graph = a.graph();
    let per_unit: Vec<usize> = (0..g.num_units())
        .map(|u| {
            let es: Vec<usize> = (0..graph.num_edges()).filter(|&e| a.p(graph.rng(e)) == u).collect();
            es.iter().map(|&e| es.iter().filter(|&&f| graph.src(f) == graph.src(e)).count()).sum()
        })
        .collect();
    let right = (0..g.num_arrows()).map(|k| per_unit[g.rng(k)]).sum();
    KappaReport { compacts_of_crossed_product: left, crossed_product_of_compacts: right, ok: left == right }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::DirectedGraph;
    use crate::group::FiniteGroup;
    use crate::linalg::numeric_rank;
    use std::sync::Arc;

    #[test]
    fn unit_groupoid_gives_point_masses() {
        let g = FiniteGroupoid::units_only(vec!["a".into(), "b".into(), "c".into()]);
        let alg = groupoid_algebra(&g);
        assert!(alg.check_invariants().ok);
        let bd = minimal_central_projections(&alg).unwrap();
        assert_eq!(bd.sizes(), vec![1, 1, 1]);
        for (i, b) in bd.blocks.iter().enumerate() {
            assert!((b.projection[i] - Complex64::new(1.0, 0.0)).norm() < 1e-9);
        }
    }

    #[test]
    fn pair_groupoid_is_one_block() {
        let g = FiniteGroupoid::pair(vec!["a".into(), "b".into(), "c".into()]);
        let bd = minimal_central_projections(&groupoid_algebra(&g)).unwrap();
        assert_eq!(bd.sizes(), vec![3]);
    }

    #[test]
    fn group_algebras() {
        let z2 = FiniteGroupoid::from_group("*", &FiniteGroup::cyclic(2));
        assert_eq!(minimal_central_projections(&groupoid_algebra(&z2)).unwrap().sizes(), vec![1, 1]);
        let s3 = FiniteGroupoid::from_group("*", &FiniteGroup::symmetric(3));
        let alg = groupoid_algebra(&s3);
        assert!(alg.check_invariants().ok);
        assert_eq!(minimal_central_projections(&alg).unwrap().sizes(), vec![1, 1, 2]);
        let z4 = FiniteGroupoid::from_group("*", &FiniteGroup::cyclic(4));
        assert_eq!(minimal_central_projections(&groupoid_algebra(&z4)).unwrap().sizes(), vec![1, 1, 1, 1]);
    }

    fn z2_swapping_loops() -> GraphAction {
        let g = Arc::new(FiniteGroupoid::from_group("*", &FiniteGroup::cyclic(2)));
        let graph = DirectedGraph::from_edges(&["v"], &[("e", 0, 0), ("f", 0, 0)]).unwrap();
        GraphAction::new(g, Arc::new(graph), vec![0], |_, v| v, |k, e| if k == 0 { e } else { 1 - e }).unwrap()
    }

    #[test]
    fn z2_on_two_loops() {
        let a = z2_swapping_loops();
        let (alg, ag) = vertex_crossed_product(&a);
        let m = correspondence_crossed_product(&a, &ag);
        assert_eq!(m.dim(), 4);
        assert!(m.check_invariants(&alg).ok);
        let o = oracle_adjacency(&a).unwrap();
        assert_eq!(o.sizes, vec![1, 1]);
        assert_eq!(o.adjacency, vec![vec![1, 1], vec![1, 1]]);
        let k = kappa_dimension_check(&a);
        assert!(k.ok, "{k:?}");
    }

    #[test]
    fn corner_trace_matches_numeric_rank() {
        let a = z2_swapping_loops();
        let (alg, ag) = vertex_crossed_product(&a);
        let m = correspondence_crossed_product(&a, &ag);
        let bd = minimal_central_projections(&alg).unwrap();
        for p in &bd.blocks {
            for q in &bd.blocks {
                let dense = numeric_rank(&m.corner_operator(&p.projection, &q.projection), 1e-8);
                assert_eq!(corner_dimension(&m, &p.projection, &q.projection).unwrap(), dense);
            }
        }
    }

    #[test]
    fn trivial_groupoid_recovers_graph() {
        let graph = DirectedGraph::from_edges(&["u", "v", "w"], &[("a", 0, 1), ("b", 1, 1), ("c", 1, 0), ("d", 2, 0), ("e", 2, 0)])
            .unwrap();
        let a = GraphAction::trivial(graph.clone());
        let (alg, ag) = vertex_crossed_product(&a);
        assert!(correspondence_crossed_product(&a, &ag).check_invariants(&alg).ok);
        let o = oracle_adjacency(&a).unwrap();
        assert_eq!(o.adjacency, graph.adjacency());
        let k = kappa_dimension_check(&a);
        assert!(k.ok, "{k:?}");
    }

    #[test]
    fn free_swap_of_components() {
        // Z/2 swapping two vertices, each with two loops
        let g = Arc::new(FiniteGroupoid::from_group("*", &FiniteGroup::cyclic(2)));
        let graph = DirectedGraph::from_edges(&["x", "y"], &[("e0", 0, 0), ("f0", 0, 0), ("e1", 1, 1), ("f1", 1, 1)]).unwrap();
        let a = GraphAction::new(g, Arc::new(graph), vec![0, 0], |k, v| if k == 0 { v } else { 1 - v }, |k, e| {
            if k == 0 {
                e
            } else {
                e ^ 2
            }
        })
        .unwrap();
        let o = oracle_adjacency(&a).unwrap();
        assert_eq!(o.sizes, vec![2]);
        assert_eq!(o.adjacency, a.orbit_quotient_graph_free().unwrap().adjacency());
    }
}
