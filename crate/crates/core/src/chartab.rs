//! Character tables of finite groups.
//!
//! Tables are computed Burnside/Dixon style from the class algebra: a random
//! self-adjoint central element acts on the class sums by a matrix that is
//! Hermitian in the trace inner product, and its eigenspaces are spanned by the
//! central idempotents, from which degrees and character values are read off.
//! Values are floating point; every table is certified against the
//! orthogonality relations before use, and every multiplicity leaving this
//! module is certified integral to [`CERT_TOL`].

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupDescriptor};
use crate::linalg::{certify_integer, hermitian_clusters};

/// Integrality tolerance for multiplicities computed from a table.
pub const CERT_TOL: f64 = 1e-6;

/// Default cap on the group order accepted by [`character_table`].
pub const DEFAULT_ORDER_BOUND: usize = 512;

const SEED: u64 = 0x5eed_c4a7;

/// A class function, one value per conjugacy class in table order.
pub type ClassFunction = Vec<Complex64>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjugacyClass {
    pub representative: usize,
    pub size: usize,
    pub elements: Vec<usize>,
}

/// Conjugacy classes ordered by smallest element; the representative is that element.
pub fn conjugacy_classes(g: &FiniteGroup) -> Vec<ConjugacyClass> {
    let n = g.order();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for x in 0..n {
        if seen[x] {
            continue;
        }
        let mut elements: Vec<usize> = (0..n).map(|k| g.mul(g.mul(k, x), g.inv(k))).collect();
        elements.sort_unstable();
        elements.dedup();
        for &y in &elements {
            seen[y] = true;
        }
        out.push(ConjugacyClass { representative: x, size: elements.len(), elements });
    }
    out
}

#[derive(Debug, Clone)]
pub struct CharacterTable {
    group: FiniteGroup,
    classes: Vec<ConjugacyClass>,
    class_of: Vec<usize>,
    irreps: Vec<ClassFunction>,
    degrees: Vec<usize>,
}

type CacheKey = (Vec<String>, Vec<usize>);

fn cache() -> &'static RwLock<HashMap<CacheKey, Arc<CharacterTable>>> {
    static CACHE: OnceLock<RwLock<HashMap<CacheKey, Arc<CharacterTable>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn key_of(g: &FiniteGroup) -> CacheKey {
    (g.labels().to_vec(), g.mul_table().to_vec())
}

/// Character table with the default order bound, memoised per group.
pub fn character_table(g: &FiniteGroup) -> Result<Arc<CharacterTable>> {
    character_table_bounded(g, DEFAULT_ORDER_BOUND)
}

pub fn character_table_bounded(g: &FiniteGroup, bound: usize) -> Result<Arc<CharacterTable>> {
    if g.order() > bound {
        return Err(Error::BoundExceeded(format!("group order {} exceeds bound {bound}", g.order())));
    }
    let key = key_of(g);
    if let Some(t) = cache().read().expect("cache lock").get(&key) {
        return Ok(t.clone());
    }
    let t = Arc::new(compute_table(g)?);
    cache().write().expect("cache lock").entry(key).or_insert_with(|| t.clone());
    Ok(t)
}

/// Seed the memo with a previously computed table (after re-certifying it).
pub fn preload(table: CharacterTable) -> Result<()> {
    table.check_invariants()?;
    cache().write().expect("cache lock").insert(key_of(&table.group), Arc::new(table));
    Ok(())
}

/// Every table currently held in the memo.
pub fn cached_tables() -> Vec<Arc<CharacterTable>> {
    let mut v: Vec<_> = cache().read().expect("cache lock").values().cloned().collect();
    v.sort_by_key(|a| key_of(&a.group));
    v
}

fn snap(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() < 1e-9 {
        if r == 0.0 {
            0.0
        } else {
            r
        }
    } else {
        x
    }
}

fn compute_table(g: &FiniteGroup) -> Result<CharacterTable> {
    let n = g.order();
    let classes = conjugacy_classes(g);
    let r = classes.len();
    let mut class_of = vec![0; n];
    for (i, c) in classes.iter().enumerate() {
        for &x in &c.elements {
            class_of[x] = i;
        }
    }
    let id_class = class_of[g.identity()];
    let inv_class: Vec<usize> = classes.iter().map(|c| class_of[g.inv(c.representative)]).collect();

    // C_i C_j = sum_k a[i][j][k] C_k
    let mut a = vec![0u32; r * r * r];
    for (k, ck) in classes.iter().enumerate() {
        let z = ck.representative;
        for x in 0..n {
            let y = g.mul(g.inv(x), z);
            a[(class_of[x] * r + class_of[y]) * r + k] += 1;
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _attempt in 0..16 {
        let mut c = vec![Complex64::new(0.0, 0.0); r];
        for i in 0..r {
            let j = inv_class[i];
            if j < i {
                continue;
            }
            if j == i {
                c[i] = Complex64::new(rng.gen_range(-1.0..1.0), 0.0);
            } else {
                let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                c[i] = z;
                c[j] = z.conj();
            }
        }
        let sizes: Vec<f64> = classes.iter().map(|c| c.size as f64).collect();
        let mut h = DMatrix::<Complex64>::zeros(r, r);
        let mut scale: f64 = 1.0;
        for j in 0..r {
            for k in 0..r {
                let mut l = Complex64::new(0.0, 0.0);
                for i in 0..r {
                    let m = a[(i * r + j) * r + k];
                    if m != 0 {
                        l += c[i] * m as f64;
                    }
                }
                let v = l * (sizes[k] / sizes[j]).sqrt();
                scale = scale.max(v.norm());
                h[(k, j)] = v;
            }
        }
        let Some(clusters) = hermitian_clusters(&h, 1e-9 * scale, 1e-5 * scale) else { continue };
        if clusters.len() != r || clusters.iter().any(|c| c.multiplicity != 1) {
            continue;
        }
        let mut one = vec![Complex64::new(0.0, 0.0); r];
        one[id_class] = Complex64::new(1.0, 0.0);
        let mut irreps = Vec::with_capacity(r);
        let mut degrees = Vec::with_capacity(r);
        let mut good = true;
        for cl in &clusters {
            let e = cl.project(&one);
            let coeffs: Vec<Complex64> = e.iter().zip(&sizes).map(|(x, s)| x / s.sqrt()).collect();
            let d2 = coeffs[id_class] * n as f64;
            let Some(d2) = certify_integer(d2, CERT_TOL) else {
                good = false;
                break;
            };
            let d = (d2 as f64).sqrt().round() as usize;
            if d * d != d2 as usize || d == 0 {
                good = false;
                break;
            }
            let row: ClassFunction = coeffs
                .iter()
                .map(|x| {
                    let v = x.conj() * (n as f64 / d as f64);
                    Complex64::new(snap(v.re), snap(v.im))
                })
                .collect();
            irreps.push(row);
            degrees.push(d);
        }
        if !good {
            continue;
        }
        let mut order: Vec<usize> = (0..r).collect();
        order.sort_by(|&x, &y| degrees[x].cmp(&degrees[y]).then_with(|| cmp_rows_desc(&irreps[x], &irreps[y])));
        let table = CharacterTable {
            group: g.clone(),
            classes: classes.clone(),
            class_of: class_of.clone(),
            irreps: order.iter().map(|&i| irreps[i].clone()).collect(),
            degrees: order.iter().map(|&i| degrees[i]).collect(),
        };
        if table.check_invariants().is_ok() {
            return Ok(table);
        }
    }
    Err(Error::Consistency(format!("could not certify a character table for a group of order {n}")))
}

fn grid(x: f64) -> i64 {
    (x * 1e9).round() as i64
}

/// Lexicographic comparison of rows, larger values first.
fn cmp_rows_desc(a: &[Complex64], b: &[Complex64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        let o = (grid(y.re), grid(y.im)).cmp(&(grid(x.re), grid(x.im)));
        if o != Ordering::Equal {
            return o;
        }
    }
    Ordering::Equal
}

impl CharacterTable {
    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn classes(&self) -> &[ConjugacyClass] {
        &self.classes
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn class_of(&self, element: usize) -> usize {
        self.class_of[element]
    }

    pub fn identity_class(&self) -> usize {
        self.class_of[self.group.identity()]
    }

    pub fn num_irreps(&self) -> usize {
        self.irreps.len()
    }

    pub fn degree(&self, irrep: usize) -> usize {
        self.degrees[irrep]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn row(&self, irrep: usize) -> &ClassFunction {
        &self.irreps[irrep]
    }

    pub fn rows(&self) -> &[ClassFunction] {
        &self.irreps
    }

    /// `χ_irrep(element)`.
    pub fn value(&self, irrep: usize, element: usize) -> Complex64 {
        self.irreps[irrep][self.class_of[element]]
    }

    pub fn trivial_character(&self) -> ClassFunction {
        vec![Complex64::new(1.0, 0.0); self.num_classes()]
    }

    /// Evaluate an element-wise function on class representatives.
    pub fn class_function(&self, f: impl Fn(usize) -> Complex64) -> ClassFunction {
        self.classes.iter().map(|c| f(c.representative)).collect()
    }

    /// Character of a permutation representation given by `fixed(k)` = number of fixed points of `k`.
    pub fn permutation_character(&self, fixed: impl Fn(usize) -> usize) -> ClassFunction {
        self.class_function(|k| Complex64::new(fixed(k) as f64, 0.0))
    }

    /// `(1/|K|) Σ_c |c| conj(α(c)) β(c)`.
    pub fn inner_product(&self, alpha: &[Complex64], beta: &[Complex64]) -> Complex64 {
        let s: Complex64 = self
            .classes
            .iter()
            .enumerate()
            .map(|(i, c)| alpha[i].conj() * beta[i] * c.size as f64)
            .sum();
        s / self.order() as f64
    }

    /// Row orthonormality, `Σ d² = |K|`, and integrality of products of rows.
    pub fn check_invariants(&self) -> Result<()> {
        let r = self.num_irreps();
        if r != self.num_classes() {
            return Err(Error::Consistency("number of irreducibles differs from number of classes".into()));
        }
        if self.degrees.iter().map(|d| d * d).sum::<usize>() != self.order() {
            return Err(Error::Consistency("sum of squared degrees differs from the group order".into()));
        }
        for i in 0..r {
            if certify_integer(self.irreps[i][self.identity_class()], CERT_TOL) != Some(self.degrees[i] as i64) {
                return Err(Error::Consistency(format!("degree mismatch for irreducible {i}")));
            }
            for j in 0..r {
                let ip = self.inner_product(&self.irreps[i], &self.irreps[j]);
                let want = if i == j { 1.0 } else { 0.0 };
                if (ip - Complex64::new(want, 0.0)).norm() > CERT_TOL {
                    return Err(Error::Consistency(format!("rows {i} and {j} are not orthonormal")));
                }
                let prod: ClassFunction = self.irreps[i].iter().zip(&self.irreps[j]).map(|(a, b)| a * b).collect();
                for k in 0..r {
                    let m = self.inner_product(&self.irreps[k], &prod);
                    if !certify_integer(m, CERT_TOL).is_some_and(|m| m >= 0) {
                        return Err(Error::Consistency(format!("χ{i}·χ{j} has non-integral multiplicity")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Multiplicities of the irreducibles in a class function, certified integral
    /// but not necessarily nonnegative.
    pub fn virtual_multiplicities(&self, chi: &[Complex64]) -> Result<Vec<i64>> {
        (0..self.num_irreps())
            .map(|i| {
                let m = self.inner_product(&self.irreps[i], chi);
                certify_integer(m, CERT_TOL)
                    .ok_or_else(|| Error::Consistency(format!("non-integral multiplicity {m} against irreducible {i}")))
            })
            .collect()
    }

    pub fn irrep_label(&self, irrep: usize) -> String {
        format!("chi{irrep}")
    }

    pub fn to_json(&self) -> CharacterTableJson {
        CharacterTableJson {
            group: self.group.to_descriptor(),
            classes: self
                .classes
                .iter()
                .map(|c| ClassJson { representative: self.group.label(c.representative).to_string(), size: c.size })
                .collect(),
            degrees: self.degrees.clone(),
            rows: self.irreps.iter().map(|r| r.iter().map(|z| [z.re, z.im]).collect()).collect(),
        }
    }

    /// Rebuild from JSON; the caller should certify with [`CharacterTable::check_invariants`].
    pub fn from_json(json: &CharacterTableJson) -> Result<Self> {
        let group = FiniteGroup::from_descriptor(&json.group)?;
        let classes = conjugacy_classes(&group);
        if classes.len() != json.classes.len()
            || classes
                .iter()
                .zip(&json.classes)
                .any(|(c, j)| group.label(c.representative) != j.representative || c.size != j.size)
        {
            return Err(Error::Structural("class list does not match the group".into()));
        }
        if json.rows.len() != classes.len() || json.rows.iter().any(|r| r.len() != classes.len()) {
            return Err(Error::Structural("character table has the wrong shape".into()));
        }
        let mut class_of = vec![0; group.order()];
        for (i, c) in classes.iter().enumerate() {
            for &x in &c.elements {
                class_of[x] = i;
            }
        }
        Ok(CharacterTable {
            group,
            classes,
            class_of,
            irreps: json.rows.iter().map(|r| r.iter().map(|&[a, b]| Complex64::new(a, b)).collect()).collect(),
            degrees: json.degrees.clone(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassJson {
    pub representative: String,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharacterTableJson {
    pub group: GroupDescriptor,
    pub classes: Vec<ClassJson>,
    pub degrees: Vec<usize>,
    /// `rows[irrep][class] = [re, im]`.
    pub rows: Vec<Vec<[f64; 2]>>,
}

/// Multiplicities of the irreducibles in a genuine character.
pub fn tensor_decompose(chi: &[Complex64], table: &CharacterTable) -> Result<Vec<usize>> {
    let m = table.virtual_multiplicities(chi)?;
    if m.iter().any(|&x| x < 0) {
        return Err(Error::Precondition("virtual character: negative multiplicity".into()));
    }
    let m: Vec<usize> = m.into_iter().map(|x| x as usize).collect();
    let dim: usize = m.iter().zip(table.degrees()).map(|(a, d)| a * d).sum();
    if certify_integer(chi[table.identity_class()], CERT_TOL) != Some(dim as i64) {
        return Err(Error::Consistency("multiplicities do not add up to the degree".into()));
    }
    Ok(m)
}

/// `dim Hom_K(V_α, V_β)` for genuine characters `α`, `β`.
pub fn hom_multiplicity(table: &CharacterTable, alpha: &[Complex64], beta: &[Complex64]) -> Result<usize> {
    tensor_decompose(alpha, table)?;
    tensor_decompose(beta, table)?;
    let v = table.inner_product(alpha, beta);
    match certify_integer(v, CERT_TOL) {
        Some(m) if m >= 0 => Ok(m as usize),
        _ => Err(Error::Consistency(format!("intertwiner dimension {v} is not a nonnegative integer"))),
    }
}

/// Restrict a class function of `K` along an embedding `H ↪ K`.
///
/// `embedding[h]` is the element of `K` that element `h` of `H` maps to.
pub fn restrict_character(
    chi: &[Complex64],
    table: &CharacterTable,
    sub_table: &CharacterTable,
    embedding: &[usize],
) -> Result<ClassFunction> {
    if !sub_table.group().is_embedding_into(table.group(), embedding) {
        return Err(Error::Precondition("embedding is not an injective homomorphism".into()));
    }
    Ok(sub_table.class_function(|h| chi[table.class_of(embedding[h])]))
}

pub fn conj(chi: &[Complex64]) -> ClassFunction {
    chi.iter().map(|z| z.conj()).collect()
}

/// Pointwise product of class functions (character of the tensor product).
pub fn tensor(alpha: &[Complex64], beta: &[Complex64]) -> ClassFunction {
    alpha.iter().zip(beta).map(|(a, b)| a * b).collect()
}
