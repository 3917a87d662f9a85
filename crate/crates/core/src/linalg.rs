//! Exact sparse row reduction over the rationals and a Hermitian spectral helper.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type SparseRow = BTreeMap<usize, BigRational>;

/// Incremental row echelon form with rational entries.
///
/// Rows are kept sparse, which is what makes commutant systems with 0/±1
/// coefficients and a few hundred unknowns cheap to solve exactly.
#[derive(Debug, Clone, Default)]
pub struct SparseEchelon {
    ncols: usize,
    pivots: BTreeMap<usize, SparseRow>,
}

impl SparseEchelon {
    pub fn new(ncols: usize) -> Self {
        SparseEchelon { ncols, pivots: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Add a row; returns whether it was independent of the rows seen so far.
    pub fn insert(&mut self, mut row: SparseRow) -> bool {
        row.retain(|_, v| !v.is_zero());
        let mut start = 0;
        loop {
            let next = row.range(start..).map(|(&k, _)| k).find(|k| self.pivots.contains_key(k));
            let Some(c) = next else { break };
            let factor = row[&c].clone();
            for (&k, v) in &self.pivots[&c] {
                let e = row.entry(k).or_insert_with(BigRational::zero);
                *e -= &factor * v;
                if e.is_zero() {
                    row.remove(&k);
                }
            }
            start = c + 1;
        }
        let Some((&lead, lv)) = row.iter().next() else { return false };
        let lv = lv.clone();
        for v in row.values_mut() {
            *v /= &lv;
        }
        self.pivots.insert(lead, row);
        true
    }

    pub fn insert_i64(&mut self, entries: &[(usize, i64)]) -> bool {
        let mut row = SparseRow::new();
        for &(k, v) in entries {
            *row.entry(k).or_insert_with(BigRational::zero) += BigRational::from_integer(v.into());
        }
        self.insert(row)
    }

    fn reduce_fully(&mut self) {
        let cols: Vec<usize> = self.pivots.keys().rev().copied().collect();
        for &p in &cols {
            let prow = self.pivots[&p].clone();
            for (&q, qrow) in self.pivots.iter_mut() {
                if q == p {
                    continue;
                }
                if let Some(f) = qrow.get(&p).cloned() {
                    for (&k, v) in &prow {
                        let e = qrow.entry(k).or_insert_with(BigRational::zero);
                        *e -= &f * v;
                        if e.is_zero() {
                            qrow.remove(&k);
                        }
                    }
                }
            }
        }
    }

    /// A basis of the solutions of `row · x = 0` for all inserted rows.
    pub fn nullspace(mut self) -> Vec<SparseRow> {
        self.reduce_fully();
        let mut out = Vec::new();
        for f in 0..self.ncols {
            if self.pivots.contains_key(&f) {
                continue;
            }
            let mut v = SparseRow::new();
            v.insert(f, BigRational::one());
            for (&p, row) in &self.pivots {
                if let Some(c) = row.get(&f) {
                    v.insert(p, -c.clone());
                }
            }
            out.push(v);
        }
        out
    }
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        let sign = if q.is_negative() { -1.0 } else { 1.0 };
        sign * f64::INFINITY
    })
}

/// Exact rank of a list of sparse integer rows.
pub fn exact_rank(rows: impl IntoIterator<Item = Vec<(usize, i64)>>, ncols: usize) -> usize {
    let mut e = SparseEchelon::new(ncols);
    for r in rows {
        e.insert_i64(&r);
    }
    e.rank()
}

/// One eigenvalue of a Hermitian matrix with an orthonormal basis of its
/// eigenspace, stored in the real embedding `x = a + ib ↦ (a, b)`.
#[derive(Debug, Clone)]
pub struct SpectralCluster {
    pub value: f64,
    /// Complex multiplicity.
    pub multiplicity: usize,
    basis: DMatrix<f64>,
}

impl SpectralCluster {
    /// Orthogonal projection of `x` onto the eigenspace.
    pub fn project(&self, x: &[Complex64]) -> Vec<Complex64> {
        let n = x.len();
        let real = DVector::from_iterator(2 * n, x.iter().map(|z| z.re).chain(x.iter().map(|z| z.im)));
        let coeffs = self.basis.transpose() * &real;
        let y = &self.basis * coeffs;
        (0..n).map(|i| Complex64::new(y[i], y[n + i])).collect()
    }
}

/// Eigenvalues of a Hermitian matrix grouped into clusters of width `tol`.
///
/// Returns `None` when the matrix is not Hermitian to within `tol`, or when two
/// clusters are closer than `min_gap` (the caller should perturb and retry).
pub fn hermitian_clusters(h: &DMatrix<Complex64>, tol: f64, min_gap: f64) -> Option<Vec<SpectralCluster>> {
    let n = h.nrows();
    for i in 0..n {
        for j in 0..n {
            if (h[(i, j)] - h[(j, i)].conj()).norm() > tol {
                return None;
            }
        }
    }
    // [[A, -B], [B, A]] for H = A + iB
    let mut s = DMatrix::<f64>::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let z = h[(i, j)];
            s[(i, j)] = z.re;
            s[(n + i, n + j)] = z.re;
            s[(i, n + j)] = -z.im;
            s[(n + i, j)] = z.im;
        }
    }
    let eig = SymmetricEigen::new(s);
    let mut order: Vec<usize> = (0..2 * n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for &i in &order {
        let lam = eig.eigenvalues[i];
        match groups.last_mut() {
            Some(g) if (lam - eig.eigenvalues[*g.last().expect("nonempty")]).abs() <= tol => g.push(i),
            _ => groups.push(vec![i]),
        }
    }
    for w in groups.windows(2) {
        let hi = eig.eigenvalues[*w[0].last().expect("nonempty")];
        let lo = eig.eigenvalues[w[1][0]];
        if lo - hi < min_gap {
            return None;
        }
    }
    let mut out = Vec::new();
    for g in groups {
        if g.len() % 2 != 0 {
            return None;
        }
        let value = g.iter().map(|&i| eig.eigenvalues[i]).sum::<f64>() / g.len() as f64;
        let basis = DMatrix::from_columns(&g.iter().map(|&i| eig.eigenvectors.column(i).into_owned()).collect::<Vec<_>>());
        out.push(SpectralCluster { value, multiplicity: g.len() / 2, basis });
    }
    Some(out)
}

/// Numerical rank of a complex matrix by singular values.
pub fn numeric_rank(m: &DMatrix<Complex64>, tol: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let svd = m.clone().svd(false, false);
    svd.singular_values.iter().filter(|&&s| s > tol).count()
}

/// `Some(n)` when `x` is within `tol` of the integer `n`.
pub fn certify_integer(x: Complex64, tol: f64) -> Option<i64> {
    let r = x.re.round();
    ((x.re - r).abs() < tol && x.im.abs() < tol).then_some(r as i64)
}
