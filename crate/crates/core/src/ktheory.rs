//! Smith normal form over `Z` and K-groups of graph algebras.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub type IntMatrix = Vec<Vec<BigInt>>;

pub fn to_big(m: &[Vec<i64>]) -> IntMatrix {
    m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

pub fn identity(n: usize) -> IntMatrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(BigInt::zero(), |acc, k| acc + &row[k] * &b[k][j]))
                .collect()
        })
        .collect()
}

/// Fraction-free (Bareiss) determinant.
pub fn determinant(m: &IntMatrix) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// Nonzero diagonal entries, in order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.s.len().min(self.s.first().map_or(0, Vec::len)))
            .map(|i| self.s[i][i].clone())
            .filter(|d| !d.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }

    /// `U·M·V = S`, `S` diagonal with a divisibility chain, `|det U| = |det V| = 1`.
    pub fn verify(&self, m: &IntMatrix) -> bool {
        let diag_ok = self.s.iter().enumerate().all(|(i, r)| r.iter().enumerate().all(|(j, x)| i == j || x.is_zero()));
        let d = self.invariant_factors();
        let chain = d.iter().all(|x| x.is_positive()) && d.windows(2).all(|w| w[1].is_multiple_of(&w[0]));
        // zero diagonal entries come last
        let k = d.len();
        let tail = (k..self.s.len().min(self.s.first().map_or(0, Vec::len))).all(|i| self.s[i][i].is_zero());
        diag_ok
            && chain
            && tail
            && mat_mul(&mat_mul(&self.u, m), &self.v) == self.s
            && determinant(&self.u).abs().is_one()
            && determinant(&self.v).abs().is_one()
    }
}

fn row_axpy(m: &mut IntMatrix, dst: usize, src: usize, q: &BigInt) {
    // row_dst -= q · row_src
    let (lo, hi) = if dst < src { (dst, src) } else { (src, dst) };
    let (a, b) = m.split_at_mut(hi);
    let (d, s) = if dst < src { (&mut a[lo], &b[0]) } else { (&mut b[0], &a[lo]) };
    for (x, y) in d.iter_mut().zip(s) {
        *x -= q * y;
    }
}

fn col_axpy(m: &mut IntMatrix, dst: usize, src: usize, q: &BigInt) {
    for row in m.iter_mut() {
        let y = row[src].clone();
        row[dst] -= q * y;
    }
}

fn swap_cols(m: &mut IntMatrix, a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

/// Smith normal form with deterministic pivoting: smallest nonzero `|entry|`,
/// ties broken by row-major position.
pub fn smith_normal_form(m: &IntMatrix) -> Result<SmithForm> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    if m.iter().any(|r| r.len() != cols) {
        return Err(Error::Structural("ragged integer matrix".into()));
    }
    let mut s = m.clone();
    let mut u = identity(rows);
    let mut v = identity(cols);
    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !s[i][j].is_zero() && best.is_none_or(|(bi, bj)| s[i][j].abs() < s[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return Ok(SmithForm { u, s, v });
            };
            s.swap(t, pi);
            u.swap(t, pi);
            swap_cols(&mut s, t, pj);
            swap_cols(&mut v, t, pj);
            let p = s[t][t].clone();
            let mut clean = true;
            for i in t + 1..rows {
                let q = s[i][t].div_floor(&p);
                if !q.is_zero() {
                    row_axpy(&mut s, i, t, &q);
                    row_axpy(&mut u, i, t, &q);
                }
                clean &= s[i][t].is_zero();
            }
            for j in t + 1..cols {
                let q = s[t][j].div_floor(&p);
                if !q.is_zero() {
                    col_axpy(&mut s, j, t, &q);
                    col_axpy(&mut v, j, t, &q);
                }
                clean &= s[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !s[i][j].is_multiple_of(&p)));
            if let Some(i) = bad {
                let minus_one = -BigInt::one();
                row_axpy(&mut s, t, i, &minus_one);
                row_axpy(&mut u, t, i, &minus_one);
                continue;
            }
            if p.is_negative() {
                for x in s[t].iter_mut() {
                    *x = -&*x;
                }
                for x in u[t].iter_mut() {
                    *x = -&*x;
                }
            }
            break;
        }
    }
    Ok(SmithForm { u, s, v })
}

/// A finitely generated abelian group `Z^rank ⊕ ⊕ Z/t_i`, each `t_i ≥ 2`
/// dividing the next.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AbelianGroupInvariants {
    pub rank: usize,
    #[serde(serialize_with = "serialize_big_list")]
    pub torsion: Vec<BigInt>,
}

fn serialize_big_list<S: Serializer>(xs: &[BigInt], ser: S) -> std::result::Result<S::Ok, S::Error> {
    let mut seq = ser.serialize_seq(Some(xs.len()))?;
    for x in xs {
        match x.to_u64() {
            Some(n) => seq.serialize_element(&n)?,
            None => seq.serialize_element(&x.to_string())?,
        }
    }
    seq.end()
}

impl AbelianGroupInvariants {
    pub fn free(rank: usize) -> Self {
        AbelianGroupInvariants { rank, torsion: Vec::new() }
    }

    pub fn torsion_u64(&self) -> Vec<u64> {
        self.torsion.iter().map(|t| t.to_u64().unwrap_or(u64::MAX)).collect()
    }
}

impl std::fmt::Display for AbelianGroupInvariants {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Cokernel of `m`.
pub fn cokernel(m: &IntMatrix) -> Result<AbelianGroupInvariants> {
    let snf = smith_normal_form(m)?;
    let d = snf.invariant_factors();
    Ok(AbelianGroupInvariants { rank: m.len() - d.len(), torsion: d.into_iter().filter(|x| !x.is_one()).collect() })
}

/// Kernel of `m` (always free).
pub fn kernel(m: &IntMatrix) -> Result<AbelianGroupInvariants> {
    let snf = smith_normal_form(m)?;
    Ok(AbelianGroupInvariants::free(m.first().map_or(0, Vec::len) - snf.rank()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphKTheory {
    pub k0: AbelianGroupInvariants,
    pub k1: AbelianGroupInvariants,
}

/// `K0 = coker(I − Aᵀ)`, `K1 = ker(I − Aᵀ)`, where `adj[x][y]` counts edges with
/// range `x` and source `y`. Refuses graphs with a vertex receiving no edge.
pub fn graph_k_theory(adj: &[Vec<i64>]) -> Result<GraphKTheory> {
    let n = adj.len();
    if adj.iter().any(|r| r.len() != n) {
        return Err(Error::Structural("adjacency matrix must be square".into()));
    }
    if adj.iter().flatten().any(|&x| x < 0) {
        return Err(Error::Structural("negative adjacency entry".into()));
    }
    let sources: Vec<usize> = (0..n).filter(|&x| adj[x].iter().all(|&c| c == 0)).collect();
    if !sources.is_empty() {
        return Err(Error::Precondition(format!(
            "vertices {sources:?} receive no edges; K-theory is only computed for graphs without sources"
        )));
    }
    let m: IntMatrix = (0..n)
        .map(|i| (0..n).map(|j| BigInt::from(i64::from(i == j) - adj[j][i])).collect())
        .collect();
    Ok(GraphKTheory { k0: cokernel(&m)?, k1: kernel(&m)? })
}
