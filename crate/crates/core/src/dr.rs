//! Intertwiner dimensions `(ρᵐ, ρⁿ)` over a fiber and Bratteli data for cores.
//!
//! Over the unit `u = p(v)`, the operators `θ_{μ,ν}` for paths `μ`, `ν` of
//! lengths `m`, `n` in the fiber graph `E_u` with `s(μ) = s(ν)` span the compact
//! operators between tensor powers; the isotropy `K = G_u^u` permutes them, so
//! the intertwiner space has dimension `(1/|K|) Σ_k #{(μ, ν) fixed by k}`.

use std::fmt::Write as _;

use serde::Serialize;

use crate::chartab::{character_table, tensor, tensor_decompose};
use crate::error::{Error, Result};
use crate::graph::GraphAction;
use crate::linalg::exact_rank;
use crate::quotient::QuotientGraphReport;

/// Largest `m`, `n` accepted by the dimension routines.
pub const DEFAULT_DEPTH_BOUND: usize = 12;

/// Largest number of path pairs the explicit-rank route will materialise.
pub const RANK_ROUTE_LIMIT: usize = 20_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntertwinerDims {
    pub basepoint: String,
    pub unit: String,
    pub depth: usize,
    /// `table[m][n] = dim (ρᵐ, ρⁿ)`.
    pub table: Vec<Vec<u64>>,
    pub warnings: Vec<String>,
}

struct Fiber {
    vertices: Vec<usize>,
    edges: Vec<usize>,
    isotropy: Vec<usize>,
}

fn fiber(a: &GraphAction, v: usize) -> Fiber {
    let u = a.p(v);
    let graph = a.graph();
    Fiber {
        vertices: (0..graph.num_vertices()).filter(|&w| a.p(w) == u).collect(),
        edges: (0..graph.num_edges()).filter(|&e| a.p(graph.rng(e)) == u).collect(),
        isotropy: a.groupoid().hom(u, u),
    }
}

/// `counts[w]` = number of paths of length `len` with source `w` fixed by `k`.
fn fixed_paths_by_source(a: &GraphAction, f: &Fiber, k: usize, len: usize) -> Vec<u128> {
    let graph = a.graph();
    let nv = graph.num_vertices();
    // paths of length j with source w: extend on the range side
    let mut by_source_range = vec![vec![0u128; nv]; nv];
    for &w in &f.vertices {
        if a.act_vertex(k, w) == Some(w) {
            by_source_range[w][w] = 1;
        }
    }
    let fixed: Vec<usize> = f.edges.iter().copied().filter(|&e| a.act_edge(k, e) == Some(e)).collect();
    for _ in 0..len {
        let mut next = vec![vec![0u128; nv]; nv];
        for &w in &f.vertices {
            for &e in &fixed {
                next[w][graph.rng(e)] += by_source_range[w][graph.src(e)];
            }
        }
        by_source_range = next;
    }
    by_source_range.iter().map(|row| row.iter().sum()).collect()
}

fn check_depth(m: usize, n: usize, bound: usize) -> Result<()> {
    if m > bound || n > bound {
        return Err(Error::BoundExceeded(format!("path length {} exceeds depth bound {bound}", m.max(n))));
    }
    Ok(())
}

/// `dim (ρᵐ, ρⁿ)` at the fiber of `v`, by the Burnside count.
pub fn intertwiner_dimension(a: &GraphAction, v: usize, m: usize, n: usize) -> Result<u64> {
    check_depth(m, n, DEFAULT_DEPTH_BOUND)?;
    let f = fiber(a, v);
    let mut total: u128 = 0;
    for &k in &f.isotropy {
        let pm = fixed_paths_by_source(a, &f, k, m);
        let pn = fixed_paths_by_source(a, &f, k, n);
        total += f.vertices.iter().map(|&w| pm[w] * pn[w]).sum::<u128>();
    }
    let order = f.isotropy.len() as u128;
    if !total.is_multiple_of(order) {
        return Err(Error::Consistency(format!("Burnside sum {total} is not divisible by {order}")));
    }
    u64::try_from(total / order).map_err(|_| Error::BoundExceeded("dimension overflows u64".into()))
}

fn paths_in_fiber(a: &GraphAction, f: &Fiber, len: usize) -> Vec<(usize, Vec<usize>)> {
    // (source, edges), including length-zero paths at each vertex
    let graph = a.graph();
    let mut out: Vec<(usize, usize, Vec<usize>)> = f.vertices.iter().map(|&w| (w, w, Vec::new())).collect();
    for _ in 0..len {
        let mut next = Vec::new();
        for (src, rng, p) in &out {
            for &e in &f.edges {
                if graph.src(e) == *rng {
                    let mut q = vec![e];
                    q.extend(p);
                    next.push((*src, graph.rng(e), q));
                }
            }
        }
        out = next;
    }
    out.into_iter().map(|(s, r, p)| (s, if p.is_empty() { vec![usize::MAX - r] } else { p })).collect()
}

/// `dim (ρᵐ, ρⁿ)` as the dimension of the `K`-invariant subspace of the span of
/// the `θ_{μ,ν}`, from the exact rank of the stacked `P_k − I`.
pub fn intertwiner_dimension_by_rank(a: &GraphAction, v: usize, m: usize, n: usize) -> Result<u64> {
    check_depth(m, n, DEFAULT_DEPTH_BOUND)?;
    let f = fiber(a, v);
    let pm = paths_in_fiber(a, &f, m);
    let pn = paths_in_fiber(a, &f, n);
    let mut pairs = Vec::new();
    for (s1, mu) in &pm {
        for (s2, nu) in &pn {
            if s1 == s2 {
                pairs.push((mu.clone(), nu.clone()));
            }
        }
    }
    if pairs.len() > RANK_ROUTE_LIMIT {
        return Err(Error::BoundExceeded(format!("{} path pairs exceed the rank-route limit", pairs.len())));
    }
    pairs.sort();
    let act = |k: usize, p: &[usize]| -> Vec<usize> {
        p.iter()
            .map(|&e| {
                if e >= a.graph().num_edges() {
                    // encoded vertex for a length-zero path
                    usize::MAX - a.act_vertex(k, usize::MAX - e).expect("fiber vertex")
                } else {
                    a.act_edge(k, e).expect("fiber edge")
                }
            })
            .collect()
    };
    let mut rows = Vec::new();
    for &k in &f.isotropy {
        for (i, (mu, nu)) in pairs.iter().enumerate() {
            let img = (act(k, mu), act(k, nu));
            let j = pairs.binary_search(&img).map_err(|_| Error::Consistency("isotropy leaves the path pairs".into()))?;
            if i != j {
                rows.push(vec![(i, 1), (j, -1)]);
            }
        }
    }
    Ok((pairs.len() - exact_rank(rows, pairs.len())) as u64)
}

/// `d[m][n]` for `0 ≤ m, n ≤ depth`, with symmetry checked, and monotonicity
/// along diagonals when the fiber has no sources.
pub fn dr_dimension_table(a: &GraphAction, v: usize, depth: usize) -> Result<IntertwinerDims> {
    check_depth(depth, depth, DEFAULT_DEPTH_BOUND)?;
    let mut table = vec![vec![0; depth + 1]; depth + 1];
    for m in 0..=depth {
        for n in 0..=depth {
            table[m][n] = intertwiner_dimension(a, v, m, n)?;
        }
    }
    let graph = a.graph();
    let f = fiber(a, v);
    let flags = graph.subgraph(&f.vertices, &f.edges)?.flags();
    // T ↦ T⊗1 embeds d[m][n] into d[m+1][n+1] only if every path extends
    let monotone = flags.no_sources;
    for m in 0..=depth {
        for n in 0..=depth {
            if table[m][n] != table[n][m] {
                return Err(Error::Consistency(format!("d[{m}][{n}] ≠ d[{n}][{m}]")));
            }
            if monotone && m < depth && n < depth && table[m][n] > table[m + 1][n + 1] {
                return Err(Error::Consistency(format!("d[{m}][{n}] > d[{}][{}]", m + 1, n + 1)));
            }
        }
    }
    let mut warnings = Vec::new();
    if !flags.no_sources {
        warnings.push(format!("fiber vertices {:?} receive no edges; monotonicity not checked", flags.sources));
    }
    if !flags.sinks.is_empty() {
        warnings.push(format!("fiber vertices {:?} emit no edges", flags.sinks));
    }
    Ok(IntertwinerDims {
        basepoint: graph.vertex_label(v).to_string(),
        unit: a.groupoid().unit_label(a.p(v)).to_string(),
        depth,
        table,
        warnings,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BratteliLevel {
    pub labels: Vec<String>,
    pub dims: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BratteliDiagram {
    pub levels: Vec<BratteliLevel>,
    /// `multiplicities[k][i][j]`: edges from vertex `j` at level `k` to vertex `i` at level `k+1`.
    pub multiplicities: Vec<Vec<Vec<u64>>>,
}

impl BratteliDiagram {
    /// `dim_{k+1} = M_k · dim_k` at every level.
    pub fn check(&self) -> Result<()> {
        for (k, m) in self.multiplicities.iter().enumerate() {
            let (lo, hi) = (&self.levels[k], &self.levels[k + 1]);
            for (i, row) in m.iter().enumerate() {
                let d: u64 = row.iter().zip(&lo.dims).map(|(a, b)| a * b).sum();
                if d != hi.dims[i] {
                    return Err(Error::Consistency(format!("dimension mismatch at level {} vertex {i}", k + 1)));
                }
            }
        }
        Ok(())
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph bratteli {\n  rankdir=TB;\n");
        for (k, l) in self.levels.iter().enumerate() {
            s.push_str("  { rank=same;");
            for (i, lab) in l.labels.iter().enumerate() {
                write!(s, " \"{k}:{lab}\" [label=\"{lab} ({})\"];", l.dims[i]).unwrap();
            }
            s.push_str(" }\n");
        }
        for (k, m) in self.multiplicities.iter().enumerate() {
            for (i, row) in m.iter().enumerate() {
                for (j, &c) in row.iter().enumerate() {
                    if c > 0 {
                        writeln!(
                            s,
                            "  \"{k}:{}\" -> \"{}:{}\" [label=\"{c}\"];",
                            self.levels[k].labels[j],
                            k + 1,
                            self.levels[k + 1].labels[i]
                        )
                        .unwrap();
                    }
                }
            }
        }
        s.push_str("}\n");
        s
    }
}

/// Core of the graph algebra of a quotient graph: constant multiplicity `Aᵀ`,
/// starting from all-ones.
pub fn core_bratteli_quotient(report: &QuotientGraphReport, levels: usize) -> Result<BratteliDiagram> {
    let labels: Vec<String> = report.spectrum.iter().map(|p| p.label()).collect();
    core_bratteli_adjacency(&labels, &report.adjacency, levels)
}

/// Core of the graph algebra with adjacency `adj` (`adj[x][y]` edges `y → x`).
pub fn core_bratteli_adjacency(labels: &[String], adj: &[Vec<i64>], levels: usize) -> Result<BratteliDiagram> {
    let n = labels.len();
    if adj.iter().flatten().any(|&x| x < 0) {
        return Err(Error::Structural("negative adjacency entry".into()));
    }
    let mt: Vec<Vec<u64>> = (0..n).map(|x| (0..n).map(|y| adj[y][x] as u64).collect()).collect();
    let mut dims = vec![1u64; n];
    let mut out = BratteliDiagram { levels: Vec::new(), multiplicities: Vec::new() };
    out.levels.push(BratteliLevel { labels: labels.to_vec(), dims: dims.clone() });
    for _ in 0..levels {
        let mut next = vec![0u64; n];
        for x in 0..n {
            for y in 0..n {
                next[x] = next[x]
                    .checked_add(mt[x][y].checked_mul(dims[y]).ok_or_else(|| Error::BoundExceeded("dimension overflow".into()))?)
                    .ok_or_else(|| Error::BoundExceeded("dimension overflow".into()))?;
            }
        }
        dims = next;
        out.multiplicities.push(mt.clone());
        out.levels.push(BratteliLevel { labels: labels.to_vec(), dims: dims.clone() });
    }
    out.check()?;
    Ok(out)
}

/// Bratteli diagram of the fixed-point core of `ρ^⊗k` for a single-vertex
/// fiber: level `k` has the irreducibles occurring in `ρ^⊗k`, and
/// `M[π'][π] = mult(π', π⊗ρ)`.
pub fn core_bratteli_dr_fiber(a: &GraphAction, v: usize, levels: usize) -> Result<BratteliDiagram> {
    let f = fiber(a, v);
    if f.vertices.len() != 1 {
        return Err(Error::Unsupported(format!(
            "fiber over {} has {} vertices; only single-vertex fibers are supported",
            a.groupoid().unit_label(a.p(v)),
            f.vertices.len()
        )));
    }
    let u = a.p(v);
    let (k, arrows) = a.groupoid().isotropy_group(u);
    let table = character_table(&k)?;
    let rho = table.permutation_character(|g| f.edges.iter().filter(|&&e| a.act_edge(arrows[g], e) == Some(e)).count());
    let r = table.num_irreps();
    // M[π'][π] over all irreps
    let mut full = vec![vec![0u64; r]; r];
    for pi in 0..r {
        let m = tensor_decompose(&tensor(table.row(pi), &rho), &table)?;
        for (pp, &c) in m.iter().enumerate() {
            full[pp][pi] = c as u64;
        }
    }
    let mut present: Vec<usize> = vec![0];
    let mut dims: Vec<u64> = vec![1];
    let label = |i: usize| table.irrep_label(i);
    let mut out = BratteliDiagram { levels: Vec::new(), multiplicities: Vec::new() };
    out.levels.push(BratteliLevel { labels: present.iter().map(|&i| label(i)).collect(), dims: dims.clone() });
    for _ in 0..levels {
        let next_all: Vec<u64> = (0..r).map(|pp| present.iter().zip(&dims).map(|(&pi, d)| full[pp][pi] * d).sum()).collect();
        let next: Vec<usize> = (0..r).filter(|&pp| next_all[pp] > 0).collect();
        out.multiplicities.push(next.iter().map(|&pp| present.iter().map(|&pi| full[pp][pi]).collect()).collect());
        dims = next.iter().map(|&pp| next_all[pp]).collect();
        present = next;
        out.levels.push(BratteliLevel { labels: present.iter().map(|&i| label(i)).collect(), dims: dims.clone() });
    }
    out.check()?;
    Ok(out)
}
