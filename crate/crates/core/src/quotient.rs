//! Character-theoretic quotient graph of a groupoid action on a graph.
//!
//! Spectrum points are pairs (vertex orbit `O`, irreducible `π` of the
//! stabilizer `G(v_O)` of the orbit basepoint), with block size `|O|·deg π`.
//! Each edge orbit with a representative `e` ending at `v_O` and starting in
//! orbit `O'` contributes `⟨π|_{G(e)}, σ∘φ_e⟩_{G(e)}` to the entry
//! `((O, π), (O', σ))`, where `φ_e(c) = g₂⁻¹ c g₂` for an arrow `g₂` carrying
//! `w_{O'}` to `s(e)`.

use std::fmt::Write as _;

use serde::Serialize;

use crate::chartab::{character_table, hom_multiplicity, restrict_character, CharacterTable};
use crate::error::{Error, Mismatch, Result};
use crate::graph::{DirectedGraph, GraphAction, GraphFlags};
use crate::group::FiniteGroup;
use crate::oracle::{oracle_adjacency, BlockLabel};

use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectrumPoint {
    pub orbit: usize,
    /// Label of the smallest vertex in the orbit.
    pub basepoint: String,
    pub orbit_size: usize,
    /// Index in the stabilizer's character table.
    pub irrep: usize,
    pub degree: usize,
    /// `|O|·deg π`.
    pub size: usize,
}

impl SpectrumPoint {
    pub fn label(&self) -> String {
        format!("{}/chi{}", self.basepoint, self.irrep)
    }
}

struct OrbitData {
    vertices: Vec<usize>,
    stabilizer: FiniteGroup,
    /// Stabilizer arrows; element `i` of `stabilizer` is `arrows[i]`.
    arrows: Vec<usize>,
    table: Arc<CharacterTable>,
}

fn orbit_data(a: &GraphAction) -> Result<Vec<OrbitData>> {
    a.vertex_action()
        .orbits()
        .into_iter()
        .map(|vertices| {
            let (stabilizer, arrows) = a.vertex_action().stabilizer_group(vertices[0]);
            let table = character_table(&stabilizer)?;
            Ok(OrbitData { vertices, stabilizer, arrows, table })
        })
        .collect()
}

/// One point per (vertex orbit, irrep of the basepoint stabilizer); orbits by
/// smallest vertex id, irreps in table order.
pub fn spectrum(a: &GraphAction) -> Result<Vec<SpectrumPoint>> {
    Ok(spectrum_from(a, &orbit_data(a)?))
}

fn spectrum_from(a: &GraphAction, orbits: &[OrbitData]) -> Vec<SpectrumPoint> {
    let mut out = Vec::new();
    for (i, o) in orbits.iter().enumerate() {
        for (j, &d) in o.table.degrees().iter().enumerate() {
            out.push(SpectrumPoint {
                orbit: i,
                basepoint: a.graph().vertex_label(o.vertices[0]).to_string(),
                orbit_size: o.vertices.len(),
                irrep: j,
                degree: d,
                size: o.vertices.len() * d,
            });
        }
    }
    out
}

/// Normalised data for one edge orbit.
#[derive(Debug, Clone, Serialize)]
pub struct EdgeOrbit {
    pub edges: Vec<usize>,
    /// Representative with `r(e) = v_O`.
    pub representative: usize,
    pub range_orbit: usize,
    pub source_orbit: usize,
    /// Arrow carrying the chosen orbit element to the representative.
    pub g1: usize,
    /// Arrow carrying `w_{O'}` to `s(e)`.
    pub g2: usize,
    /// Stabilizer of the representative, as arrows.
    pub stabilizer: Vec<usize>,
    /// `φ_e` on `stabilizer`, as arrows of `G(w_{O'})`.
    pub phi: Vec<usize>,
}

/// Edge-orbit data with the canonical choices (smallest edge, smallest arrows).
pub fn edge_orbit_data(a: &GraphAction) -> Vec<EdgeOrbit> {
    edge_orbit_data_by(a, &mut |c| c[0])
}

/// Edge-orbit data where every free choice (orbit element, `g₁`, `g₂`) is made by
/// `pick`, which receives the sorted nonempty candidate list and returns one.
pub fn edge_orbit_data_by(a: &GraphAction, pick: &mut dyn FnMut(&[usize]) -> usize) -> Vec<EdgeOrbit> {
    let va = a.vertex_action();
    let ea = a.edge_action();
    let g = a.groupoid();
    let graph = a.graph();
    let vorbits = va.orbits();
    let vidx = va.orbit_index();
    let carrying = |x: usize, y: usize| -> Vec<usize> {
        g.from_unit(va.anchor(x)).into_iter().filter(|&h| va.apply(h, x) == y).collect()
    };
    ea.orbits()
        .into_iter()
        .map(|edges| {
            let e0 = pick(&edges);
            let range_orbit = vidx[graph.rng(e0)];
            let v = vorbits[range_orbit][0];
            let g1 = pick(&carrying(graph.rng(e0), v));
            let e = ea.apply(g1, e0);
            let source_orbit = vidx[graph.src(e)];
            let w = vorbits[source_orbit][0];
            let g2 = pick(&carrying(w, graph.src(e)));
            let stabilizer = ea.stabilizer(e);
            let phi = stabilizer.iter().map(|&c| g.mul(g.inv(g2), g.mul(c, g2))).collect();
            EdgeOrbit { edges, representative: e, range_orbit, source_orbit, g1, g2, stabilizer, phi }
        })
        .collect()
}

/// Fast-path adjacency over [`spectrum`] order.
pub fn character_adjacency(a: &GraphAction) -> Result<Vec<Vec<i64>>> {
    let orbits = orbit_data(a)?;
    character_adjacency_from(a, &orbits, &edge_orbit_data(a))
}

/// Fast-path adjacency computed from caller-supplied edge-orbit data.
pub fn character_adjacency_with(a: &GraphAction, edge_orbits: &[EdgeOrbit]) -> Result<Vec<Vec<i64>>> {
    character_adjacency_from(a, &orbit_data(a)?, edge_orbits)
}

fn character_adjacency_from(a: &GraphAction, orbits: &[OrbitData], edge_orbits: &[EdgeOrbit]) -> Result<Vec<Vec<i64>>> {
    let spec = spectrum_from(a, orbits);
    let offset: Vec<usize> = orbits
        .iter()
        .scan(0, |acc, o| {
            let x = *acc;
            *acc += o.table.num_irreps();
            Some(x)
        })
        .collect();
    let g = a.groupoid();
    let mut adj = vec![vec![0i64; spec.len()]; spec.len()];
    for eo in edge_orbits {
        let (ro, so) = (&orbits[eo.range_orbit], &orbits[eo.source_orbit]);
        let pos = |arrows: &[usize], x: usize| arrows.iter().position(|&y| y == x).expect("arrow in stabilizer");
        let ge = g.group_on(&eo.stabilizer)?;
        let ge_table = character_table(&ge)?;
        let into_range: Vec<usize> = eo.stabilizer.iter().map(|&c| pos(&ro.arrows, c)).collect();
        let into_source: Vec<usize> = eo.phi.iter().map(|&c| pos(&so.arrows, c)).collect();
        for i in 0..ro.table.num_irreps() {
            let pi = restrict_character(ro.table.row(i), &ro.table, &ge_table, &into_range)?;
            for j in 0..so.table.num_irreps() {
                let sigma = restrict_character(so.table.row(j), &so.table, &ge_table, &into_source)?;
                adj[offset[eo.range_orbit] + i][offset[eo.source_orbit] + j] +=
                    hom_multiplicity(&ge_table, &pi, &sigma)? as i64;
            }
        }
        debug_assert!(ro.stabilizer.order() > 0);
    }
    Ok(adj)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Fast,
    Oracle,
    Both,
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fast" => Ok(Mode::Fast),
            "oracle" => Ok(Mode::Oracle),
            "both" => Ok(Mode::Both),
            _ => Err(Error::Structural(format!("unknown mode {s}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    FastPath,
    Oracle,
    BothAgree,
}

#[derive(Debug, Clone, Serialize)]
pub struct QuotientGraphReport {
    pub spectrum: Vec<SpectrumPoint>,
    /// `adjacency[x][y]` counts edges from `y` into `x`.
    pub adjacency: Vec<Vec<i64>>,
    pub flags: GraphFlags,
    /// Whether the graph meets the hypotheses under which the quotient is
    /// certified Morita equivalent to the crossed product.
    pub morita_certified: bool,
    pub warnings: Vec<String>,
    pub provenance: Provenance,
    /// `dim C₀(E⁰)⋊G = |G⋉E⁰|`.
    pub algebra_dim: usize,
    /// `dim H_E⋊G = Σ_g |E¹_{r(g)}|`.
    pub correspondence_dim: usize,
    pub sum_block_squares: usize,
    pub sum_weighted_edges: i64,
}

impl QuotientGraphReport {
    pub fn sizes(&self) -> Vec<usize> {
        self.spectrum.iter().map(|p| p.size).collect()
    }

    pub fn to_graph(&self) -> DirectedGraph {
        DirectedGraph::from_adjacency(self.spectrum.iter().map(|p| p.label()).collect(), &self.adjacency)
            .expect("nonnegative square matrix")
    }

    /// DOT with one node per spectrum point and `a_xy` parallel edges `y → x`.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph quotient {\n");
        for p in &self.spectrum {
            writeln!(s, "  \"{}\" [label=\"{} (n={})\"];", p.label(), p.label(), p.size).unwrap();
        }
        for (x, row) in self.adjacency.iter().enumerate() {
            for (y, &m) in row.iter().enumerate() {
                for _ in 0..m {
                    writeln!(s, "  \"{}\" -> \"{}\";", self.spectrum[y].label(), self.spectrum[x].label()).unwrap();
                }
            }
        }
        s.push_str("}\n");
        s
    }
}

/// Quotient graph by the chosen route; `Both` fails with the differing entries
/// when the two routes disagree.
pub fn quotient_graph(a: &GraphAction, mode: Mode) -> Result<QuotientGraphReport> {
    let orbits = orbit_data(a)?;
    let spec = spectrum_from(a, &orbits);
    let fast = match mode {
        Mode::Fast | Mode::Both => Some(character_adjacency_from(a, &orbits, &edge_orbit_data(a))?),
        Mode::Oracle => None,
    };
    let oracle = match mode {
        Mode::Oracle | Mode::Both => {
            let o = oracle_adjacency(a)?;
            let expected: Vec<BlockLabel> = spec.iter().map(|p| BlockLabel { orbit: p.orbit, irrep: p.irrep }).collect();
            if o.labels != expected || o.sizes != spec.iter().map(|p| p.size).collect::<Vec<_>>() {
                return Err(Error::Consistency("oracle blocks do not match the spectrum".into()));
            }
            Some(o.adjacency)
        }
        Mode::Fast => None,
    };
    let (adjacency, provenance) = match (fast, oracle) {
        (Some(f), Some(o)) => {
            let mut mismatches = Vec::new();
            for x in 0..spec.len() {
                for y in 0..spec.len() {
                    if f[x][y] != o[x][y] {
                        mismatches.push(Mismatch {
                            row: spec[x].label(),
                            col: spec[y].label(),
                            fast: f[x][y],
                            oracle: o[x][y],
                        });
                    }
                }
            }
            if !mismatches.is_empty() {
                return Err(Error::RouteMismatch(mismatches));
            }
            (f, Provenance::BothAgree)
        }
        (Some(f), None) => (f, Provenance::FastPath),
        (None, Some(o)) => (o, Provenance::Oracle),
        (None, None) => unreachable!(),
    };
    let g = a.groupoid();
    let graph = a.graph();
    let algebra_dim = (0..graph.num_vertices()).map(|v| g.from_unit(a.p(v)).len()).sum();
    let correspondence_dim = (0..g.num_arrows())
        .map(|k| (0..graph.num_edges()).filter(|&e| a.p(graph.rng(e)) == g.rng(k)).count())
        .sum();
    let sum_block_squares = spec.iter().map(|p| p.size * p.size).sum();
    let mut sum_weighted_edges = 0;
    for x in 0..spec.len() {
        for y in 0..spec.len() {
            sum_weighted_edges += adjacency[x][y] * (spec[x].size * spec[y].size) as i64;
        }
    }
    let flags = graph.flags();
    let mut warnings = Vec::new();
    if !flags.no_sources {
        warnings.push(format!(
            "vertices {:?} receive no edges; the Morita identification is not certified",
            flags.sources
        ));
    }
    if sum_block_squares != algebra_dim {
        return Err(Error::Consistency(format!("Σn² = {sum_block_squares} but the algebra has dimension {algebra_dim}")));
    }
    if sum_weighted_edges != correspondence_dim as i64 {
        return Err(Error::Consistency(format!(
            "Σ a n n = {sum_weighted_edges} but the correspondence has dimension {correspondence_dim}"
        )));
    }
    Ok(QuotientGraphReport {
        spectrum: spec,
        adjacency,
        morita_certified: flags.no_sources && flags.locally_finite,
        flags,
        warnings,
        provenance,
        algebra_dim,
        correspondence_dim,
        sum_block_squares,
        sum_weighted_edges,
    })
}
