//! Finite directed graphs and groupoid actions on them.
//!
//! Paths are stored range-to-source: `μ = e₁e₂…e_k` with `s(eᵢ) = r(eᵢ₊₁)`, so
//! the leftmost edge is the last one traversed. `r(μ) = r(e₁)`, `s(μ) = s(e_k)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, ValidationReport, Violation};
use crate::groupoid::{FiniteGroupoid, GroupoidDescriptor, SpaceAction, UNDEFINED};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DirectedGraph {
    vertex_labels: Vec<String>,
    edge_labels: Vec<String>,
    src: Vec<usize>,
    rng: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeDescriptor {
    pub id: String,
    pub src: String,
    pub rng: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDescriptor {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeDescriptor>,
}

/// Hypotheses that some constructions need; computed, never enforced.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphFlags {
    /// Finite graphs are always locally finite.
    pub locally_finite: bool,
    /// Every vertex receives an edge (`r⁻¹(v) ≠ ∅`).
    pub no_sources: bool,
    pub sources: Vec<String>,
    /// Vertices that emit no edge.
    pub sinks: Vec<String>,
}

fn index_labels<'a>(labels: &'a [String], what: &str) -> Result<HashMap<&'a str, usize>> {
    let mut m = HashMap::new();
    for (i, l) in labels.iter().enumerate() {
        if m.insert(l.as_str(), i).is_some() {
            return Err(Error::Structural(format!("duplicate {what} id {l}")));
        }
    }
    Ok(m)
}

fn lookup(map: &HashMap<&str, usize>, id: &str, what: &str) -> Result<usize> {
    map.get(id).copied().ok_or_else(|| Error::Structural(format!("dangling {what} id {id}")))
}

impl DirectedGraph {
    pub fn new(vertex_labels: Vec<String>, edge_labels: Vec<String>, src: Vec<usize>, rng: Vec<usize>) -> Result<Self> {
        index_labels(&vertex_labels, "vertex")?;
        index_labels(&edge_labels, "edge")?;
        let nv = vertex_labels.len();
        if src.len() != edge_labels.len() || rng.len() != edge_labels.len() {
            return Err(Error::Structural("endpoint maps must be total on edges".into()));
        }
        if src.iter().chain(&rng).any(|&v| v >= nv) {
            return Err(Error::Structural("edge endpoint out of range".into()));
        }
        Ok(DirectedGraph { vertex_labels, edge_labels, src, rng })
    }

    /// Graph from `(label, src, rng)` triples over vertex ids.
    pub fn from_edges(vertices: &[&str], edges: &[(&str, usize, usize)]) -> Result<Self> {
        Self::new(
            vertices.iter().map(|s| s.to_string()).collect(),
            edges.iter().map(|e| e.0.to_string()).collect(),
            edges.iter().map(|e| e.1).collect(),
            edges.iter().map(|e| e.2).collect(),
        )
    }

    pub fn from_descriptor(d: &GraphDescriptor) -> Result<Self> {
        let vs = index_labels(&d.vertices, "vertex")?;
        let mut src = Vec::new();
        let mut rng = Vec::new();
        for e in &d.edges {
            src.push(lookup(&vs, &e.src, "vertex")?);
            rng.push(lookup(&vs, &e.rng, "vertex")?);
        }
        Self::new(d.vertices.clone(), d.edges.iter().map(|e| e.id.clone()).collect(), src, rng)
    }

    pub fn to_descriptor(&self) -> GraphDescriptor {
        GraphDescriptor {
            vertices: self.vertex_labels.clone(),
            edges: (0..self.num_edges())
                .map(|e| EdgeDescriptor {
                    id: self.edge_labels[e].clone(),
                    src: self.vertex_labels[self.src[e]].clone(),
                    rng: self.vertex_labels[self.rng[e]].clone(),
                })
                .collect(),
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_labels.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edge_labels.len()
    }

    #[inline]
    pub fn src(&self, e: usize) -> usize {
        self.src[e]
    }

    #[inline]
    pub fn rng(&self, e: usize) -> usize {
        self.rng[e]
    }

    pub fn vertex_label(&self, v: usize) -> &str {
        &self.vertex_labels[v]
    }

    pub fn edge_label(&self, e: usize) -> &str {
        &self.edge_labels[e]
    }

    pub fn vertex_labels(&self) -> &[String] {
        &self.vertex_labels
    }

    pub fn edge_labels(&self) -> &[String] {
        &self.edge_labels
    }

    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.vertex_labels.iter().position(|l| l == label)
    }

    pub fn edge_index(&self, label: &str) -> Option<usize> {
        self.edge_labels.iter().position(|l| l == label)
    }

    /// Edges with range `v`.
    pub fn edges_into(&self, v: usize) -> Vec<usize> {
        (0..self.num_edges()).filter(|&e| self.rng[e] == v).collect()
    }

    /// Edges with source `v`.
    pub fn edges_from(&self, v: usize) -> Vec<usize> {
        (0..self.num_edges()).filter(|&e| self.src[e] == v).collect()
    }

    /// `a[x][y]` = number of edges with range `x` and source `y`.
    pub fn adjacency(&self) -> Vec<Vec<i64>> {
        let n = self.num_vertices();
        let mut a = vec![vec![0; n]; n];
        for e in 0..self.num_edges() {
            a[self.rng[e]][self.src[e]] += 1;
        }
        a
    }

    /// Graph with `a[x][y]` edges from `y` to `x`, vertices `labels`.
    pub fn from_adjacency(labels: Vec<String>, a: &[Vec<i64>]) -> Result<Self> {
        let n = labels.len();
        if a.len() != n || a.iter().any(|r| r.len() != n) {
            return Err(Error::Structural("adjacency matrix has the wrong shape".into()));
        }
        let (mut el, mut src, mut rng) = (Vec::new(), Vec::new(), Vec::new());
        for x in 0..n {
            for y in 0..n {
                if a[x][y] < 0 {
                    return Err(Error::Structural("negative edge count".into()));
                }
                for i in 0..a[x][y] {
                    el.push(format!("{}<-{}#{}", labels[x], labels[y], i));
                    src.push(y);
                    rng.push(x);
                }
            }
        }
        Self::new(labels, el, src, rng)
    }

    pub fn flags(&self) -> GraphFlags {
        let mut receives = vec![false; self.num_vertices()];
        let mut emits = vec![false; self.num_vertices()];
        for e in 0..self.num_edges() {
            receives[self.rng[e]] = true;
            emits[self.src[e]] = true;
        }
        let sources: Vec<String> =
            (0..self.num_vertices()).filter(|&v| !receives[v]).map(|v| self.vertex_labels[v].clone()).collect();
        GraphFlags {
            locally_finite: true,
            no_sources: sources.is_empty(),
            sources,
            sinks: (0..self.num_vertices()).filter(|&v| !emits[v]).map(|v| self.vertex_labels[v].clone()).collect(),
        }
    }

    pub fn is_path(&self, edges: &[usize]) -> bool {
        edges.iter().all(|&e| e < self.num_edges()) && edges.windows(2).all(|w| self.src[w[0]] == self.rng[w[1]])
    }

    /// All paths of length `k` with range `v`, in lexicographic order of edge ids.
    pub fn paths_into(&self, v: usize, k: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        let mut ends = vec![v];
        for _ in 0..k {
            let mut next = Vec::new();
            let mut next_ends = Vec::new();
            for (p, &w) in out.iter().zip(&ends) {
                for e in self.edges_into(w) {
                    let mut q = p.clone();
                    q.push(e);
                    next.push(q);
                    next_ends.push(self.src[e]);
                }
            }
            out = next;
            ends = next_ends;
        }
        out
    }

    /// All paths of length `k ≥ 1`, lexicographic in edge ids.
    pub fn paths(&self, k: usize) -> Vec<Vec<usize>> {
        assert!(k >= 1, "length-zero paths are vertices");
        let mut all: Vec<Vec<usize>> = (0..self.num_vertices()).flat_map(|v| self.paths_into(v, k)).collect();
        all.sort();
        all
    }

    pub fn path_label(&self, edges: &[usize]) -> String {
        edges.iter().map(|&e| self.edge_labels[e].as_str()).collect::<Vec<_>>().join("")
    }

    /// Deterministic DOT rendering: nodes in id order, edges in id order.
    pub fn to_dot(&self, name: &str) -> String {
        let mut s = String::new();
        writeln!(s, "digraph \"{}\" {{", escape(name)).unwrap();
        for v in &self.vertex_labels {
            writeln!(s, "  \"{}\";", escape(v)).unwrap();
        }
        for e in 0..self.num_edges() {
            writeln!(
                s,
                "  \"{}\" -> \"{}\" [label=\"{}\"];",
                escape(&self.vertex_labels[self.src[e]]),
                escape(&self.vertex_labels[self.rng[e]]),
                escape(&self.edge_labels[e])
            )
            .unwrap();
        }
        s.push_str("}\n");
        s
    }

    /// The subgraph on the given vertices and edges (ids in the order given).
    pub fn subgraph(&self, vertices: &[usize], edges: &[usize]) -> Result<Self> {
        let pos: HashMap<usize, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut src = Vec::new();
        let mut rng = Vec::new();
        for &e in edges {
            match (pos.get(&self.src[e]), pos.get(&self.rng[e])) {
                (Some(&s), Some(&r)) => {
                    src.push(s);
                    rng.push(r);
                }
                _ => return Err(Error::Precondition(format!("edge {} leaves the subgraph", self.edge_labels[e]))),
            }
        }
        Self::new(
            vertices.iter().map(|&v| self.vertex_labels[v].clone()).collect(),
            edges.iter().map(|&e| self.edge_labels[e].clone()).collect(),
            src,
            rng,
        )
    }

    /// Same graph with vertex `v` renamed to position `vperm[v]` and edge `e` to `eperm[e]`.
    pub fn permuted(&self, vperm: &[usize], eperm: &[usize]) -> Self {
        let mut vl = vec![String::new(); self.num_vertices()];
        for v in 0..self.num_vertices() {
            vl[vperm[v]] = self.vertex_labels[v].clone();
        }
        let (mut el, mut src, mut rng) =
            (vec![String::new(); self.num_edges()], vec![0; self.num_edges()], vec![0; self.num_edges()]);
        for e in 0..self.num_edges() {
            el[eperm[e]] = self.edge_labels[e].clone();
            src[eperm[e]] = vperm[self.src[e]];
            rng[eperm[e]] = vperm[self.rng[e]];
        }
        DirectedGraph { vertex_labels: vl, edge_labels: el, src, rng }
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// A path together with its range vertex, so that length zero is representable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Path {
    /// `r(μ)`; for the empty path, the vertex itself.
    pub range: usize,
    pub edges: Vec<usize>,
}

impl Path {
    pub fn vertex(v: usize) -> Self {
        Path { range: v, edges: Vec::new() }
    }

    pub fn from_edges(graph: &DirectedGraph, edges: Vec<usize>) -> Result<Self> {
        if edges.is_empty() {
            return Err(Error::Precondition("an empty path needs an explicit vertex".into()));
        }
        if !graph.is_path(&edges) {
            return Err(Error::Precondition("edges do not form a composable path".into()));
        }
        Ok(Path { range: graph.rng(edges[0]), edges })
    }

    pub fn source(&self, graph: &DirectedGraph) -> usize {
        self.edges.last().map_or(self.range, |&e| graph.src(e))
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// A groupoid acting compatibly on the vertices and edges of a graph.
#[derive(Debug, Clone)]
pub struct GraphAction {
    graph: Arc<DirectedGraph>,
    vertex_action: SpaceAction,
    edge_action: SpaceAction,
}

impl GraphAction {
    /// Build from action rules and validate. `vertex_act(g, v)` / `edge_act(g, e)`
    /// are only consulted where the pair is composable.
    pub fn new(
        groupoid: Arc<FiniteGroupoid>,
        graph: Arc<DirectedGraph>,
        anchor: Vec<usize>,
        vertex_act: impl Fn(usize, usize) -> usize,
        edge_act: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        if anchor.len() != graph.num_vertices() || anchor.iter().any(|&u| u >= groupoid.num_units()) {
            return Err(Error::Structural("anchor must map every vertex to a unit".into()));
        }
        let edge_anchor = (0..graph.num_edges()).map(|e| anchor[graph.rng(e)]).collect();
        let va = SpaceAction::new_unchecked(groupoid.clone(), graph.vertex_labels().to_vec(), anchor, vertex_act);
        let ea = SpaceAction::new_unchecked(groupoid, graph.edge_labels().to_vec(), edge_anchor, edge_act);
        let a = GraphAction { graph, vertex_action: va, edge_action: ea };
        validate_graph_action(&a)?.into_result()?;
        Ok(a)
    }

    /// Assemble without checking; pair with [`validate_graph_action`].
    pub fn from_parts(graph: Arc<DirectedGraph>, vertex_action: SpaceAction, edge_action: SpaceAction) -> Self {
        GraphAction { graph, vertex_action, edge_action }
    }

    /// The trivial groupoid (one unit, one arrow) acting on `graph`.
    pub fn trivial(graph: DirectedGraph) -> Self {
        let g = Arc::new(FiniteGroupoid::units_only(vec!["*".into()]));
        let anchor = vec![0; graph.num_vertices()];
        GraphAction::new(g, Arc::new(graph), anchor, |_, v| v, |_, e| e).expect("trivial action")
    }

    pub fn groupoid(&self) -> &FiniteGroupoid {
        self.vertex_action.groupoid()
    }

    pub fn groupoid_arc(&self) -> &Arc<FiniteGroupoid> {
        self.vertex_action.groupoid_arc()
    }

    pub fn graph(&self) -> &DirectedGraph {
        &self.graph
    }

    pub fn graph_arc(&self) -> &Arc<DirectedGraph> {
        &self.graph
    }

    pub fn vertex_action(&self) -> &SpaceAction {
        &self.vertex_action
    }

    pub fn edge_action(&self) -> &SpaceAction {
        &self.edge_action
    }

    /// The anchor `p(v)`.
    pub fn p(&self, v: usize) -> usize {
        self.vertex_action.anchor(v)
    }

    pub fn act_vertex(&self, g: usize, v: usize) -> Option<usize> {
        self.vertex_action.act(g, v)
    }

    pub fn act_edge(&self, g: usize, e: usize) -> Option<usize> {
        self.edge_action.act(g, e)
    }

    /// `g·(e₁…e_k) = (g·e₁)…(g·e_k)`.
    pub fn act_on_path(&self, g: usize, path: &Path) -> Result<Path> {
        let gr = self.groupoid();
        if g >= gr.num_arrows() {
            return Err(Error::Structural(format!("unknown arrow id {g}")));
        }
        if path.range >= self.graph.num_vertices()
            || !self.graph.is_path(&path.edges)
            || path.edges.first().is_some_and(|&e| self.graph.rng(e) != path.range)
        {
            return Err(Error::Precondition("not a composable path".into()));
        }
        if self.p(path.range) != gr.src(g) {
            return Err(Error::Precondition(format!(
                "arrow {} does not act on paths over {}",
                gr.arrow_label(g),
                gr.unit_label(self.p(path.range))
            )));
        }
        Ok(Path {
            range: self.vertex_action.apply(g, path.range),
            edges: path.edges.iter().map(|&e| self.edge_action.apply(g, e)).collect(),
        })
    }

    /// Per-unit fiber graphs `E_u`, in unit order.
    pub fn fiber_graphs(&self) -> Vec<FiberGraph> {
        let gr = self.groupoid();
        (0..gr.num_units())
            .map(|u| {
                let vertices: Vec<usize> = (0..self.graph.num_vertices()).filter(|&v| self.p(v) == u).collect();
                let edges: Vec<usize> =
                    (0..self.graph.num_edges()).filter(|&e| self.p(self.graph.rng(e)) == u).collect();
                let graph = self.graph.subgraph(&vertices, &edges).expect("fibers are closed");
                FiberGraph { unit: u, unit_label: gr.unit_label(u).to_string(), vertices, edges, graph }
            })
            .collect()
    }

    /// Vertex and edge orbits as a graph; only meaningful for free actions.
    pub fn orbit_quotient_graph_free(&self) -> Result<DirectedGraph> {
        if !self.vertex_action.is_free() || !self.edge_action.is_free() {
            return Err(Error::Precondition("action is not free".into()));
        }
        let vorb = self.vertex_action.orbits();
        let vidx = self.vertex_action.orbit_index();
        let eorb = self.edge_action.orbits();
        DirectedGraph::new(
            vorb.iter().map(|o| self.graph.vertex_label(o[0]).to_string()).collect(),
            eorb.iter().map(|o| self.graph.edge_label(o[0]).to_string()).collect(),
            eorb.iter().map(|o| vidx[self.graph.src(o[0])]).collect(),
            eorb.iter().map(|o| vidx[self.graph.rng(o[0])]).collect(),
        )
    }

    /// The induced action on paths of length `k ≥ 1`, anchored at `p(r(μ))`.
    pub fn path_action(&self, k: usize) -> (Vec<Vec<usize>>, SpaceAction) {
        let paths = self.graph.paths(k);
        let index: HashMap<&[usize], usize> = paths.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
        let labels = paths.iter().map(|p| self.graph.path_label(p)).collect();
        let anchor = paths.iter().map(|p| self.p(self.graph.rng(p[0]))).collect();
        let action = SpaceAction::new_unchecked(self.groupoid_arc().clone(), labels, anchor, |g, x| {
            let image: Vec<usize> = paths[x].iter().map(|&e| self.edge_action.apply(g, e)).collect();
            index[image.as_slice()]
        });
        (paths, action)
    }

    pub fn to_descriptor(&self) -> GraphActionDescriptor {
        let gr = self.groupoid();
        let mut vertex_action = Vec::new();
        let mut edge_action = Vec::new();
        for g in 0..gr.num_arrows() {
            for v in 0..self.graph.num_vertices() {
                if let Some(w) = self.act_vertex(g, v) {
                    vertex_action.push([
                        gr.arrow_label(g).to_string(),
                        self.graph.vertex_label(v).to_string(),
                        self.graph.vertex_label(w).to_string(),
                    ]);
                }
            }
            for e in 0..self.graph.num_edges() {
                if let Some(f) = self.act_edge(g, e) {
                    edge_action.push([
                        gr.arrow_label(g).to_string(),
                        self.graph.edge_label(e).to_string(),
                        self.graph.edge_label(f).to_string(),
                    ]);
                }
            }
        }
        GraphActionDescriptor {
            groupoid: GroupoidDescriptor::Explicit(gr.to_raw()),
            graph: self.graph.to_descriptor(),
            anchor: (0..self.graph.num_vertices())
                .map(|v| (self.graph.vertex_label(v).to_string(), gr.unit_label(self.p(v)).to_string()))
                .collect(),
            vertex_action,
            edge_action,
        }
    }
}

#[derive(Debug, Clone)]
pub struct FiberGraph {
    pub unit: usize,
    pub unit_label: String,
    /// Global vertex ids, in order.
    pub vertices: Vec<usize>,
    /// Global edge ids, in order.
    pub edges: Vec<usize>,
    pub graph: DirectedGraph,
}

/// Check both space actions and the compatibility conditions between them.
///
/// Size mismatches between the actions and the graph, or actions by different
/// groupoids, are structural errors.
pub fn validate_graph_action(a: &GraphAction) -> Result<ValidationReport> {
    let graph = &a.graph;
    if a.vertex_action.num_points() != graph.num_vertices() || a.edge_action.num_points() != graph.num_edges() {
        return Err(Error::Structural("action point sets do not match the graph".into()));
    }
    if !Arc::ptr_eq(a.vertex_action.groupoid_arc(), a.edge_action.groupoid_arc())
        && a.vertex_action.groupoid() != a.edge_action.groupoid()
    {
        return Err(Error::Structural("vertex and edge actions use different groupoids".into()));
    }
    let mut report = a.vertex_action.validate();
    report.merge(a.edge_action.validate());
    let gr = a.groupoid();
    let mut v = Vec::new();
    for e in 0..graph.num_edges() {
        let (ps, pr) = (a.p(graph.src(e)), a.p(graph.rng(e)));
        if ps != pr {
            v.push(Violation::new("anchor-compatibility", vec![graph.edge_label(e).to_string()]));
        }
        if a.edge_action.anchor(e) != pr {
            v.push(Violation::new("edge-anchor", vec![graph.edge_label(e).to_string()]));
        }
    }
    if !report.ok || !v.is_empty() {
        report.merge(ValidationReport::from_violations(v));
        return Ok(report);
    }
    for g in 0..gr.num_arrows() {
        for e in 0..graph.num_edges() {
            let Some(ge) = a.edge_action.act(g, e) else { continue };
            let w = || vec![gr.arrow_label(g).to_string(), graph.edge_label(e).to_string()];
            if a.vertex_action.act(g, graph.src(e)) != Some(graph.src(ge)) {
                v.push(Violation::new("source-equivariance", w()));
            }
            if a.vertex_action.act(g, graph.rng(e)) != Some(graph.rng(ge)) {
                v.push(Violation::new("range-equivariance", w()));
            }
        }
    }
    report.merge(ValidationReport::from_violations(v));
    Ok(report)
}

/// JSON form of a graph action. Action tables list `[arrow, point, image]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphActionDescriptor {
    pub groupoid: GroupoidDescriptor,
    pub graph: GraphDescriptor,
    /// vertex → unit
    pub anchor: BTreeMap<String, String>,
    pub vertex_action: Vec<[String; 3]>,
    pub edge_action: Vec<[String; 3]>,
}

impl GraphActionDescriptor {
    fn assemble(&self) -> Result<GraphAction> {
        let groupoid = Arc::new(self.groupoid.build()?);
        let graph = Arc::new(DirectedGraph::from_descriptor(&self.graph)?);
        let units: HashMap<&str, usize> =
            groupoid.unit_labels().iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
        let arrows = index_labels(groupoid.arrow_labels(), "arrow")?;
        let vs = index_labels(graph.vertex_labels(), "vertex")?;
        let es = index_labels(graph.edge_labels(), "edge")?;
        let mut anchor = vec![UNDEFINED; graph.num_vertices()];
        for (v, u) in &self.anchor {
            anchor[lookup(&vs, v, "vertex")?] = lookup(&units, u, "unit")?;
        }
        if let Some(v) = anchor.iter().position(|&u| u == UNDEFINED) {
            return Err(Error::Structural(format!("vertex {} has no anchor", graph.vertex_label(v))));
        }
        let table = |rows: &[[String; 3]], pts: &HashMap<&str, usize>, np: usize, what: &str| -> Result<Vec<usize>> {
            let mut t = vec![UNDEFINED; groupoid.num_arrows() * np];
            for [g, x, y] in rows {
                let (g, x, y) = (lookup(&arrows, g, "arrow")?, lookup(pts, x, what)?, lookup(pts, y, what)?);
                t[g * np + x] = y;
            }
            Ok(t)
        };
        let vt = table(&self.vertex_action, &vs, graph.num_vertices(), "vertex")?;
        let et = table(&self.edge_action, &es, graph.num_edges(), "edge")?;
        let edge_anchor = (0..graph.num_edges()).map(|e| anchor[graph.rng(e)]).collect();
        let va = SpaceAction::from_table(groupoid.clone(), graph.vertex_labels().to_vec(), anchor, vt);
        let ea = SpaceAction::from_table(groupoid, graph.edge_labels().to_vec(), edge_anchor, et);
        Ok(GraphAction::from_parts(graph, va, ea))
    }

    pub fn validate(&self) -> Result<ValidationReport> {
        let rep = self.groupoid.validate()?;
        if !rep.ok {
            return Ok(rep);
        }
        validate_graph_action(&self.assemble()?)
    }

    pub fn build(&self) -> Result<GraphAction> {
        let a = self.assemble()?;
        validate_graph_action(&a)?.into_result()?;
        Ok(a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;
    use crate::groupoid::build_transitive_groupoid;

    fn two_loops() -> DirectedGraph {
        DirectedGraph::from_edges(&["x", "y"], &[("e", 0, 0), ("f", 1, 1)]).unwrap()
    }

    #[test]
    fn graph_basics() {
        let g = DirectedGraph::from_edges(&["u", "v"], &[("a", 0, 1), ("b", 1, 1), ("c", 1, 0)]).unwrap();
        assert_eq!(g.adjacency(), vec![vec![0, 1], vec![1, 1]]);
        assert!(g.flags().no_sources);
        assert_eq!(g.paths(2).len(), 5);
        assert!(g.is_path(&[0, 2]));
        assert!(!g.is_path(&[2, 2]));
        let back = DirectedGraph::from_descriptor(&g.to_descriptor()).unwrap();
        assert_eq!(back, g);
        let h = DirectedGraph::from_edges(&["u", "v"], &[("a", 0, 1)]).unwrap();
        let f = h.flags();
        assert_eq!(f.sources, vec!["u".to_string()]);
        assert_eq!(f.sinks, vec!["v".to_string()]);
    }

    #[test]
    fn dangling_vertex_is_structural() {
        let d = GraphDescriptor {
            vertices: vec!["u".into()],
            edges: vec![EdgeDescriptor { id: "a".into(), src: "u".into(), rng: "w".into() }],
        };
        assert!(matches!(DirectedGraph::from_descriptor(&d), Err(Error::Structural(_))));
    }

    #[test]
    fn dot_is_deterministic() {
        let g = two_loops();
        assert_eq!(g.to_dot("E"), g.to_dot("E"));
        assert!(g.to_dot("E").contains("\"x\" -> \"x\" [label=\"e\"]"));
    }

    #[test]
    fn trivial_action_is_valid_and_quotient_is_graph() {
        let a = GraphAction::trivial(two_loops());
        assert_eq!(a.orbit_quotient_graph_free().unwrap().adjacency(), two_loops().adjacency());
        let fibers = a.fiber_graphs();
        assert_eq!(fibers.len(), 1);
        assert_eq!(fibers[0].graph, two_loops());
        let p = Path::from_edges(a.graph(), vec![0, 0]).unwrap();
        assert_eq!(a.act_on_path(0, &p).unwrap(), p);
    }

    #[test]
    fn z2_swap_of_loops() {
        let g = Arc::new(FiniteGroupoid::from_group("*", &FiniteGroup::cyclic(2)));
        let a = GraphAction::new(g, Arc::new(two_loops()), vec![0, 0], |k, v| if k == 0 { v } else { 1 - v }, |k, e| {
            if k == 0 {
                e
            } else {
                1 - e
            }
        })
        .unwrap();
        let q = a.orbit_quotient_graph_free().unwrap();
        assert_eq!((q.num_vertices(), q.num_edges()), (1, 1));
        let empty = Path::vertex(0);
        assert_eq!(a.act_on_path(1, &empty).unwrap(), Path::vertex(1));
    }

    #[test]
    fn non_equivariant_edge_action_is_witnessed() {
        // swap the edges but fix the vertices
        let g = Arc::new(FiniteGroupoid::from_group("*", &FiniteGroup::cyclic(2)));
        let graph = Arc::new(two_loops());
        let va = SpaceAction::new_unchecked(g.clone(), graph.vertex_labels().to_vec(), vec![0, 0], |_, v| v);
        let ea = SpaceAction::new_unchecked(g, graph.edge_labels().to_vec(), vec![0, 0], |k, e| if k == 0 { e } else { 1 - e });
        let a = GraphAction::from_parts(graph, va, ea);
        let rep = validate_graph_action(&a).unwrap();
        assert!(rep.has("range-equivariance"));
        let w = &rep.violations.iter().find(|v| v.axiom == "range-equivariance").unwrap().witness;
        assert_eq!(w, &vec!["(*,1,*)".to_string(), "e".to_string()]);
    }

    #[test]
    fn pair_groupoid_on_two_copies() {
        // two copies of a 2-cycle, the pair groupoid swapping copies
        let graph = DirectedGraph::from_edges(
            &["p0", "q0", "p1", "q1"],
            &[("a0", 0, 1), ("b0", 1, 0), ("a1", 2, 3), ("b1", 3, 2)],
        )
        .unwrap();
        let g = Arc::new(build_transitive_groupoid(&["c0".into(), "c1".into()], &FiniteGroup::trivial()).unwrap());
        let a = GraphAction::new(
            g.clone(),
            Arc::new(graph),
            vec![0, 0, 1, 1],
            |x, v| 2 * g.rng(x) + v % 2,
            |x, e| 2 * g.rng(x) + e % 2,
        )
        .unwrap();
        let q = a.orbit_quotient_graph_free().unwrap();
        assert_eq!(q.adjacency(), vec![vec![0, 1], vec![1, 0]]);
        let fibers = a.fiber_graphs();
        assert_eq!(fibers.iter().map(|f| f.graph.num_edges()).sum::<usize>(), 4);
        let (paths, pa) = a.path_action(2);
        assert_eq!(paths.len(), 4);
        assert!(pa.validate().ok);
    }

    #[test]
    fn descriptor_round_trip() {
        let a = GraphAction::trivial(two_loops());
        let d = a.to_descriptor();
        let json = serde_json::to_string(&d).unwrap();
        let back: GraphActionDescriptor = serde_json::from_str(&json).unwrap();
        assert!(back.validate().unwrap().ok);
        assert_eq!(back.build().unwrap().graph(), a.graph());
    }
}
