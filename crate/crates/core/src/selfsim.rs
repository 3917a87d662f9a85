//! Self-similar groupoid actions on path spaces, presented by automata.
//!
//! Paths are written range-to-source and `vE*` means paths with range `v`. A
//! generator `g` with `src(g) = u` moves an edge `e` with `r(e) = u` to `g·e`
//! and leaves a restriction `g|_e`, so that `g·(eμ) = (g·e)(g|_e·μ)`.
//! Words act right to left.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, ValidationReport, Violation};
use crate::graph::{DirectedGraph, GraphAction, GraphDescriptor, Path};
use crate::groupoid::FiniteGroupoid;

/// Largest groupoid the forest construction will tabulate.
pub const MAX_FOREST_ARROWS: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    Unit(usize),
    Gen(usize),
    Inv(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<Letter>);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorDescriptor {
    pub id: String,
    pub src: String,
    pub rng: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionDescriptor {
    pub gen: String,
    pub edge: String,
    pub out_edge: String,
    pub restriction: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomatonDescriptor {
    pub graph: GraphDescriptor,
    pub generators: Vec<GeneratorDescriptor>,
    pub transitions: Vec<TransitionDescriptor>,
}

#[derive(Debug, Clone)]
struct Generator {
    id: String,
    src: usize,
    rng: usize,
}

#[derive(Debug, Clone)]
pub struct SelfSimilarAutomaton {
    graph: DirectedGraph,
    gens: Vec<Generator>,
    /// `out[g][e] = (g·e, g|_e)` for `r(e) = src(g)`.
    out: Vec<HashMap<usize, (usize, Word)>>,
    /// `back[g][g·e] = e`.
    back: Vec<HashMap<usize, usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathOrbit {
    pub paths: Vec<Path>,
    /// Word length at which the search stopped.
    pub word_length: usize,
    pub saturated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Equivalence {
    EqualToDepth { depth: usize },
    Distinguished { depth: usize, witness: Path, left: Path, right: Path },
}

impl SelfSimilarAutomaton {
    /// Build and validate. `transitions` lists `(g, e, g·e, g|_e)`.
    pub fn new(
        graph: DirectedGraph,
        generators: Vec<(String, usize, usize)>,
        transitions: Vec<(usize, usize, usize, Word)>,
    ) -> Result<Self> {
        let nv = graph.num_vertices();
        let ne = graph.num_edges();
        let mut ids = BTreeSet::new();
        for (id, s, r) in &generators {
            if *s >= nv || *r >= nv {
                return Err(Error::Structural(format!("generator {id} has endpoints outside the vertex set")));
            }
            if !ids.insert(id.clone()) || graph.vertex_index(id).is_some() || id.ends_with("^-1") || id.is_empty() {
                return Err(Error::Structural(format!("generator id {id:?} is duplicated or clashes with a vertex")));
            }
        }
        let gens: Vec<Generator> = generators.into_iter().map(|(id, src, rng)| Generator { id, src, rng }).collect();
        let mut out = vec![HashMap::new(); gens.len()];
        let mut back = vec![HashMap::new(); gens.len()];
        let mut v = Vec::new();
        for (g, e, ge, w) in transitions {
            if g >= gens.len() || e >= ne || ge >= ne {
                return Err(Error::Structural("transition refers to an unknown generator or edge".into()));
            }
            if w.0.is_empty() {
                return Err(Error::Structural("restriction words are nonempty; use a unit letter".into()));
            }
            if out[g].insert(e, (ge, w)).is_some() {
                return Err(Error::Structural(format!(
                    "duplicate transition for ({}, {})",
                    gens[g].id,
                    graph.edge_label(e)
                )));
            }
        }
        let mut a = SelfSimilarAutomaton { graph, gens, out, back: Vec::new() };
        let no_sources = a.graph.flags().no_sources;
        if !no_sources {
            v.push(Violation::new("no-sources", a.graph.flags().sources));
        }
        for g in 0..a.gens.len() {
            let gl = a.gens[g].id.clone();
            let domain = a.graph.edges_into(a.gens[g].src);
            for &e in &domain {
                let el = a.graph.edge_label(e).to_string();
                let Some((ge, w)) = a.out[g].get(&e).cloned() else {
                    v.push(Violation::new("totality", vec![gl.clone(), el]));
                    continue;
                };
                if a.graph.rng(ge) != a.gens[g].rng {
                    v.push(Violation::new("output-range", vec![gl.clone(), el.clone()]));
                }
                match a.endpoints(&w) {
                    Ok((s, r)) if s == a.graph.src(e) && r == a.graph.src(ge) => {}
                    _ => v.push(Violation::new("restriction-endpoints", vec![gl.clone(), el.clone()])),
                }
                if back[g].insert(ge, e).is_some() {
                    v.push(Violation::new("bijectivity", vec![gl.clone(), a.graph.edge_label(ge).to_string()]));
                }
            }
            for &e in a.out[g].keys() {
                if a.graph.rng(e) != a.gens[g].src {
                    v.push(Violation::new("transition-domain", vec![gl.clone(), a.graph.edge_label(e).to_string()]));
                }
            }
            if back[g].len() != a.graph.edges_into(a.gens[g].rng).len() {
                v.push(Violation::new("bijectivity", vec![gl.clone()]));
            }
        }
        ValidationReport::from_violations(v).into_result()?;
        a.back = back;
        Ok(a)
    }

    pub fn from_descriptor(d: &AutomatonDescriptor) -> Result<Self> {
        let graph = DirectedGraph::from_descriptor(&d.graph)?;
        let vertex = |l: &str| graph.vertex_index(l).ok_or_else(|| Error::Structural(format!("dangling vertex id {l}")));
        let mut gens = Vec::new();
        for g in &d.generators {
            gens.push((g.id.clone(), vertex(&g.src)?, vertex(&g.rng)?));
        }
        let names: Vec<String> = gens.iter().map(|g| g.0.clone()).collect();
        let edge = |l: &str| graph.edge_index(l).ok_or_else(|| Error::Structural(format!("dangling edge id {l}")));
        let mut trans = Vec::new();
        for t in &d.transitions {
            let g = names
                .iter()
                .position(|n| n == &t.gen)
                .ok_or_else(|| Error::Structural(format!("dangling generator id {}", t.gen)))?;
            let letters = t
                .restriction
                .iter()
                .map(|s| parse_letter(s, &names, &graph).ok_or_else(|| Error::Structural(format!("unknown letter {s}"))))
                .collect::<Result<Vec<_>>>()?;
            trans.push((g, edge(&t.edge)?, edge(&t.out_edge)?, Word(letters)));
        }
        SelfSimilarAutomaton::new(graph, gens, trans)
    }

    pub fn to_descriptor(&self) -> AutomatonDescriptor {
        let vl = |v: usize| self.graph.vertex_label(v).to_string();
        let mut transitions = Vec::new();
        for g in 0..self.gens.len() {
            let mut keys: Vec<_> = self.out[g].keys().copied().collect();
            keys.sort();
            for e in keys {
                let (ge, w) = &self.out[g][&e];
                transitions.push(TransitionDescriptor {
                    gen: self.gens[g].id.clone(),
                    edge: self.graph.edge_label(e).to_string(),
                    out_edge: self.graph.edge_label(*ge).to_string(),
                    restriction: w.0.iter().map(|&x| self.letter_label(x)).collect(),
                });
            }
        }
        AutomatonDescriptor {
            graph: self.graph.to_descriptor(),
            generators: self
                .gens
                .iter()
                .map(|g| GeneratorDescriptor { id: g.id.clone(), src: vl(g.src), rng: vl(g.rng) })
                .collect(),
            transitions,
        }
    }

    pub fn graph(&self) -> &DirectedGraph {
        &self.graph
    }

    pub fn num_generators(&self) -> usize {
        self.gens.len()
    }

    pub fn generator_index(&self, id: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.id == id)
    }

    pub fn letter_src(&self, x: Letter) -> usize {
        match x {
            Letter::Unit(v) => v,
            Letter::Gen(g) => self.gens[g].src,
            Letter::Inv(g) => self.gens[g].rng,
        }
    }

    pub fn letter_rng(&self, x: Letter) -> usize {
        match x {
            Letter::Unit(v) => v,
            Letter::Gen(g) => self.gens[g].rng,
            Letter::Inv(g) => self.gens[g].src,
        }
    }

    pub fn letter_label(&self, x: Letter) -> String {
        match x {
            Letter::Unit(v) => self.graph.vertex_label(v).to_string(),
            Letter::Gen(g) => self.gens[g].id.clone(),
            Letter::Inv(g) => format!("{}^-1", self.gens[g].id),
        }
    }

    /// Letters concatenated; separated by `.` unless every name is one character.
    pub fn word_label(&self, w: &Word) -> String {
        let parts: Vec<String> = w.0.iter().map(|&x| self.letter_label(x)).collect();
        let sep = if parts.iter().all(|p| p.chars().count() == 1) { "" } else { "." };
        parts.join(sep)
    }

    /// Parse a word: tokens split on whitespace, `.` or `,`; within a token the
    /// longest matching letter name is taken first.
    pub fn parse_word(&self, s: &str) -> Result<Word> {
        let names: Vec<String> = self.gens.iter().map(|g| g.id.clone()).collect();
        let mut letters = Vec::new();
        for tok in s.split(|c: char| c.is_whitespace() || c == '.' || c == ',').filter(|t| !t.is_empty()) {
            let mut rest = tok;
            while !rest.is_empty() {
                let best = (1..=rest.len())
                    .rev()
                    .filter(|&n| rest.is_char_boundary(n))
                    .find_map(|n| parse_letter(&rest[..n], &names, &self.graph).map(|x| (n, x)));
                let (n, x) = best.ok_or_else(|| Error::Precondition(format!("cannot parse word {s:?} at {rest:?}")))?;
                letters.push(x);
                rest = &rest[n..];
            }
        }
        if letters.is_empty() {
            return Err(Error::Precondition("empty word; use a unit letter".into()));
        }
        let w = Word(letters);
        self.endpoints(&w)?;
        Ok(w)
    }

    /// Parse a path from concatenated edge labels (or a vertex label for length 0).
    pub fn parse_path(&self, s: &str) -> Result<Path> {
        if let Some(v) = self.graph.vertex_index(s) {
            return Ok(Path::vertex(v));
        }
        let mut edges = Vec::new();
        for tok in s.split(|c: char| c.is_whitespace() || c == '.' || c == ',').filter(|t| !t.is_empty()) {
            let mut rest = tok;
            while !rest.is_empty() {
                let n = (1..=rest.len())
                    .rev()
                    .filter(|&n| rest.is_char_boundary(n))
                    .find(|&n| self.graph.edge_index(&rest[..n]).is_some())
                    .ok_or_else(|| Error::Precondition(format!("cannot parse path {s:?} at {rest:?}")))?;
                edges.push(self.graph.edge_index(&rest[..n]).expect("found"));
                rest = &rest[n..];
            }
        }
        Path::from_edges(&self.graph, edges)
    }

    pub fn path_label(&self, p: &Path) -> String {
        if p.edges.is_empty() {
            self.graph.vertex_label(p.range).to_string()
        } else {
            self.graph.path_label(&p.edges)
        }
    }

    /// `(src(w), rng(w))`, or an error if adjacent letters do not compose.
    pub fn endpoints(&self, w: &Word) -> Result<(usize, usize)> {
        let (Some(&first), Some(&last)) = (w.0.first(), w.0.last()) else {
            return Err(Error::Precondition("empty word".into()));
        };
        let known = |x: &Letter| match *x {
            Letter::Unit(v) => v < self.graph.num_vertices(),
            Letter::Gen(g) | Letter::Inv(g) => g < self.gens.len(),
        };
        if let Some(x) = w.0.iter().find(|x| !known(x)) {
            return Err(Error::Precondition(format!("unknown letter {x:?}")));
        }
        for pair in w.0.windows(2) {
            if self.letter_src(pair[0]) != self.letter_rng(pair[1]) {
                return Err(Error::Precondition(format!(
                    "letters {} and {} do not compose",
                    self.letter_label(pair[0]),
                    self.letter_label(pair[1])
                )));
            }
        }
        Ok((self.letter_src(last), self.letter_rng(first)))
    }

    pub fn inverse(&self, w: &Word) -> Word {
        Word(
            w.0.iter()
                .rev()
                .map(|&x| match x {
                    Letter::Unit(v) => Letter::Unit(v),
                    Letter::Gen(g) => Letter::Inv(g),
                    Letter::Inv(g) => Letter::Gen(g),
                })
                .collect(),
        )
    }

    pub fn concat(&self, w1: &Word, w2: &Word) -> Result<Word> {
        let mut v = w1.0.clone();
        v.extend(&w2.0);
        let w = Word(v);
        self.endpoints(&w)?;
        Ok(w)
    }

    fn letter_on_edge(&self, x: Letter, e: usize) -> (usize, Word) {
        match x {
            Letter::Unit(_) => (e, Word(vec![Letter::Unit(self.graph.src(e))])),
            Letter::Gen(g) => self.out[g][&e].clone(),
            Letter::Inv(g) => {
                let e0 = self.back[g][&e];
                (e0, self.inverse(&self.out[g][&e0].1))
            }
        }
    }

    /// Drop unit letters unless nothing else is left.
    fn normalize(&self, letters: Vec<Letter>, unit: usize) -> Word {
        let kept: Vec<Letter> = letters.into_iter().filter(|x| !matches!(x, Letter::Unit(_))).collect();
        if kept.is_empty() {
            Word(vec![Letter::Unit(unit)])
        } else {
            Word(kept)
        }
    }

    /// `(w·μ, w|_μ)`.
    pub fn act_and_restrict(&self, w: &Word, mu: &Path) -> Result<(Path, Word)> {
        let (src, rng) = self.endpoints(w)?;
        if mu.range != src {
            return Err(Error::Precondition(format!(
                "path {} has range {} but the word starts at {}",
                self.path_label(mu),
                self.graph.vertex_label(mu.range),
                self.graph.vertex_label(src)
            )));
        }
        let mut cur = self.normalize(w.0.clone(), src);
        let mut edges = Vec::with_capacity(mu.edges.len());
        for &e in &mu.edges {
            let mut edge = e;
            let mut residuals: Vec<Word> = Vec::with_capacity(cur.0.len());
            for &x in cur.0.iter().rev() {
                let (ne, r) = self.letter_on_edge(x, edge);
                edge = ne;
                residuals.push(r);
            }
            residuals.reverse();
            edges.push(edge);
            cur = self.normalize(residuals.into_iter().flat_map(|r| r.0).collect(), self.graph.src(e));
        }
        debug_assert_eq!(self.endpoints(&cur).map(|(s, _)| s).ok(), Some(mu.source(&self.graph)));
        Ok((Path { range: rng, edges }, cur))
    }

    pub fn act_path(&self, w: &Word, mu: &Path) -> Result<Path> {
        Ok(self.act_and_restrict(w, mu)?.0)
    }

    pub fn restriction(&self, w: &Word, mu: &Path) -> Result<Word> {
        Ok(self.act_and_restrict(w, mu)?.1)
    }

    /// Letters that can act on a path with range `v`: generators, inverses.
    fn letters_at(&self, v: usize) -> Vec<Letter> {
        let mut out = Vec::new();
        for (g, gen) in self.gens.iter().enumerate() {
            if gen.src == v {
                out.push(Letter::Gen(g));
            }
            if gen.rng == v {
                out.push(Letter::Inv(g));
            }
        }
        out
    }

    /// Paths reachable from `mu` by words of length at most `bound` (until
    /// saturation when `bound` is `None`).
    pub fn orbit_of_path(&self, mu: &Path, bound: Option<usize>) -> Result<PathOrbit> {
        if !mu.edges.is_empty() && !self.graph.is_path(&mu.edges) || mu.range >= self.graph.num_vertices() {
            return Err(Error::Precondition("not a path".into()));
        }
        let mut seen: BTreeSet<Path> = BTreeSet::from([mu.clone()]);
        let mut frontier = vec![mu.clone()];
        let mut length = 0;
        while !frontier.is_empty() && bound.is_none_or(|b| length < b) {
            let mut next = Vec::new();
            for p in &frontier {
                for x in self.letters_at(p.range) {
                    let q = self.act_path(&Word(vec![x]), p)?;
                    if seen.insert(q.clone()) {
                        next.push(q);
                    }
                }
            }
            frontier = next;
            length += 1;
        }
        let saturated = frontier.is_empty();
        Ok(PathOrbit { paths: seen.into_iter().collect(), word_length: length, saturated })
    }

    /// All paths of length at most `depth` with range `v`, shortest first.
    pub fn paths_into_up_to(&self, v: usize, depth: usize) -> Vec<Path> {
        (0..=depth)
            .flat_map(|k| {
                self.graph.paths_into(v, k).into_iter().map(move |edges| Path { range: v, edges })
            })
            .collect()
    }

    /// Compare the actions of two words on every path of length `≤ depth`.
    pub fn depth_bounded_equivalence(&self, w1: &Word, w2: &Word, depth: usize) -> Result<Equivalence> {
        let e1 = self.endpoints(w1)?;
        let e2 = self.endpoints(w2)?;
        if e1 != e2 {
            return Err(Error::Precondition("words have different endpoints".into()));
        }
        for mu in self.paths_into_up_to(e1.0, depth) {
            let left = self.act_path(w1, &mu)?;
            let right = self.act_path(w2, &mu)?;
            if left != right {
                return Ok(Equivalence::Distinguished { depth, witness: mu, left, right });
            }
        }
        Ok(Equivalence::EqualToDepth { depth })
    }

    /// The groupoid generated at depth `k` (words up to their action on paths of
    /// length `≤ k`) acting on the truncated forest.
    pub fn induced_forest_action(&self, k: usize) -> Result<GraphAction> {
        let (forest, paths) = forest_with_paths(&self.graph, k);
        let index: HashMap<&Path, usize> = paths.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let nv = self.graph.num_vertices();
        let by_range: Vec<Vec<usize>> =
            (0..nv).map(|v| (0..paths.len()).filter(|&i| paths[i].range == v).collect()).collect();
        // an arrow is (src, rng, image of each forest vertex over src, in by_range order)
        type Key = (usize, usize, Vec<usize>);
        let mut arrows: Vec<Key> = Vec::new();
        let mut words: Vec<Word> = Vec::new();
        let mut lookup: HashMap<Key, usize> = HashMap::new();
        let mut add = |key: Key, w: Word, arrows: &mut Vec<Key>, words: &mut Vec<Word>| -> Result<bool> {
            if lookup.contains_key(&key) {
                return Ok(false);
            }
            if arrows.len() >= MAX_FOREST_ARROWS {
                return Err(Error::BoundExceeded(format!("more than {MAX_FOREST_ARROWS} arrows at depth {k}")));
            }
            lookup.insert(key.clone(), arrows.len());
            arrows.push(key);
            words.push(w);
            Ok(true)
        };
        for v in 0..nv {
            add((v, v, by_range[v].clone()), Word(vec![Letter::Unit(v)]), &mut arrows, &mut words)?;
        }
        let mut queue: VecDeque<usize> = (0..nv).collect();
        while let Some(i) = queue.pop_front() {
            let (_, r, _) = arrows[i].clone();
            for x in self.letters_at(r) {
                let w = self.concat(&Word(vec![x]), &words[i])?;
                let (s, rr) = self.endpoints(&w)?;
                let mut img = Vec::with_capacity(by_range[s].len());
                for &p in &by_range[s] {
                    img.push(index[&self.act_path(&w, &paths[p])?]);
                }
                if add((s, rr, img), w, &mut arrows, &mut words)? {
                    queue.push_back(arrows.len() - 1);
                }
            }
        }
        let n = arrows.len();
        // position of each forest vertex inside its by_range list
        let mut slot = vec![0; paths.len()];
        for list in &by_range {
            for (j, &p) in list.iter().enumerate() {
                slot[p] = j;
            }
        }
        let apply = |g: usize, p: usize| arrows[g].2[slot[p]];
        let compose = |g: usize, h: usize| {
            let (s, _, _) = &arrows[h];
            let img: Vec<usize> = by_range[*s].iter().map(|&p| apply(g, apply(h, p))).collect();
            lookup[&(*s, arrows[g].1, img)]
        };
        let mut labels: Vec<String> = (0..n).map(|i| self.word_label(&words[i])).collect();
        for v in 0..nv {
            labels[v] = self.graph.vertex_label(v).to_string();
        }
        let groupoid = FiniteGroupoid::from_fn(
            self.graph.vertex_labels().to_vec(),
            labels,
            arrows.iter().map(|a| a.0).collect(),
            arrows.iter().map(|a| a.1).collect(),
            (0..nv).collect(),
            compose,
        )?;
        let anchor: Vec<usize> = paths.iter().map(|p| p.range).collect();
        // forest edge t has source path μe = paths[t + nv]
        GraphAction::new(
            Arc::new(groupoid),
            Arc::new(forest),
            anchor,
            apply,
            |g, t| apply(g, t + nv) - nv,
        )
    }
}

fn parse_letter(s: &str, gens: &[String], graph: &DirectedGraph) -> Option<Letter> {
    if let Some(base) = s.strip_suffix("^-1") {
        return gens.iter().position(|g| g == base).map(Letter::Inv);
    }
    gens.iter()
        .position(|g| g == s)
        .map(Letter::Gen)
        .or_else(|| graph.vertex_index(s).map(Letter::Unit))
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Vertices are the paths of length `≤ k` (vertices of `E` first, then by
/// length and edge ids); each path `μe` of positive length contributes the tree
/// edge `(μ, μe)` with source `μe` and range `μ`.
fn forest_with_paths(graph: &DirectedGraph, k: usize) -> (DirectedGraph, Vec<Path>) {
    let mut paths: Vec<Path> = (0..graph.num_vertices()).map(Path::vertex).collect();
    for len in 1..=k {
        let mut layer: Vec<Path> = (0..graph.num_vertices())
            .flat_map(|v| graph.paths_into(v, len).into_iter().map(move |edges| Path { range: v, edges }))
            .collect();
        layer.sort_by(|a, b| a.edges.cmp(&b.edges));
        paths.extend(layer);
    }
    let label = |p: &Path| {
        if p.edges.is_empty() {
            graph.vertex_label(p.range).to_string()
        } else {
            graph.path_label(&p.edges)
        }
    };
    let index: HashMap<&Path, usize> = paths.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let nv = graph.num_vertices();
    let mut vlabels: Vec<String> = paths.iter().map(label).collect();
    // concatenated labels can collide; fall back to dotted labels
    if vlabels.iter().collect::<BTreeSet<_>>().len() != vlabels.len() {
        vlabels = paths
            .iter()
            .map(|p| {
                if p.edges.is_empty() {
                    label(p)
                } else {
                    p.edges.iter().map(|&e| graph.edge_label(e)).collect::<Vec<_>>().join(".")
                }
            })
            .collect();
    }
    let elabels: Vec<String> = vlabels[nv..].iter().map(|l| format!("~{l}")).collect();
    let src: Vec<usize> = (nv..paths.len()).collect();
    let rng: Vec<usize> = paths[nv..]
        .iter()
        .map(|p| {
            let parent = if p.edges.len() == 1 {
                Path::vertex(p.range)
            } else {
                Path { range: p.range, edges: p.edges[..p.edges.len() - 1].to_vec() }
            };
            index[&parent]
        })
        .collect();
    let forest = DirectedGraph::new(vlabels, elabels, src, rng).expect("forest labels are unique");
    (forest, paths)
}

/// The forest of paths of length `≤ k`, one rooted tree per vertex of `graph`.
pub fn forest(graph: &DirectedGraph, k: usize) -> DirectedGraph {
    forest_with_paths(graph, k).0
}
