//! Random instances for property tests and fuzzing.
//!
//! A transitive groupoid `U × K × U` acts on a graph whose fiber over each unit
//! is a copy of one `K`-graph: vertices form a union of coset spaces `K/L`, and
//! each edge orbit is a coset space `K/M` mapped by `kM ↦ (k·x, k·y)` for
//! vertices `x`, `y` with `M ≤ Stab(x) ∩ Stab(y)`.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::{DirectedGraph, GraphAction};
use crate::group::FiniteGroup;
use crate::groupoid::{build_transitive_groupoid, disjoint_union, FiniteGroupoid, GroupoidOnGroupoidAction, SpaceAction};

/// Isotropy groups used by the generators.
pub fn isotropy_pool() -> Vec<(&'static str, FiniteGroup)> {
    let c2 = FiniteGroup::cyclic(2);
    vec![
        ("Z2", c2.clone()),
        ("Z3", FiniteGroup::cyclic(3)),
        ("Z4", FiniteGroup::cyclic(4)),
        ("S3", FiniteGroup::symmetric(3)),
        ("Z2xZ2", FiniteGroup::direct_product(&c2, &c2)),
    ]
}

#[derive(Debug, Clone)]
pub struct InstanceParams {
    pub max_units: usize,
    pub max_vertices: usize,
    pub max_edges: usize,
    pub max_vertex_orbits: usize,
    /// Only trivial stabilizers (free actions).
    pub free: bool,
    /// Chance of building a disjoint union of two independent components.
    pub two_components: f64,
}

impl Default for InstanceParams {
    fn default() -> Self {
        InstanceParams {
            max_units: 2,
            max_vertices: 6,
            max_edges: 14,
            max_vertex_orbits: 3,
            free: false,
            two_components: 0.2,
        }
    }
}

/// A `K`-set as a union of left coset spaces; point `i` is `(block, coset)`.
struct KSet {
    /// `act[k][x]`
    act: Vec<Vec<usize>>,
    stab: Vec<Vec<usize>>,
}

fn coset_space(k: &FiniteGroup, sub: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = BTreeSet::new();
    let mut cosets = Vec::new();
    for g in 0..k.order() {
        let mut c: Vec<usize> = sub.iter().map(|&h| k.mul(g, h)).collect();
        c.sort_unstable();
        if seen.insert(c.clone()) {
            cosets.push(c);
        }
    }
    cosets
}

fn kset(k: &FiniteGroup, subs: &[Vec<usize>]) -> KSet {
    let mut points: Vec<(usize, Vec<usize>)> = Vec::new();
    for (b, s) in subs.iter().enumerate() {
        points.extend(coset_space(k, s).into_iter().map(|c| (b, c)));
    }
    let index = |b: usize, c: &Vec<usize>| points.iter().position(|p| p.0 == b && p.1 == *c).expect("coset");
    let act: Vec<Vec<usize>> = (0..k.order())
        .map(|g| {
            points
                .iter()
                .map(|(b, p)| {
                    let mut c: Vec<usize> = p.iter().map(|&x| k.mul(g, x)).collect();
                    c.sort_unstable();
                    index(*b, &c)
                })
                .collect()
        })
        .collect();
    let stab = (0..points.len()).map(|x| (0..k.order()).filter(|&g| act[g][x] == x).collect()).collect();
    KSet { act, stab }
}

struct Component {
    groupoid: FiniteGroupoid,
    graph_vertices: Vec<(String, usize)>,
    edges: Vec<(String, usize, usize)>,
    vertex_act: Vec<usize>,
    edge_act: Vec<usize>,
}

fn component<R: Rng>(rng: &mut R, p: &InstanceParams, k: &FiniteGroup, tag: &str) -> Option<Component> {
    let subs_all = k.subgroups();
    let trivial = vec![k.identity()];
    let nu = rng.gen_range(1..=p.max_units.max(1));
    let per_unit_vertices = p.max_vertices / nu;
    if per_unit_vertices == 0 {
        return None;
    }
    // vertex K-set
    let orbits = rng.gen_range(1..=p.max_vertex_orbits.max(1));
    let mut subs = Vec::new();
    let mut size = 0;
    for _ in 0..orbits {
        let choices: Vec<&Vec<usize>> = if p.free {
            vec![&trivial]
        } else {
            subs_all.iter().filter(|s| size + k.order() / s.len() <= per_unit_vertices).collect()
        };
        let Some(&s) = choices.choose(rng) else { break };
        if size + k.order() / s.len() > per_unit_vertices {
            break;
        }
        size += k.order() / s.len();
        subs.push(s.clone());
    }
    if subs.is_empty() {
        return None;
    }
    let x = kset(k, &subs);
    let nx = x.act[0].len();
    // edge orbits
    let budget = p.max_edges / nu;
    let mut edge_orbits: Vec<(usize, usize, Vec<Vec<usize>>)> = Vec::new();
    let mut used = 0;
    for _ in 0..8 {
        let (a, b) = (rng.gen_range(0..nx), rng.gen_range(0..nx));
        let common: Vec<usize> = x.stab[a].iter().copied().filter(|g| x.stab[b].contains(g)).collect();
        let cands: Vec<&Vec<usize>> = if p.free {
            vec![&trivial]
        } else {
            subs_all.iter().filter(|s| s.iter().all(|g| common.contains(g))).collect()
        };
        let m = (*cands.choose(rng).expect("trivial subgroup qualifies")).clone();
        let cosets = coset_space(k, &m);
        if used + cosets.len() > budget {
            continue;
        }
        used += cosets.len();
        edge_orbits.push((a, b, cosets));
    }
    let units: Vec<String> = (0..nu).map(|u| format!("{tag}u{u}")).collect();
    let groupoid = build_transitive_groupoid(&units, k).expect("units");
    let nk = k.order();
    let graph_vertices: Vec<(String, usize)> =
        (0..nu).flat_map(|u| (0..nx).map(move |i| (u, i))).map(|(u, i)| (format!("{tag}x{i}@{u}"), u)).collect();
    let mut edges = Vec::new();
    let mut edge_keys = Vec::new();
    for u in 0..nu {
        for (j, (a, b, cosets)) in edge_orbits.iter().enumerate() {
            for (c, coset) in cosets.iter().enumerate() {
                let g = coset[0];
                let r = u * nx + x.act[g][*a];
                let s = u * nx + x.act[g][*b];
                edges.push((format!("{tag}e{j}.{c}@{u}"), s, r));
                edge_keys.push((u, j, c));
            }
        }
    }
    let unpack = |arrow: usize| (arrow / (nk * nu), (arrow / nu) % nk, arrow % nu);
    let na = groupoid.num_arrows();
    let nv = graph_vertices.len();
    let ne = edges.len();
    let mut vertex_act = vec![0; na * nv];
    let mut edge_act = vec![0; na * ne];
    for arrow in 0..na {
        let (v, g, u) = unpack(arrow);
        for i in 0..nx {
            vertex_act[arrow * nv + u * nx + i] = v * nx + x.act[g][i];
        }
        for (e, &(eu, j, c)) in edge_keys.iter().enumerate() {
            if eu != u {
                continue;
            }
            let cosets = &edge_orbits[j].2;
            let mut img: Vec<usize> = cosets[c].iter().map(|&h| k.mul(g, h)).collect();
            img.sort_unstable();
            let c2 = cosets.iter().position(|cc| *cc == img).expect("coset image");
            let target = edge_keys.iter().position(|&key| key == (v, j, c2)).expect("edge");
            edge_act[arrow * ne + e] = target;
        }
    }
    Some(Component { groupoid, graph_vertices, edges, vertex_act, edge_act })
}

fn assemble(parts: Vec<Component>) -> GraphAction {
    let refs: Vec<&FiniteGroupoid> = parts.iter().map(|c| &c.groupoid).collect();
    let groupoid = Arc::new(disjoint_union(&refs));
    let (mut vl, mut anchor, mut el, mut src, mut rng) = (vec![], vec![], vec![], vec![], vec![]);
    let mut offs = Vec::new();
    let (mut uo, mut ao, mut vo, mut eo) = (0, 0, 0, 0);
    for c in &parts {
        offs.push((uo, ao, vo, eo));
        for (l, u) in &c.graph_vertices {
            vl.push(l.clone());
            anchor.push(u + uo);
        }
        for (l, s, r) in &c.edges {
            el.push(l.clone());
            src.push(s + vo);
            rng.push(r + vo);
        }
        uo += c.groupoid.num_units();
        ao += c.groupoid.num_arrows();
        vo += c.graph_vertices.len();
        eo += c.edges.len();
    }
    let graph = Arc::new(DirectedGraph::new(vl, el, src, rng).expect("graph"));
    let owner = |a: usize| offs.iter().rposition(|o| o.1 <= a).expect("offset");
    GraphAction::new(
        groupoid,
        graph,
        anchor,
        |a, v| {
            let i = owner(a);
            let (_, ao, vo, _) = offs[i];
            let nv = parts[i].graph_vertices.len();
            parts[i].vertex_act[(a - ao) * nv + v - vo] + vo
        },
        |a, e| {
            let i = owner(a);
            let (_, ao, _, eo) = offs[i];
            let ne = parts[i].edges.len();
            parts[i].edge_act[(a - ao) * ne + e - eo] + eo
        },
    )
    .expect("generated action is valid")
}

/// A random action with isotropy drawn from [`isotropy_pool`].
pub fn random_instance<R: Rng>(rng: &mut R, p: &InstanceParams) -> GraphAction {
    let pool = isotropy_pool();
    loop {
        let two = rng.gen_bool(p.two_components);
        let mut q = p.clone();
        if two {
            q.max_vertices = p.max_vertices / 2;
            q.max_edges = p.max_edges / 2;
        }
        let mut parts = Vec::new();
        for tag in if two { vec!["A", "B"] } else { vec![""] } {
            let (_, k) = pool.choose(rng).expect("nonempty pool");
            if let Some(c) = component(rng, &q, k, tag) {
                parts.push(c);
            }
        }
        if parts.len() == if two { 2 } else { 1 } {
            return assemble(parts);
        }
    }
}

/// A random action with the given isotropy group.
pub fn random_instance_with<R: Rng>(rng: &mut R, p: &InstanceParams, k: &FiniteGroup) -> GraphAction {
    loop {
        if let Some(c) = component(rng, p, k, "") {
            return assemble(vec![c]);
        }
    }
}

/// `G` acting on `H = ⊔_u X_u × C × X_u` by `g·(y, c, x) = (g·y, c, g·x)`, where
/// `X` is the vertex set of a random graph action and `C` is a small cyclic
/// group. Retries until `H` has at most `max_arrows` arrows.
pub fn random_groupoid_action<R: Rng>(rng: &mut R, p: &InstanceParams, max_arrows: usize) -> GroupoidOnGroupoidAction {
    loop {
        let a = random_instance(rng, p);
        let c = FiniteGroup::cyclic(rng.gen_range(1..=3));
        let x = a.vertex_action();
        let n = x.num_points();
        let mut arrows = Vec::new();
        for y in 0..n {
            for cc in 0..c.order() {
                for z in 0..n {
                    if x.anchor(y) == x.anchor(z) {
                        arrows.push((y, cc, z));
                    }
                }
            }
        }
        if arrows.len() > max_arrows {
            continue;
        }
        let index: std::collections::HashMap<(usize, usize, usize), usize> =
            arrows.iter().enumerate().map(|(i, &t)| (t, i)).collect();
        let labels = arrows
            .iter()
            .map(|&(y, cc, z)| {
                if y == z && cc == c.identity() {
                    x.point_label(y).to_string()
                } else {
                    format!("({},{},{})", x.point_label(y), c.label(cc), x.point_label(z))
                }
            })
            .collect();
        let h = FiniteGroupoid::from_fn(
            x.point_labels().to_vec(),
            labels,
            arrows.iter().map(|t| t.2).collect(),
            arrows.iter().map(|t| t.0).collect(),
            (0..n).map(|y| index[&(y, c.identity(), y)]).collect(),
            |f, g| {
                let (z, c1, _) = arrows[f];
                let (_, c2, w) = arrows[g];
                index[&(z, c.mul(c1, c2), w)]
            },
        )
        .expect("fiberwise pair groupoid");
        let anchor = arrows.iter().map(|t| x.anchor(t.0)).collect();
        return GroupoidOnGroupoidAction::new(a.groupoid_arc().clone(), Arc::new(h), anchor, |g, t| {
            let (y, cc, z) = arrows[t];
            index[&(x.apply(g, y), cc, x.apply(g, z))]
        })
        .expect("induced action is valid");
    }
}

/// A random graph with at most `max_vertices` vertices and `max_edges` edges.
pub fn random_graph<R: Rng>(rng: &mut R, max_vertices: usize, max_edges: usize) -> DirectedGraph {
    let nv = rng.gen_range(1..=max_vertices);
    let ne = rng.gen_range(0..=max_edges);
    let vl = (0..nv).map(|i| format!("v{i}")).collect();
    let el = (0..ne).map(|i| format!("e{i}")).collect();
    let src = (0..ne).map(|_| rng.gen_range(0..nv)).collect();
    let r = (0..ne).map(|_| rng.gen_range(0..nv)).collect();
    DirectedGraph::new(vl, el, src, r).expect("graph")
}

/// The same action with vertices, edges and arrows renamed by random
/// permutations; returns the action with `(vertex, edge)` permutations, where
/// old id `i` becomes `perm[i]`. Units and arrow ids are left in place.
pub fn relabel<R: Rng>(rng: &mut R, a: &GraphAction) -> (GraphAction, Vec<usize>, Vec<usize>) {
    let graph = a.graph();
    let mut vp: Vec<usize> = (0..graph.num_vertices()).collect();
    let mut ep: Vec<usize> = (0..graph.num_edges()).collect();
    vp.shuffle(rng);
    ep.shuffle(rng);
    let mut vinv = vec![0; vp.len()];
    for (i, &j) in vp.iter().enumerate() {
        vinv[j] = i;
    }
    let mut einv = vec![0; ep.len()];
    for (i, &j) in ep.iter().enumerate() {
        einv[j] = i;
    }
    let new_graph = Arc::new(graph.permuted(&vp, &ep));
    let anchor = (0..graph.num_vertices()).map(|w| a.p(vinv[w])).collect();
    let va = a.vertex_action();
    let ea = a.edge_action();
    let b = GraphAction::new(
        a.groupoid_arc().clone(),
        new_graph,
        anchor,
        |g, w| vp[va.apply(g, vinv[w])],
        |g, f| ep[ea.apply(g, einv[f])],
    )
    .expect("relabelled action is valid");
    (b, vp, ep)
}

/// Orbit sizes, in orbit order.
pub fn orbit_sizes(a: &SpaceAction) -> Vec<usize> {
    a.orbits().iter().map(|o| o.len()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::validate_graph_action;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_instances_are_valid_and_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let p = InstanceParams::default();
        for _ in 0..30 {
            let a = random_instance(&mut rng, &p);
            assert!(validate_graph_action(&a).unwrap().ok);
            assert!(a.graph().num_vertices() <= p.max_vertices);
            assert!(a.graph().num_edges() <= p.max_edges);
        }
    }

    #[test]
    fn free_instances_are_free() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let p = InstanceParams { free: true, ..Default::default() };
        for _ in 0..10 {
            let a = random_instance(&mut rng, &p);
            assert!(a.vertex_action().is_free() && a.edge_action().is_free());
        }
    }

    #[test]
    fn relabel_preserves_validity() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = random_instance(&mut rng, &InstanceParams::default());
        let (b, _, _) = relabel(&mut rng, &a);
        assert_eq!(orbit_sizes(b.vertex_action()).len(), orbit_sizes(a.vertex_action()).len());
    }
}
