//! Built-in instances.

use std::sync::Arc;

use crate::graph::{DirectedGraph, GraphAction};
use crate::group::FiniteGroup;
use crate::groupoid::build_transitive_groupoid;
use crate::selfsim::{Letter, SelfSimilarAutomaton, Word};

/// Two vertices `v1`, `v2` carrying loops `a1 a2 a3` and `b1 b2 b3`, acted on by
/// the transitive groupoid `{v1,v2} × S₃ × {v1,v2}`: the arrow `(v, σ, u)` moves
/// the `i`-th loop at `u` to the `σ(i)`-th loop at `v`.
pub fn s3_loops() -> GraphAction {
    let s3 = FiniteGroup::symmetric(3);
    let units = vec!["v1".to_string(), "v2".to_string()];
    let g = Arc::new(build_transitive_groupoid(&units, &s3).expect("two units"));
    let graph = DirectedGraph::from_edges(
        &["v1", "v2"],
        &[("a1", 0, 0), ("a2", 0, 0), ("a3", 0, 0), ("b1", 1, 1), ("b2", 1, 1), ("b3", 1, 1)],
    )
    .expect("graph");
    let nk = s3.order();
    let unpack = move |x: usize| (x / (nk * 2), (x / 2) % nk, x % 2);
    let perm = |k: usize, i: usize| -> usize {
        s3.label(k).as_bytes()[i] as usize - b'1' as usize
    };
    GraphAction::new(
        g,
        Arc::new(graph),
        vec![0, 1],
        |x, _| unpack(x).0,
        |x, e| {
            let (v, k, _) = unpack(x);
            3 * v + perm(k, e % 3)
        },
    )
    .expect("valid action")
}

/// One vertex with `n` loops.
pub fn bouquet(n: usize) -> DirectedGraph {
    let labels: Vec<String> = (1..=n).map(|i| format!("e{i}")).collect();
    DirectedGraph::new(vec!["v".into()], labels, vec![0; n], vec![0; n]).expect("bouquet")
}

/// `S₃` permuting three loops at a single vertex.
pub fn s3_on_three_loops() -> GraphAction {
    let s3 = FiniteGroup::symmetric(3);
    let g = Arc::new(crate::groupoid::FiniteGroupoid::from_group("v", &s3));
    GraphAction::new(g, Arc::new(bouquet(3)), vec![0], |_, v| v, |k, e| s3.label(k).as_bytes()[e] as usize - b'1' as usize)
        .expect("valid action")
}

/// Two vertices `v`, `w`; a loop `a` at `v`, edges `b`, `c` from `v` to `w` and
/// `d` from `w` to `v`. Generators `g: v → w` and `h: w → v` with
/// `g·a = c, g|_a = v`, `g·d = b, g|_d = h`, `h·b = a, h|_b = v`, `h·c = d, h|_c = g`.
pub fn gh_automaton() -> SelfSimilarAutomaton {
    let graph = DirectedGraph::from_edges(&["v", "w"], &[("a", 0, 0), ("b", 0, 1), ("c", 0, 1), ("d", 1, 0)])
        .expect("graph");
    let (a, b, c, d) = (0, 1, 2, 3);
    let (g, h) = (0, 1);
    let (v, _w) = (0, 1);
    SelfSimilarAutomaton::new(
        graph,
        vec![("g".into(), 0, 1), ("h".into(), 1, 0)],
        vec![
            (g, a, c, Word(vec![Letter::Unit(v)])),
            (g, d, b, Word(vec![Letter::Gen(h)])),
            (h, b, a, Word(vec![Letter::Unit(v)])),
            (h, c, d, Word(vec![Letter::Gen(g)])),
        ],
    )
    .expect("valid automaton")
}
