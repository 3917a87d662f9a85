//! Acceptance gate: one PASS/FAIL line per criterion. Runs without the libtest
//! harness so the lines are always printed.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use groupoid_actions::dr::{core_bratteli_adjacency, dr_dimension_table, intertwiner_dimension, intertwiner_dimension_by_rank};
use groupoid_actions::fixtures::{bouquet, gh_automaton, s3_loops, s3_on_three_loops};
use groupoid_actions::graph::Path;
use groupoid_actions::groupoid::{action_groupoid, crossed_product_groupoid, GroupoidOnGroupoidAction};
use groupoid_actions::ktheory::{graph_k_theory, smith_normal_form, AbelianGroupInvariants};
use groupoid_actions::oracle::{kappa_dimension_check, oracle_adjacency};
use groupoid_actions::quotient::{character_adjacency, quotient_graph, Mode, Provenance};
use groupoid_actions::random::{random_graph, random_groupoid_action, random_instance, InstanceParams};
use groupoid_actions::selfsim::{Equivalence, Letter, SelfSimilarAutomaton, Word};
use groupoid_actions::{FiniteGroupoid, GraphAction};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn s3_loops_end_to_end() -> Outcome {
    let a = s3_loops();
    let r = quotient_graph(&a, Mode::Both).map_err(|e| e.to_string())?;
    ensure(r.sizes() == vec![2, 2, 4], || format!("sizes {:?}", r.sizes()))?;
    ensure(r.sum_block_squares == 24 && r.algebra_dim == 24, || format!("Σn² = {}", r.sum_block_squares))?;
    let expected = vec![vec![1, 0, 1], vec![0, 1, 1], vec![1, 1, 2]];
    ensure(r.adjacency == expected, || format!("adjacency {:?}", r.adjacency))?;
    let oracle = oracle_adjacency(&a).map_err(|e| e.to_string())?;
    ensure(oracle.adjacency == expected, || format!("oracle adjacency {:?}", oracle.adjacency))?;
    ensure(r.sum_weighted_edges == 72 && r.correspondence_dim == 72, || format!("Σann = {}", r.sum_weighted_edges))?;
    for f in a.fiber_graphs() {
        let g = &f.graph;
        ensure(g.num_vertices() == 1 && g.num_edges() == 3, || format!("fiber {} is not 1 vertex, 3 loops", f.unit_label))?;
        let b = core_bratteli_adjacency(&["v".to_string()], &g.adjacency(), 4).map_err(|e| e.to_string())?;
        ensure(b.multiplicities.iter().all(|m| m == &vec![vec![3]]), || "core multiplicity is not 3".into())?;
        ensure(b.levels.iter().all(|l| l.labels.len() == 1), || "core level has more than one vertex".into())?;
    }
    Ok("sizes [2,2,4], Σn²=24, adjacency [[1,0,1],[0,1,1],[1,1,2]] on both routes, Σann=72, fibers 1 vertex/3 loops, core multiplicity 3".into())
}

fn trivial_groupoid_degeneration() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7_1e5);
    let n = 25;
    for i in 0..n {
        let g = random_graph(&mut rng, 8, 20);
        let adj = g.adjacency();
        let a = GraphAction::trivial(g);
        let r = quotient_graph(&a, Mode::Both).map_err(|e| format!("graph {i}: {e}"))?;
        ensure(r.adjacency == adj, || format!("graph {i}: {:?} ≠ {:?}", r.adjacency, adj))?;
        ensure(r.sizes().iter().all(|&s| s == 1), || format!("graph {i}: non-unit block"))?;
    }
    Ok(format!("{n} random graphs (≤8 vertices, ≤20 edges) recovered exactly"))
}

fn free_action_degeneration() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xf_ee);
    let p = InstanceParams { free: true, ..InstanceParams::default() };
    let n = 25;
    for i in 0..n {
        let a = random_instance(&mut rng, &p);
        let o = oracle_adjacency(&a).map_err(|e| format!("instance {i}: {e}"))?;
        let q = a.orbit_quotient_graph_free().map_err(|e| format!("instance {i}: {e}"))?;
        ensure(o.adjacency == q.adjacency(), || format!("instance {i}: {:?} ≠ {:?}", o.adjacency, q.adjacency()))?;
    }
    Ok(format!("{n} random free actions match the orbit graph"))
}

fn fuzz() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xf022);
    let p = InstanceParams::default();
    let n = 120;
    let mut groups = BTreeSet::new();
    for i in 0..n {
        let a = random_instance(&mut rng, &p);
        for u in 0..a.groupoid().num_units() {
            groups.insert(a.groupoid().hom(u, u).len());
        }
        let fast = character_adjacency(&a).map_err(|e| format!("instance {i}: {e}"))?;
        let oracle = oracle_adjacency(&a).map_err(|e| format!("instance {i}: {e}"))?;
        ensure(fast == oracle.adjacency, || format!("instance {i}: fast {fast:?} ≠ oracle {:?}", oracle.adjacency))?;
    }
    Ok(format!("{n} random instances agree entrywise (isotropy orders {groups:?}) in {:.1}s", start.elapsed().as_secs_f64()))
}

fn structural_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5_7ac);
    let p = InstanceParams::default();
    let mut instances = vec![s3_loops(), s3_on_three_loops(), GraphAction::trivial(bouquet(3))];
    instances.extend((0..40).map(|_| random_instance(&mut rng, &p)));
    for (i, a) in instances.iter().enumerate() {
        let g = a.groupoid();
        let graph = a.graph();
        // independent counts of the two crossed-product dimensions
        let alg: usize = (0..graph.num_vertices()).map(|v| g.from_unit(a.p(v)).len()).sum();
        let corr: usize = (0..graph.num_edges())
            .map(|e| (0..g.num_arrows()).filter(|&k| g.rng(k) == a.p(graph.rng(e))).count())
            .sum();
        let r = quotient_graph(a, Mode::Both).map_err(|e| format!("instance {i}: {e}"))?;
        ensure(r.provenance == Provenance::BothAgree, || format!("instance {i}: provenance {:?}", r.provenance))?;
        let sq: usize = r.sizes().iter().map(|n| n * n).sum();
        ensure(sq == alg, || format!("instance {i}: Σn² = {sq}, dim = {alg}"))?;
        let mut weighted = 0i64;
        for (x, row) in r.adjacency.iter().enumerate() {
            for (y, &c) in row.iter().enumerate() {
                weighted += c * (r.spectrum[x].size * r.spectrum[y].size) as i64;
            }
        }
        ensure(weighted == corr as i64, || format!("instance {i}: Σann = {weighted}, dim = {corr}"))?;
        let k = kappa_dimension_check(a);
        ensure(k.ok, || format!("instance {i}: kappa {} vs {}", k.compacts_of_crossed_product, k.crossed_product_of_compacts))?;
    }
    Ok(format!("{} instances: Σn², Σann and kappa dimensions exact", instances.len()))
}

fn doplicher_roberts() -> Outcome {
    let a = s3_on_three_loops();
    let t = dr_dimension_table(&a, 0, 3).map_err(|e| e.to_string())?;
    let diag: Vec<u64> = (0..=2).map(|k| t.table[k][k]).collect();
    ensure(diag == vec![1, 2, 14], || format!("diagonal {diag:?}"))?;
    for m in 0..=3 {
        for n in 0..=3 {
            if m + n > 5 {
                continue;
            }
            let burnside = intertwiner_dimension(&a, 0, m, n).map_err(|e| e.to_string())?;
            let rank = intertwiner_dimension_by_rank(&a, 0, m, n).map_err(|e| e.to_string())?;
            ensure(burnside == rank, || format!("d[{m}][{n}]: Burnside {burnside}, rank {rank}"))?;
        }
    }
    let b = s3_loops();
    let t1 = dr_dimension_table(&b, 0, 4).map_err(|e| e.to_string())?;
    let t2 = dr_dimension_table(&b, 1, 4).map_err(|e| e.to_string())?;
    ensure(t1.table == t2.table, || "fiber tables differ".into())?;
    ensure(t1.table[..3].iter().zip(&t.table).all(|(x, y)| x[..3] == y[..3]), || "fiber table differs from S₃ on 3 loops".into())?;
    Ok("d00,d11,d22 = 1,2,14; Burnside = rank route for m+n ≤ 5; both fibers identical to depth 4".into())
}

fn random_word(rng: &mut ChaCha8Rng, a: &SelfSimilarAutomaton, len: usize) -> Word {
    let nv = a.graph().num_vertices();
    let mut letters = Vec::new();
    let mut cur = rng.gen_range(0..nv);
    for _ in 0..len {
        let mut options = vec![Letter::Unit(cur)];
        for g in 0..a.num_generators() {
            for x in [Letter::Gen(g), Letter::Inv(g)] {
                if a.letter_src(x) == cur {
                    options.push(x);
                }
            }
        }
        let x = options[rng.gen_range(0..options.len())];
        cur = a.letter_rng(x);
        letters.push(x);
    }
    letters.reverse();
    Word(letters)
}

fn concat_paths(mu: &Path, nu: &Path) -> Path {
    let mut edges = mu.edges.clone();
    edges.extend(&nu.edges);
    Path { range: mu.range, edges }
}

fn self_similar() -> Outcome {
    let a = gh_automaton();
    let gr = a.graph();
    let e = |l: &str| gr.edge_index(l).unwrap();
    let w = |s: &str| a.parse_word(s).unwrap();
    let (g, h) = (w("g"), w("h"));
    let prefix = |x: usize, mu: &Path| concat_paths(&Path { range: gr.rng(x), edges: vec![x] }, mu);
    let mut checked = 0;
    for len in 0..=4 {
        for v in 0..gr.num_vertices() {
            for mu in gr.paths_into(v, len).into_iter().map(|edges| Path { range: v, edges }) {
                let at_v = v == gr.vertex_index("v").unwrap();
                let act = |word: &Word, p: &Path| a.act_path(word, p).map_err(|err| err.to_string());
                if at_v {
                    // g·aμ = cμ, h·bμ = aμ, h·cμ = d(g·μ)
                    ensure(act(&g, &prefix(e("a"), &mu))? == prefix(e("c"), &mu), || "g·aμ ≠ cμ".into())?;
                    ensure(act(&h, &prefix(e("b"), &mu))? == prefix(e("a"), &mu), || "h·bμ ≠ aμ".into())?;
                    ensure(act(&h, &prefix(e("c"), &mu))? == prefix(e("d"), &act(&g, &mu)?), || "h·cμ ≠ d(g·μ)".into())?;
                    checked += 3;
                } else {
                    // g·dμ = b(h·μ)
                    ensure(act(&g, &prefix(e("d"), &mu))? == prefix(e("b"), &act(&h, &mu)?), || "g·dμ ≠ b(h·μ)".into())?;
                    checked += 1;
                }
            }
        }
    }
    let f = groupoid_actions::selfsim::forest(gr, 2);
    let children = |label: &str| -> BTreeSet<String> {
        let v = f.vertex_index(label).unwrap();
        f.edges_into(v).into_iter().map(|t| f.vertex_label(f.src(t)).to_string()).collect()
    };
    let expected: [(&str, &[&str]); 8] = [
        ("v", &["a", "d"]),
        ("a", &["aa", "ad"]),
        ("d", &["db", "dc"]),
        ("w", &["b", "c"]),
        ("b", &["ba", "bd"]),
        ("c", &["ca", "cd"]),
        ("aa", &[]),
        ("cd", &[]),
    ];
    for (node, kids) in expected {
        let want: BTreeSet<String> = kids.iter().map(|s| s.to_string()).collect();
        ensure(children(node) == want, || format!("forest children of {node}: {:?}", children(node)))?;
    }
    ensure(f.num_vertices() == 14 && f.num_edges() == 12, || "forest size".into())?;
    let roots: Vec<usize> = (0..f.num_vertices()).filter(|&x| f.edges_from(x).is_empty()).collect();
    ensure(roots.len() == 2, || format!("{} roots", roots.len()))?;

    let mut rng = ChaCha8Rng::seed_from_u64(0xc0c7);
    let depth = 4;
    for i in 0..500 {
        let len = rng.gen_range(1..=6);
        let word = random_word(&mut rng, &a, len);
        let split = rng.gen_range(1..=word.0.len());
        let (w1, w2) = (Word(word.0[..split].to_vec()), Word(word.0[split..].to_vec()));
        let src = a.endpoints(&word).unwrap().0;
        let paths = a.paths_into_up_to(src, depth);
        let mu = paths[rng.gen_range(0..paths.len())].clone();
        let res = a.restriction(&word, &mu).map_err(|e| e.to_string())?;
        // w·(μν) = (w·μ)(w|_μ·ν) for every continuation ν
        let wmu = a.act_path(&word, &mu).map_err(|e| e.to_string())?;
        let s = mu.source(gr);
        for nu in a.paths_into_up_to(s, depth - mu.edges.len()) {
            let lhs = a.act_path(&word, &concat_paths(&mu, &nu)).map_err(|e| e.to_string())?;
            let rhs = concat_paths(&wmu, &a.act_path(&res, &nu).map_err(|e| e.to_string())?);
            ensure(lhs == rhs, || format!("pair {i}: restriction does not govern continuations"))?;
        }
        if w2.0.is_empty() {
            continue;
        }
        let r1 = a.restriction(&w1, &a.act_path(&w2, &mu).unwrap()).unwrap();
        let r2 = a.restriction(&w2, &mu).unwrap();
        let rhs = a.concat(&r1, &r2).map_err(|e| format!("pair {i}: {e}"))?;
        let eq = a.depth_bounded_equivalence(&res, &rhs, depth).map_err(|e| e.to_string())?;
        ensure(matches!(eq, Equivalence::EqualToDepth { .. }), || format!("pair {i}: cocycle fails: {eq:?}"))?;
    }
    Ok(format!("{checked} relation instances to depth 5, forest at depth 2 node-for-node, 500 cocycle pairs to depth {depth}"))
}

fn crossed_product_groupoid_check() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xc9_0d);
    let p = InstanceParams { max_vertices: 5, max_edges: 4, ..InstanceParams::default() };
    let n = 24;
    let mut largest = 0;
    for i in 0..n {
        let act = random_groupoid_action(&mut rng, &p, 200);
        let h = act.target();
        largest = largest.max(h.num_arrows());
        let (cp, _) = crossed_product_groupoid(&act);
        let rep = cp.check_axioms();
        ensure(rep.ok, || format!("instance {i}: {:?}", rep.violations.first()))?;

        // trivial actor recovers H
        let triv = Arc::new(FiniteGroupoid::units_only(vec!["*".into()]));
        let ht = Arc::new(h.clone());
        let t = GroupoidOnGroupoidAction::new(triv, ht.clone(), vec![0; h.num_arrows()], |_, x| x).map_err(|e| e.to_string())?;
        let (tcp, pairs) = crossed_product_groupoid(&t);
        let map: Vec<usize> = (0..h.num_arrows()).map(|x| pairs.iter().position(|&(_, y)| y == x).unwrap()).collect();
        let units: Vec<usize> = (0..h.num_units()).collect();
        ensure(h.is_isomorphic_via(&tcp, &units, &map), || format!("instance {i}: trivial actor"))?;

        // H = H⁰ recovers the action groupoid of the unit action
        let ua = act.unit_action();
        let h0 = Arc::new(FiniteGroupoid::units_only(h.unit_labels().to_vec()));
        let anchor: Vec<usize> = (0..h.num_units()).map(|u| ua.anchor(u)).collect();
        let on_units = GroupoidOnGroupoidAction::new(act.actor_arc().clone(), h0, anchor, |g, u| ua.apply(g, u))
            .map_err(|e| e.to_string())?;
        let (ucp, upairs) = crossed_product_groupoid(&on_units);
        let ag = action_groupoid(&ua);
        ensure(upairs == ag.pairs, || format!("instance {i}: arrow numbering differs"))?;
        let ids: Vec<usize> = (0..ucp.num_arrows()).collect();
        let uids: Vec<usize> = (0..ucp.num_units()).collect();
        ensure(ucp.is_isomorphic_via(&ag.groupoid, &uids, &ids), || format!("instance {i}: action groupoid"))?;
    }
    Ok(format!("{n} random instances (H up to {largest} arrows): associativity exhaustive, both degenerations exact"))
}

fn k_theory() -> Outcome {
    let o3 = graph_k_theory(&bouquet(3).adjacency()).map_err(|e| e.to_string())?;
    ensure(
        o3.k0 == AbelianGroupInvariants { rank: 0, torsion: vec![BigInt::from(2)] } && o3.k1 == AbelianGroupInvariants::free(0),
        || format!("three loops: K0 = {}, K1 = {}", o3.k0, o3.k1),
    )?;
    let q = quotient_graph(&s3_loops(), Mode::Fast).map_err(|e| e.to_string())?;
    let k = graph_k_theory(&q.adjacency).map_err(|e| e.to_string())?;
    ensure(
        k.k0 == AbelianGroupInvariants::free(1) && k.k1 == AbelianGroupInvariants::free(1),
        || format!("quotient: K0 = {}, K1 = {}", k.k0, k.k1),
    )?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5af);
    for i in 0..200 {
        let (r, c) = (rng.gen_range(1..=12), rng.gen_range(1..=12));
        let m: Vec<Vec<BigInt>> = (0..r).map(|_| (0..c).map(|_| BigInt::from(rng.gen_range(-20i64..=20))).collect()).collect();
        let f = smith_normal_form(&m).map_err(|e| e.to_string())?;
        ensure(f.verify(&m), || format!("matrix {i}: U·M·V ≠ S"))?;
    }
    Ok("three loops: K0=Z/2, K1=0; quotient: K0=Z, K1=Z; 200 random SNF identities exact".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("s3-loops end-to-end", s3_loops_end_to_end),
        ("trivial-groupoid degeneration", trivial_groupoid_degeneration),
        ("free-action degeneration", free_action_degeneration),
        ("oracle-vs-fast fuzz", fuzz),
        ("structural identities + kappa", structural_identities),
        ("intertwiner dimensions", doplicher_roberts),
        ("self-similar automaton", self_similar),
        ("crossed-product groupoid", crossed_product_groupoid_check),
        ("k-theory", k_theory),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let start = Instant::now();
        match f() {
            Ok(detail) => println!("PASS  {name}: {detail} [{:.2}s]", start.elapsed().as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
