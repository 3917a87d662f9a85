//! Reference values recomputed here from first principles, without the library
//! routines that produce them, and then compared with frozen constants and the
//! library output.

use std::collections::BTreeSet;

use groupoid_actions::dr::dr_dimension_table;
use groupoid_actions::fixtures::{gh_automaton, s3_loops, s3_on_three_loops};
use groupoid_actions::ktheory::{smith_normal_form, to_big};
use groupoid_actions::quotient::{quotient_graph, Mode};
use num_bigint::BigInt;

const S3_DR_DIAGONAL: [u64; 4] = [1, 2, 14, 122];
const S3_LOOPS_QUOTIENT: [[i64; 3]; 3] = [[1, 0, 1], [0, 1, 1], [1, 1, 2]];

fn s3() -> Vec<[usize; 3]> {
    vec![[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]]
}

/// Orbits of `S₃` on pairs of words of lengths `m`, `n` over three letters.
fn orbit_count(m: usize, n: usize) -> u64 {
    let words = |k: usize| -> Vec<Vec<usize>> {
        (0..3usize.pow(k as u32)).map(|mut x| (0..k).map(|_| { let d = x % 3; x /= 3; d }).collect()).collect()
    };
    let mut seen = BTreeSet::new();
    let mut orbits = 0;
    for a in words(m) {
        for b in words(n) {
            if seen.contains(&(a.clone(), b.clone())) {
                continue;
            }
            orbits += 1;
            for p in s3() {
                seen.insert((a.iter().map(|&i| p[i]).collect::<Vec<_>>(), b.iter().map(|&i| p[i]).collect::<Vec<_>>()));
            }
        }
    }
    orbits
}

#[test]
fn intertwiner_dimensions_by_orbit_enumeration() {
    let lib = dr_dimension_table(&s3_on_three_loops(), 0, 3).unwrap();
    for k in 0..=3 {
        assert_eq!(orbit_count(k, k), S3_DR_DIAGONAL[k]);
        assert_eq!(lib.table[k][k], S3_DR_DIAGONAL[k]);
    }
    assert_eq!(lib.table[2][1], orbit_count(2, 1));
}

/// Determinantal divisors: gcd of all `k × k` minors, for a 3 × 3 matrix.
fn determinantal_divisors(m: [[i64; 3]; 3]) -> [i64; 3] {
    let gcd = |a: i64, b: i64| -> i64 {
        let (mut a, mut b) = (a.abs(), b.abs());
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    };
    let d1 = m.iter().flatten().fold(0, |g, &x| gcd(g, x));
    let mut d2 = 0;
    for r in [(0, 1), (0, 2), (1, 2)] {
        for c in [(0, 1), (0, 2), (1, 2)] {
            d2 = gcd(d2, m[r.0][c.0] * m[r.1][c.1] - m[r.0][c.1] * m[r.1][c.0]);
        }
    }
    let d3 = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    [d1, d2, d3.abs()]
}

#[test]
fn quotient_smith_form_by_minors() {
    let q = quotient_graph(&s3_loops(), Mode::Both).unwrap();
    assert_eq!(q.adjacency, S3_LOOPS_QUOTIENT.iter().map(|r| r.to_vec()).collect::<Vec<_>>());
    let mut m = [[0i64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = i64::from(i == j) - S3_LOOPS_QUOTIENT[j][i];
        }
    }
    // invariant factors d_k / d_{k-1}
    assert_eq!(determinantal_divisors(m), [1, 1, 0]);
    let f = smith_normal_form(&to_big(&m.iter().map(|r| r.to_vec()).collect::<Vec<_>>())).unwrap();
    let diag: Vec<BigInt> = (0..3).map(|i| f.s[i][i].clone()).collect();
    assert_eq!(diag, vec![BigInt::from(1), BigInt::from(1), BigInt::from(0)]);
}

/// The four defining rules of the two-generator automaton, applied recursively
/// to strings.
fn g_on(s: &str) -> String {
    match s.split_at(1) {
        ("a", rest) => format!("c{rest}"),
        ("d", rest) => format!("b{}", h_on(rest)),
        _ => panic!("g does not act on {s}"),
    }
}

fn h_on(s: &str) -> String {
    if s.is_empty() {
        return String::new();
    }
    match s.split_at(1) {
        ("b", rest) => format!("a{rest}"),
        ("c", rest) => format!("d{}", g_on_or_empty(rest)),
        _ => panic!("h does not act on {s}"),
    }
}

fn g_on_or_empty(s: &str) -> String {
    if s.is_empty() {
        String::new()
    } else {
        g_on(s)
    }
}

#[test]
fn orbit_chain_by_string_rewriting() {
    let chain = ["ad", "cd", "db", "ba", "aa", "ca"];
    let mut cur = "ad".to_string();
    let mut got = vec![cur.clone()];
    for step in 0..5 {
        cur = if step % 2 == 0 { g_on(&cur) } else { h_on(&cur) };
        got.push(cur.clone());
    }
    assert_eq!(got, chain);
    let a = gh_automaton();
    let orbit = a.orbit_of_path(&a.parse_path("ad").unwrap(), None).unwrap();
    let labels: BTreeSet<String> = orbit.paths.iter().map(|p| a.path_label(p)).collect();
    assert!(chain.iter().all(|c| labels.contains(*c)));
    assert_eq!(h_on(&g_on("a")), "d");
}
