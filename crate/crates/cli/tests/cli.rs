use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn gact(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gact")).args(args).env_remove("GACT_CACHE_DIR").output().expect("runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("gact-test-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_json(name: &str, v: &Value) -> PathBuf {
    let p = scratch(name).join("input.json");
    std::fs::write(&p, serde_json::to_vec_pretty(v).unwrap()).unwrap();
    p
}

/// Trivial groupoid on two vertices joined by a cycle.
fn two_cycle() -> Value {
    json!({
        "groupoid": {
            "units": ["*"],
            "arrows": [{"id": "*", "src": "*", "rng": "*"}],
            "compose": [["*", "*", "*"]],
            "inv": [["*", "*"]]
        },
        "graph": {
            "vertices": ["x", "y"],
            "edges": [{"id": "e", "src": "x", "rng": "y"}, {"id": "f", "src": "y", "rng": "x"}]
        },
        "anchor": {"x": "*", "y": "*"},
        "vertex_action": [["*", "x", "x"], ["*", "y", "y"]],
        "edge_action": [["*", "e", "e"], ["*", "f", "f"]]
    })
}

#[test]
fn quotient_graph_of_the_s3_fixture() {
    let out = gact(&["quotient-graph", "--fixture", "example-4.3", "--mode", "both"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["result"]["sizes"], json!([2, 2, 4]));
    assert_eq!(v["result"]["adjacency"], json!([[1, 0, 1], [0, 1, 1], [1, 1, 2]]));
    assert_eq!(v["manifest"]["provenance"], "both-agree");
    assert_eq!(v["manifest"]["flags"]["mode"], "both");
    assert!(!out.stderr.is_empty());
}

#[test]
fn selfsim_act_moves_a_to_c() {
    let out = gact(&["selfsim", "act", "--fixture", "example-4.6", "--word", "g", "--path", "a"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["result"]["image"], "c");
    let out = gact(&["selfsim", "act", "--fixture", "gh-automaton", "--word", "h", "--path", "cd"]);
    assert_eq!(json_of(&out)["result"]["image"], "db");
}

#[test]
fn selfsim_equiv_and_orbit() {
    let out = gact(&["selfsim", "equiv", "--fixture", "example-4.6", "--word", "hg", "--other", "v", "--depth", "1"]);
    let v = json_of(&out)["result"].clone();
    assert_eq!((v["verdict"].as_str(), v["witness"].as_str(), v["left"].as_str()), (Some("distinguished"), Some("a"), Some("d")));
    let out = gact(&["selfsim", "orbit", "--fixture", "example-4.6", "--path", "ad"]);
    let orbit: Vec<String> = serde_json::from_value(json_of(&out)["result"]["orbit"].clone()).unwrap();
    for p in ["ad", "cd", "db", "ba", "aa", "ca"] {
        assert!(orbit.iter().any(|q| q == p));
    }
}

#[test]
fn selfsim_forest_children() {
    let out = gact(&["selfsim", "forest", "--fixture", "example-4.6", "--depth", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let c = &json_of(&out)["result"]["children"];
    assert_eq!(c["v"], json!(["a", "d"]));
    assert_eq!(c["d"], json!(["db", "dc"]));
    assert_eq!(c["c"], json!(["ca", "cd"]));
}

#[test]
fn validate_trivial_groupoid() {
    let out = gact(&["validate", "groupoid", "--fixture", "trivial"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["result"]["ok"], true);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let a = gact(&["quotient-graph", "--fixture", "example-4.3"]);
    let b = gact(&["quotient-graph", "--fixture", "example-4.3"]);
    assert_eq!(a.stdout, b.stdout);
    let a = gact(&["dr-dims", "--fixture", "s3-on-three-loops", "--depth", "3"]);
    let b = gact(&["dr-dims", "--fixture", "s3-on-three-loops", "--depth", "3"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn fixture_roundtrips_through_a_file() {
    let fx = json_of(&gact(&["fixture", "example-4.3"]))["result"].clone();
    let path = scratch("roundtrip").join("compact.json");
    // digests of fixtures are taken over compact JSON
    std::fs::write(&path, serde_json::to_vec(&fx).unwrap()).unwrap();
    let from_file = json_of(&gact(&["quotient-graph", path.to_str().unwrap()]));
    let from_fixture = json_of(&gact(&["quotient-graph", "--fixture", "example-4.3"]));
    assert_eq!(from_file["result"], from_fixture["result"]);
    assert_eq!(from_file["manifest"]["inputs"][0]["sha256"], from_fixture["manifest"]["inputs"][0]["sha256"]);
}

#[test]
fn raw_fixture_is_a_valid_input() {
    let out = gact(&["fixture", "s3-loops", "--raw"]);
    let path = scratch("raw-fixture").join("s3.json");
    std::fs::write(&path, &out.stdout).unwrap();
    let out = gact(&["validate", "graph-action", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let out = gact(&["fixture", "gh-automaton", "--raw"]);
    let path = scratch("raw-fixture").join("gh.json");
    std::fs::write(&path, &out.stdout).unwrap();
    let out = gact(&["selfsim", "act", path.to_str().unwrap(), "--word", "hg", "--path", "a"]);
    assert_eq!(json_of(&out)["result"]["image"], "d");
}

#[test]
fn malformed_input_exits_4() {
    let p = scratch("malformed").join("bad.json");
    std::fs::write(&p, "{not json").unwrap();
    let out = gact(&["orbits", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(json_of(&out)["error"]["kind"], "malformed-input");
    assert_eq!(gact(&["orbits", "--fixture", "no-such-thing"]).status.code(), Some(4));
}

#[test]
fn invalid_action_exits_2() {
    let mut v = two_cycle();
    // the edge action no longer fixes f
    v["edge_action"] = json!([["*", "e", "e"], ["*", "f", "e"]]);
    let path = write_json("invalid", &v);
    let out = gact(&["validate", "graph-action", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json_of(&out)["result"]["ok"], false);
    let out = gact(&["quotient-graph", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json_of(&out)["error"]["kind"], "validation");
}

#[test]
fn multi_vertex_fiber_is_unsupported_for_dr_fiber() {
    let path = write_json("fiber", &two_cycle());
    let out = gact(&["dr-bratteli", "--mode", "dr-fiber", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json_of(&out)["error"]["kind"], "unsupported");
    let out = gact(&["dr-bratteli", "--mode", "quotient", "--levels", "2", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn k_theory_of_adjacency_and_fixture() {
    let path = write_json("ktheory", &json!({"adjacency": [[3]]}));
    let out = gact(&["ktheory", path.to_str().unwrap()]);
    let v = json_of(&out);
    assert_eq!(v["result"]["k0"], json!({"rank": 0, "torsion": [2]}));
    assert_eq!(v["result"]["k1"], json!({"rank": 0, "torsion": []}));
    let v = json_of(&gact(&["ktheory", "--fixture", "example-4.3"]));
    assert_eq!(v["result"]["k0"], json!({"rank": 1, "torsion": []}));
    assert_eq!(v["result"]["smith_diagonal"], json!(["1", "1", "0"]));
    let out = gact(&["ktheory", "--fixture", "example-4.3", "--of", "graph"]);
    assert_eq!(json_of(&out)["result"]["k0"], json!({"rank": 0, "torsion": [2, 2]}));
}

#[test]
fn sources_are_refused_by_ktheory() {
    let path = write_json("sources", &json!({"adjacency": [[0, 0], [1, 1]]}));
    let out = gact(&["ktheory", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn dot_export_is_raw_on_request() {
    let out = gact(&["export-dot", "--fixture", "example-4.3", "--what", "quotient", "--raw"]);
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("digraph"));
    let out = gact(&["export-dot", "--fixture", "example-4.6", "--what", "forest", "--depth", "1"]);
    assert!(json_of(&out)["result"]["dot"].as_str().unwrap().contains("digraph"));
}

#[test]
fn cache_directory_does_not_change_output() {
    let dir = scratch("cache");
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_gact"))
            .args(["quotient-graph", "--fixture", "example-4.3"])
            .env("GACT_CACHE_DIR", &dir)
            .output()
            .unwrap()
    };
    let first = run();
    assert!(dir.join("character-tables.json").exists());
    let second = run();
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(first.stdout, gact(&["quotient-graph", "--fixture", "example-4.3"]).stdout);
}

#[test]
fn spectrum_and_orbits() {
    let v = json_of(&gact(&["spectrum", "--fixture", "example-4.3"]));
    assert_eq!(v["result"]["sizes"], json!([2, 2, 4]));
    let v = json_of(&gact(&["orbits", "--fixture", "example-4.3"]));
    assert_eq!(v["result"]["vertex_orbits"][0]["stabilizer_order"], 6);
    assert_eq!(v["result"]["edge_orbits"].as_array().unwrap().len(), 1);
    let v = json_of(&gact(&["kappa-check", "--fixture", "example-4.3"]));
    assert_eq!(v["result"]["ok"], true);
}
