use std::collections::BTreeMap;
use std::fs;
use std::io::{Read, Write};
use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use groupoid_actions::chartab::{cached_tables, preload, CharacterTable, CharacterTableJson};
use groupoid_actions::dr::{core_bratteli_dr_fiber, core_bratteli_quotient, dr_dimension_table, BratteliDiagram};
use groupoid_actions::fixtures::{bouquet, gh_automaton, s3_loops, s3_on_three_loops};
use groupoid_actions::graph::{validate_graph_action, GraphActionDescriptor, Path};
use groupoid_actions::groupoid::{validate_groupoid, GroupoidDescriptor};
use groupoid_actions::ktheory::{graph_k_theory, smith_normal_form, to_big};
use groupoid_actions::oracle::kappa_dimension_check;
use groupoid_actions::quotient::{quotient_graph, spectrum, Mode};
use groupoid_actions::selfsim::{forest, AutomatonDescriptor, Equivalence, SelfSimilarAutomaton};
use groupoid_actions::{Error, GraphAction, ValidationReport};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

const CACHE_ENV: &str = "GACT_CACHE_DIR";
const CACHE_FILE: &str = "character-tables.json";

#[derive(Parser)]
#[command(name = "gact", version, about = "Groupoid actions on graphs: quotients, intertwiners, automata, K-theory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Input {
    /// JSON descriptor; `-` reads standard input.
    input: Option<PathBuf>,
    /// Built-in instance instead of a file (see `gact fixture --help`).
    #[arg(long)]
    fixture: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Groupoid,
    GraphAction,
    Automaton,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum ModeArg {
    Fast,
    Oracle,
    Both,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum BratteliMode {
    Quotient,
    DrFiber,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum KOf {
    Quotient,
    Graph,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum DotWhat {
    Graph,
    Quotient,
    Bratteli,
    Forest,
}

#[derive(Subcommand)]
enum Command {
    /// Check a groupoid, graph action or automaton against its axioms.
    Validate {
        #[arg(value_enum)]
        kind: Kind,
        #[command(flatten)]
        input: Input,
    },
    /// Vertex and edge orbits with stabilizer orders.
    Orbits {
        #[command(flatten)]
        input: Input,
    },
    /// Spectrum of the vertex crossed product: (orbit, irreducible) pairs and block sizes.
    Spectrum {
        #[command(flatten)]
        input: Input,
    },
    /// Graph whose graph algebra is Morita equivalent to the crossed product.
    QuotientGraph {
        #[arg(long, value_enum, default_value = "both")]
        mode: ModeArg,
        #[command(flatten)]
        input: Input,
    },
    /// Compare dimensions of the compacts of the crossed-product correspondence.
    KappaCheck {
        #[command(flatten)]
        input: Input,
    },
    /// Intertwiner dimensions d[m][n] over the fiber of a vertex.
    DrDims {
        #[arg(long, default_value_t = 3)]
        depth: usize,
        /// Vertex label; defaults to the first vertex.
        #[arg(long)]
        vertex: Option<String>,
        #[command(flatten)]
        input: Input,
    },
    /// Bratteli diagram of a core.
    DrBratteli {
        #[arg(long, default_value_t = 3)]
        levels: usize,
        #[arg(long, value_enum, default_value = "quotient")]
        mode: BratteliMode,
        #[arg(long)]
        vertex: Option<String>,
        #[command(flatten)]
        input: Input,
    },
    /// Self-similar automaton queries.
    Selfsim {
        #[command(subcommand)]
        op: SelfsimOp,
    },
    /// K0 and K1 of a graph algebra; accepts a graph action or {"adjacency": [[..]]}.
    Ktheory {
        #[arg(long, value_enum, default_value = "quotient")]
        of: KOf,
        #[command(flatten)]
        input: Input,
    },
    /// Graphviz rendering.
    ExportDot {
        #[arg(long, value_enum, default_value = "graph")]
        what: DotWhat,
        /// Levels for `bratteli`, depth for `forest`.
        #[arg(long, default_value_t = 3)]
        depth: usize,
        /// Print the DOT text alone instead of the JSON envelope.
        #[arg(long)]
        raw: bool,
        #[command(flatten)]
        input: Input,
    },
    /// Print a built-in instance as a JSON descriptor.
    ///
    /// Names: example-4.3 (alias s3-loops), s3-on-three-loops, trivial,
    /// example-4.6 (alias gh-automaton).
    Fixture {
        name: String,
        /// Print the bare descriptor, usable as an input file.
        #[arg(long)]
        raw: bool,
    },
}

#[derive(Subcommand)]
enum SelfsimOp {
    /// Image and restriction of a path under a word.
    Act {
        #[arg(long)]
        word: String,
        #[arg(long)]
        path: String,
        #[command(flatten)]
        input: Input,
    },
    /// Orbit of a path under generators and their inverses.
    Orbit {
        #[arg(long)]
        path: String,
        /// Word-length bound; searches until saturation when omitted.
        #[arg(long)]
        bound: Option<usize>,
        #[command(flatten)]
        input: Input,
    },
    /// Compare two words on all paths up to a depth.
    Equiv {
        #[arg(long)]
        word: String,
        #[arg(long)]
        other: String,
        #[arg(long, default_value_t = 5)]
        depth: usize,
        #[command(flatten)]
        input: Input,
    },
    /// Truncated forest of paths and the induced action.
    Forest {
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[command(flatten)]
        input: Input,
    },
}

enum Fixture {
    Action(GraphAction),
    Automaton(SelfSimilarAutomaton),
}

fn fixture(name: &str) -> Result<Fixture> {
    Ok(match name {
        "example-4.3" | "s3-loops" => Fixture::Action(s3_loops()),
        "s3-on-three-loops" => Fixture::Action(s3_on_three_loops()),
        "trivial" => Fixture::Action(GraphAction::trivial(bouquet(1))),
        "example-4.6" | "gh-automaton" => Fixture::Automaton(gh_automaton()),
        _ => return Err(Error::Structural(format!("unknown fixture {name}")).into()),
    })
}

fn fixture_json(f: &Fixture) -> Result<Value> {
    Ok(match f {
        Fixture::Action(a) => serde_json::to_value(a.to_descriptor())?,
        Fixture::Automaton(a) => serde_json::to_value(a.to_descriptor())?,
    })
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Serialize)]
struct InputDigest {
    source: String,
    sha256: String,
}

#[derive(Serialize)]
struct Manifest {
    command: String,
    tool_version: &'static str,
    inputs: Vec<InputDigest>,
    flags: BTreeMap<String, Value>,
    provenance: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    result_sha256: Option<String>,
}

struct Run {
    command: String,
    inputs: Vec<InputDigest>,
    flags: BTreeMap<String, Value>,
    provenance: String,
}

impl Run {
    fn new(command: &str) -> Self {
        Run { command: command.into(), inputs: Vec::new(), flags: BTreeMap::new(), provenance: "exact".into() }
    }

    fn flag(&mut self, k: &str, v: impl Serialize) {
        self.flags.insert(k.into(), serde_json::to_value(v).expect("flag serializes"));
    }

    /// Raw JSON of the input and whether it came from a fixture.
    fn load(&mut self, input: &Input) -> Result<Loaded> {
        match (&input.input, &input.fixture) {
            (Some(_), Some(_)) => Err(Error::Structural("give either an input file or --fixture, not both".into()).into()),
            (None, None) => Err(Error::Structural("an input file or --fixture is required".into()).into()),
            (None, Some(name)) => {
                let f = fixture(name)?;
                let bytes = serde_json::to_vec(&fixture_json(&f)?)?;
                self.inputs.push(InputDigest { source: format!("fixture:{name}"), sha256: sha256_hex(&bytes) });
                Ok(Loaded::Fixture(f))
            }
            (Some(path), None) => {
                let bytes = read_input(path)?;
                self.inputs.push(InputDigest { source: format!("file:{}", path.display()), sha256: sha256_hex(&bytes) });
                let value: Value = serde_json::from_slice(&bytes).context("input is not valid JSON")?;
                Ok(Loaded::Json(value))
            }
        }
    }

    fn action(&mut self, input: &Input) -> Result<GraphAction> {
        match self.load(input)? {
            Loaded::Fixture(Fixture::Action(a)) => Ok(a),
            Loaded::Fixture(Fixture::Automaton(_)) => {
                Err(Error::Structural("this command needs a graph action, not an automaton".into()).into())
            }
            Loaded::Json(v) => {
                let d: GraphActionDescriptor = serde_json::from_value(v).context("not a graph-action descriptor")?;
                Ok(d.build()?)
            }
        }
    }

    fn automaton(&mut self, input: &Input) -> Result<SelfSimilarAutomaton> {
        match self.load(input)? {
            Loaded::Fixture(Fixture::Automaton(a)) => Ok(a),
            Loaded::Fixture(Fixture::Action(_)) => {
                Err(Error::Structural("this command needs an automaton, not a graph action".into()).into())
            }
            Loaded::Json(v) => {
                let d: AutomatonDescriptor = serde_json::from_value(v).context("not an automaton descriptor")?;
                Ok(SelfSimilarAutomaton::from_descriptor(&d)?)
            }
        }
    }

    fn manifest(&self, result: Option<&Value>) -> Manifest {
        Manifest {
            command: self.command.clone(),
            tool_version: env!("CARGO_PKG_VERSION"),
            inputs: self.inputs.iter().map(|d| InputDigest { source: d.source.clone(), sha256: d.sha256.clone() }).collect(),
            flags: self.flags.clone(),
            provenance: self.provenance.clone(),
            result_sha256: result.map(|r| sha256_hex(&serde_json::to_vec(r).expect("value serializes"))),
        }
    }
}

enum Loaded {
    Fixture(Fixture),
    Json(Value),
}

fn read_input(path: &FsPath) -> Result<Vec<u8>> {
    if path.as_os_str() == "-" {
        let mut buf = Vec::new();
        std::io::stdin().read_to_end(&mut buf)?;
        Ok(buf)
    } else {
        fs::read(path).with_context(|| format!("cannot read {}", path.display()))
    }
}

/// What a command produced: the JSON result, a one-line summary, an exit code,
/// and optionally raw text that replaces the JSON envelope.
struct Outcome {
    result: Value,
    summary: String,
    code: u8,
    raw: Option<String>,
}

impl Outcome {
    fn ok(result: Value, summary: String) -> Self {
        Outcome { result, summary, code: 0, raw: None }
    }
}

fn vertex_arg(a: &GraphAction, vertex: &Option<String>) -> Result<usize> {
    match vertex {
        None => Ok(0),
        Some(l) => a
            .graph()
            .vertex_index(l)
            .ok_or_else(|| Error::Precondition(format!("no vertex labelled {l}")).into()),
    }
}

fn report_outcome(rep: ValidationReport, what: &str) -> Result<Outcome> {
    let summary = format!("{what}: {rep}");
    let code = if rep.ok { 0 } else { 2 };
    Ok(Outcome { result: serde_json::to_value(&rep)?, summary, code, raw: None })
}

fn mode_of(m: ModeArg) -> Mode {
    match m {
        ModeArg::Fast => Mode::Fast,
        ModeArg::Oracle => Mode::Oracle,
        ModeArg::Both => Mode::Both,
    }
}

fn path_json(a: &SelfSimilarAutomaton, p: &Path) -> Value {
    Value::String(a.path_label(p))
}

fn bratteli(run: &mut Run, a: &GraphAction, levels: usize, mode: BratteliMode, vertex: &Option<String>) -> Result<BratteliDiagram> {
    Ok(match mode {
        BratteliMode::Quotient => {
            run.provenance = "fast".into();
            core_bratteli_quotient(&quotient_graph(a, Mode::Fast)?, levels)?
        }
        BratteliMode::DrFiber => core_bratteli_dr_fiber(a, vertex_arg(a, vertex)?, levels)?,
    })
}

fn execute(command: Command, run: &mut Run) -> Result<Outcome> {
    match command {
        Command::Validate { kind, input } => {
            run.flag("kind", match kind {
                Kind::Groupoid => "groupoid",
                Kind::GraphAction => "graph-action",
                Kind::Automaton => "automaton",
            });
            let loaded = run.load(&input)?;
            match (kind, loaded) {
                (Kind::Groupoid, Loaded::Json(v)) => {
                    let d: GroupoidDescriptor = serde_json::from_value(v).context("not a groupoid descriptor")?;
                    report_outcome(d.validate()?, "groupoid")
                }
                (Kind::Groupoid, Loaded::Fixture(Fixture::Action(a))) => {
                    report_outcome(validate_groupoid(&a.groupoid().to_raw())?, "groupoid")
                }
                (Kind::GraphAction, Loaded::Json(v)) => {
                    let d: GraphActionDescriptor = serde_json::from_value(v).context("not a graph-action descriptor")?;
                    report_outcome(d.validate()?, "graph action")
                }
                (Kind::GraphAction, Loaded::Fixture(Fixture::Action(a))) => {
                    report_outcome(validate_graph_action(&a)?, "graph action")
                }
                (Kind::Automaton, Loaded::Json(v)) => {
                    let d: AutomatonDescriptor = serde_json::from_value(v).context("not an automaton descriptor")?;
                    match SelfSimilarAutomaton::from_descriptor(&d) {
                        Ok(_) => report_outcome(ValidationReport::ok(), "automaton"),
                        Err(Error::Validation(rep)) => report_outcome(rep, "automaton"),
                        Err(e) => Err(e.into()),
                    }
                }
                (Kind::Automaton, Loaded::Fixture(Fixture::Automaton(_))) => report_outcome(ValidationReport::ok(), "automaton"),
                _ => bail!(Error::Structural("the fixture is not of the requested kind".into())),
            }
        }
        Command::Orbits { input } => {
            let a = run.action(&input)?;
            let side = |sa: &groupoid_actions::groupoid::SpaceAction| -> Vec<Value> {
                sa.orbits()
                    .iter()
                    .map(|o| {
                        json!({
                            "members": o.iter().map(|&x| sa.point_label(x)).collect::<Vec<_>>(),
                            "stabilizer_order": sa.stabilizer(o[0]).len(),
                        })
                    })
                    .collect()
            };
            let v = side(a.vertex_action());
            let e = side(a.edge_action());
            let summary = format!("{} vertex orbit(s), {} edge orbit(s)", v.len(), e.len());
            Ok(Outcome::ok(json!({ "vertex_orbits": v, "edge_orbits": e }), summary))
        }
        Command::Spectrum { input } => {
            let a = run.action(&input)?;
            let points = spectrum(&a)?;
            let sizes: Vec<usize> = points.iter().map(|p| p.size).collect();
            let result: Vec<Value> = points
                .iter()
                .map(|p| {
                    let mut v = serde_json::to_value(p).expect("serializes");
                    v["label"] = Value::String(p.label());
                    v
                })
                .collect();
            let sq: usize = sizes.iter().map(|n| n * n).sum();
            Ok(Outcome::ok(json!({ "points": result, "sizes": sizes }), format!("block sizes {sizes:?}, Σn² = {sq}")))
        }
        Command::QuotientGraph { mode, input } => {
            run.flag("mode", mode);
            let a = run.action(&input)?;
            let r = quotient_graph(&a, mode_of(mode))?;
            run.provenance = serde_json::to_value(r.provenance)?.as_str().unwrap_or_default().to_string();
            let mut v = serde_json::to_value(&r)?;
            v["sizes"] = serde_json::to_value(r.sizes())?;
            let mut summary = format!("sizes {:?}, adjacency {:?} ({})", r.sizes(), r.adjacency, run.provenance);
            for w in &r.warnings {
                summary.push_str(&format!("\nwarning: {w}"));
            }
            Ok(Outcome::ok(v, summary))
        }
        Command::KappaCheck { input } => {
            run.provenance = "oracle".into();
            let a = run.action(&input)?;
            let k = kappa_dimension_check(&a);
            let summary = format!(
                "compacts of crossed product {} vs crossed product of compacts {}: {}",
                k.compacts_of_crossed_product,
                k.crossed_product_of_compacts,
                if k.ok { "equal" } else { "DIFFER" }
            );
            Ok(Outcome { result: serde_json::to_value(&k)?, summary, code: if k.ok { 0 } else { 3 }, raw: None })
        }
        Command::DrDims { depth, vertex, input } => {
            run.flag("depth", depth);
            run.flag("vertex", &vertex);
            let a = run.action(&input)?;
            let t = dr_dimension_table(&a, vertex_arg(&a, &vertex)?, depth)?;
            let diag: Vec<u64> = (0..=depth).map(|k| t.table[k][k]).collect();
            let mut summary = format!("fiber of {}: diagonal {diag:?}", t.basepoint);
            for w in &t.warnings {
                summary.push_str(&format!("\nwarning: {w}"));
            }
            Ok(Outcome::ok(serde_json::to_value(&t)?, summary))
        }
        Command::DrBratteli { levels, mode, vertex, input } => {
            run.flag("levels", levels);
            run.flag("mode", mode);
            run.flag("vertex", &vertex);
            let a = run.action(&input)?;
            let b = bratteli(run, &a, levels, mode, &vertex)?;
            let last = b.levels.last().map(|l| l.dims.clone()).unwrap_or_default();
            Ok(Outcome::ok(serde_json::to_value(&b)?, format!("{} levels, last dimensions {last:?}", b.levels.len())))
        }
        Command::Selfsim { op } => selfsim(op, run),
        Command::Ktheory { of, input } => {
            run.flag("of", of);
            let adjacency = match run.load(&input)? {
                Loaded::Json(v) if v.get("adjacency").is_some() => {
                    run.flags.remove("of");
                    serde_json::from_value::<Vec<Vec<i64>>>(v["adjacency"].clone()).context("adjacency must be an integer matrix")?
                }
                loaded => {
                    let a = match loaded {
                        Loaded::Fixture(Fixture::Action(a)) => a,
                        Loaded::Json(v) => serde_json::from_value::<GraphActionDescriptor>(v)
                            .context("not a graph-action descriptor")?
                            .build()?,
                        Loaded::Fixture(Fixture::Automaton(_)) => bail!(Error::Structural("automata have no K-theory here".into())),
                    };
                    match of {
                        KOf::Graph => a.graph().adjacency(),
                        KOf::Quotient => {
                            run.provenance = "fast".into();
                            quotient_graph(&a, Mode::Fast)?.adjacency
                        }
                    }
                }
            };
            let k = graph_k_theory(&adjacency)?;
            let n = adjacency.len();
            let m: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j) - adjacency[j][i]).collect()).collect();
            let snf = smith_normal_form(&to_big(&m))?;
            let diag: Vec<String> = (0..n).map(|i| snf.s[i][i].to_string()).collect();
            let summary = format!("K0 = {}, K1 = {}", k.k0, k.k1);
            Ok(Outcome::ok(json!({ "adjacency": adjacency, "smith_diagonal": diag, "k0": k.k0, "k1": k.k1 }), summary))
        }
        Command::ExportDot { what, depth, raw, input } => {
            run.flag("what", what);
            run.flag("depth", depth);
            run.flag("raw", raw);
            let dot = match what {
                DotWhat::Forest => {
                    let aut = run.automaton(&input)?;
                    forest(aut.graph(), depth).to_dot("forest")
                }
                DotWhat::Graph => run.action(&input)?.graph().to_dot("graph"),
                DotWhat::Quotient => {
                    run.provenance = "fast".into();
                    quotient_graph(&run.action(&input)?, Mode::Fast)?.to_dot()
                }
                DotWhat::Bratteli => {
                    let a = run.action(&input)?;
                    bratteli(run, &a, depth, BratteliMode::Quotient, &None)?.to_dot()
                }
            };
            let summary = format!("{} line(s) of DOT", dot.lines().count());
            Ok(Outcome { result: json!({ "dot": dot }), summary, code: 0, raw: raw.then_some(dot) })
        }
        Command::Fixture { name, raw } => {
            run.flag("name", &name);
            run.flag("raw", raw);
            let v = fixture_json(&fixture(&name)?)?;
            let text = raw.then(|| serde_json::to_string_pretty(&v).map(|t| t + "\n")).transpose()?;
            Ok(Outcome { result: v, summary: format!("fixture {name}"), code: 0, raw: text })
        }
    }
}

fn selfsim(op: SelfsimOp, run: &mut Run) -> Result<Outcome> {
    match op {
        SelfsimOp::Act { word, path, input } => {
            run.command = "selfsim act".into();
            run.flag("word", &word);
            run.flag("path", &path);
            let a = run.automaton(&input)?;
            let w = a.parse_word(&word)?;
            let mu = a.parse_path(&path)?;
            let (img, res) = a.act_and_restrict(&w, &mu)?;
            let summary = format!("{}·{} = {}, restriction {}", a.word_label(&w), a.path_label(&mu), a.path_label(&img), a.word_label(&res));
            Ok(Outcome::ok(
                json!({ "word": a.word_label(&w), "path": path_json(&a, &mu), "image": path_json(&a, &img), "restriction": a.word_label(&res) }),
                summary,
            ))
        }
        SelfsimOp::Orbit { path, bound, input } => {
            run.command = "selfsim orbit".into();
            run.flag("path", &path);
            run.flag("bound", bound);
            let a = run.automaton(&input)?;
            let mu = a.parse_path(&path)?;
            let o = a.orbit_of_path(&mu, bound)?;
            let paths: Vec<Value> = o.paths.iter().map(|p| path_json(&a, p)).collect();
            let summary = format!("orbit of {path}: {} path(s){}", paths.len(), if o.saturated { "" } else { " (not saturated)" });
            Ok(Outcome::ok(json!({ "path": path, "orbit": paths, "word_length": o.word_length, "saturated": o.saturated }), summary))
        }
        SelfsimOp::Equiv { word, other, depth, input } => {
            run.command = "selfsim equiv".into();
            run.flag("word", &word);
            run.flag("other", &other);
            run.flag("depth", depth);
            let a = run.automaton(&input)?;
            let (w1, w2) = (a.parse_word(&word)?, a.parse_word(&other)?);
            let (result, summary) = match a.depth_bounded_equivalence(&w1, &w2, depth)? {
                Equivalence::EqualToDepth { depth } => {
                    (json!({ "verdict": "equal-to-depth", "depth": depth }), format!("{word} and {other} agree to depth {depth}"))
                }
                Equivalence::Distinguished { depth, witness, left, right } => (
                    json!({
                        "verdict": "distinguished",
                        "depth": depth,
                        "witness": path_json(&a, &witness),
                        "left": path_json(&a, &left),
                        "right": path_json(&a, &right),
                    }),
                    format!(
                        "{word}·{} = {} but {other}·{} = {}",
                        a.path_label(&witness),
                        a.path_label(&left),
                        a.path_label(&witness),
                        a.path_label(&right)
                    ),
                ),
            };
            Ok(Outcome::ok(result, summary))
        }
        SelfsimOp::Forest { depth, input } => {
            run.command = "selfsim forest".into();
            run.flag("depth", depth);
            let a = run.automaton(&input)?;
            let act = a.induced_forest_action(depth)?;
            let rep = validate_graph_action(&act)?;
            let f = act.graph();
            let children: BTreeMap<String, Vec<String>> = (0..f.num_vertices())
                .map(|v| {
                    (
                        f.vertex_label(v).to_string(),
                        f.edges_into(v).into_iter().map(|t| f.vertex_label(f.src(t)).to_string()).collect(),
                    )
                })
                .collect();
            let summary = format!(
                "forest to depth {depth}: {} vertices, {} edges; induced groupoid has {} arrows ({})",
                f.num_vertices(),
                f.num_edges(),
                act.groupoid().num_arrows(),
                rep
            );
            let code = if rep.ok { 0 } else { 3 };
            Ok(Outcome {
                result: json!({
                    "depth": depth,
                    "forest": f.to_descriptor(),
                    "children": children,
                    "groupoid_arrows": act.groupoid().arrow_labels(),
                    "validation": rep,
                }),
                summary,
                code,
                raw: None,
            })
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Validate { .. } => "validate",
        Command::Orbits { .. } => "orbits",
        Command::Spectrum { .. } => "spectrum",
        Command::QuotientGraph { .. } => "quotient-graph",
        Command::KappaCheck { .. } => "kappa-check",
        Command::DrDims { .. } => "dr-dims",
        Command::DrBratteli { .. } => "dr-bratteli",
        Command::Selfsim { .. } => "selfsim",
        Command::Ktheory { .. } => "ktheory",
        Command::ExportDot { .. } => "export-dot",
        Command::Fixture { .. } => "fixture",
    }
}

/// Exit code and kind for a failure.
fn classify(err: &anyhow::Error) -> (u8, &'static str, Value) {
    if let Some(e) = err.downcast_ref::<Error>() {
        return match e {
            Error::Structural(_) => (4, "malformed-input", Value::Null),
            Error::Validation(rep) => (2, "validation", serde_json::to_value(rep).unwrap_or(Value::Null)),
            Error::Precondition(_) => (2, "precondition", Value::Null),
            Error::BoundExceeded(_) => (2, "bound-exceeded", Value::Null),
            Error::Unsupported(_) => (2, "unsupported", Value::Null),
            Error::Consistency(_) => (3, "consistency", Value::Null),
            Error::RouteMismatch(m) => (3, "route-mismatch", serde_json::to_value(m).unwrap_or(Value::Null)),
        };
    }
    (4, "malformed-input", Value::Null)
}

fn cache_dir() -> Option<PathBuf> {
    std::env::var_os(CACHE_ENV).filter(|s| !s.is_empty()).map(PathBuf::from)
}

fn load_cache(dir: &FsPath) -> Result<()> {
    let file = dir.join(CACHE_FILE);
    if !file.exists() {
        return Ok(());
    }
    let tables: Vec<CharacterTableJson> = serde_json::from_slice(&fs::read(&file)?)?;
    for t in &tables {
        preload(CharacterTable::from_json(t)?)?;
    }
    Ok(())
}

fn save_cache(dir: &FsPath) -> Result<()> {
    fs::create_dir_all(dir)?;
    let tables: Vec<CharacterTableJson> = cached_tables().iter().map(|t| t.to_json()).collect();
    fs::write(dir.join(CACHE_FILE), serde_json::to_vec(&tables)?)?;
    Ok(())
}

/// Write to stdout, tolerating a reader that goes away early.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

fn print_json(v: &impl Serialize) {
    emit(&(serde_json::to_string_pretty(v).expect("output serializes") + "\n"));
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cache = cache_dir();
    if let Some(dir) = &cache {
        if let Err(e) = load_cache(dir) {
            eprintln!("warning: ignoring character-table cache: {e:#}");
        }
    }
    let mut run = Run::new(command_name(&cli.command));
    let outcome = execute(cli.command, &mut run);
    if let Some(dir) = &cache {
        if let Err(e) = save_cache(dir) {
            eprintln!("warning: cannot write character-table cache: {e:#}");
        }
    }
    match outcome {
        Ok(o) => {
            match &o.raw {
                Some(text) => emit(text),
                None => print_json(&json!({ "manifest": run.manifest(Some(&o.result)), "result": o.result })),
            }
            eprintln!("{}", o.summary);
            ExitCode::from(o.code)
        }
        Err(err) => {
            let (code, kind, detail) = classify(&err);
            let mut error = json!({ "kind": kind, "message": format!("{err:#}") });
            if !detail.is_null() {
                error["detail"] = detail;
            }
            print_json(&json!({ "manifest": run.manifest(None), "error": error }));
            eprintln!("error: {err:#}");
            ExitCode::from(code)
        }
    }
}

