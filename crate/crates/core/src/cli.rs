//! Command-line front end. Results go to stdout as JSON with sorted keys, a
//! one-line summary goes to stderr.
//!
//! Exit codes: 0 success, 1 negative verdict, 2 usage or input error,
//! 3 budget exhausted.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::code::{
    search_general, search_linear, verify, verify_with_entropy, AlphabetsFile, Code, GeneralSpace, LinearSpace, SearchOptions,
    SearchOutcome,
};
use crate::error::{Error, Result};
use crate::model::{validate, Problem, ProblemSpec};
use crate::rank::constraints::{constraint_membership, ConstraintSet};
use crate::rank::distribution::Distribution;
use crate::rank::representable::{representable_function, SubspaceFamily, SubspaceFamilyExport};
use crate::rank::{RankFunction, RankFunctionExport};
use crate::rational::{self, Rational};
use crate::routing::{routing_capacity, RoutingMode, RoutingStatus};
use crate::shannon::{outer_bound, BoundMode, BoundQuery, BoundStatus};
use crate::transform::{self, TransformOutput};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "netcap", version, about = "Capacity bounds, transformations and code search for network coding")]
struct Cli {
    /// Also write the JSON result to this file.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a problem file and print its diagnostics.
    Validate { problem: PathBuf },
    /// Polymatroid outer bound as an exact rational LP.
    Bound {
        problem: PathBuf,
        /// Add node keys and the secrecy constraints.
        #[arg(long)]
        secure: bool,
        #[arg(long, value_enum, default_value_t = Mode::Throughput)]
        mode: Mode,
        /// Rates, direction or weights as {"source": "rational"}.
        #[arg(long)]
        rates: Option<PathBuf>,
        /// Capacities as {"edge": "rational"}.
        #[arg(long)]
        caps: Option<PathBuf>,
    },
    /// Fractional routing capacity by subnetwork packing.
    Routing {
        problem: PathBuf,
        /// Subnetworks need not reach every sink of their source.
        #[arg(long)]
        generalised: bool,
        /// Only inclusion-minimal subnetworks.
        #[arg(long)]
        minimal: bool,
        #[arg(long, value_enum, default_value_t = Mode::Throughput)]
        mode: Mode,
        /// Rates, direction or weights as {"source": "rational"}.
        #[arg(long)]
        rates: Option<PathBuf>,
        /// Capacities as {"edge": "rational"}.
        #[arg(long)]
        caps: Option<PathBuf>,
    },
    /// Apply a problem transformation, optionally lifting a code across it.
    Transform {
        /// A problem, or {"users": [...], "access": [[...]]} for secret-share.
        input: PathBuf,
        #[arg(long, value_enum)]
        kind: Kind,
        /// Code for the input problem to lift (incremental, secure, partial-routing).
        #[arg(long)]
        code: Option<PathBuf>,
    },
    /// Exhaustive search for a zero-error code.
    Search {
        problem: PathBuf,
        #[arg(long, value_enum, default_value_t = Family::General)]
        family: Family,
        /// Field size for linear codes.
        #[arg(long, default_value_t = 2)]
        q: u32,
        /// Per-element sizes {"sources": {}, "edges": {}, "keys": {}}: alphabet
        /// sizes for table codes, dimensions for linear codes.
        #[arg(long)]
        alphabets: Option<PathBuf>,
        /// Default source alphabet (table) or length (linear).
        #[arg(long)]
        source_size: Option<u32>,
        /// Default edge alphabet (table) or width (linear).
        #[arg(long)]
        edge_size: Option<u32>,
        /// Require exact independence for every adversary.
        #[arg(long, value_enum)]
        secrecy: Option<Secrecy>,
        /// Maximum number of edge assignments tried.
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
        /// Threads splitting the first edge's choices.
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Verify a code: decodability, secrecy and fitness.
    Verify {
        problem: PathBuf,
        /// Table or linear code file.
        #[arg(long)]
        code: PathBuf,
        /// Also test exact independence for every adversary.
        #[arg(long, value_enum)]
        secrecy: Option<Secrecy>,
    },
    /// Check a rank function, distribution or subspace family.
    Rankfn {
        #[arg(long, value_enum)]
        check: Check,
        input: PathBuf,
        /// Problem for the constraint check.
        #[arg(long)]
        problem: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum Mode {
    Feasibility,
    Throughput,
    Weighted,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum Kind {
    Supernode1,
    Supernode2,
    PartialRouting,
    Incremental,
    Secure,
    SecretShare,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum Family {
    General,
    Linear,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum Secrecy {
    Strong,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum Check {
    Polymatroid,
    Quasiuniform,
    Constraints,
}

/// What a command produced: JSON for stdout, a summary line, an exit code.
struct Outcome {
    json: Value,
    summary: String,
    code: i32,
}

impl Outcome {
    fn new(json: Value, summary: impl Into<String>, ok: bool) -> Self {
        Self { json, summary: summary.into(), code: if ok { EXIT_OK } else { EXIT_NEGATIVE } }
    }
}

/// Runs the command line and returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if code == EXIT_OK { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(o) => {
            let text = serde_json::to_string_pretty(&o.json).expect("json value serializes");
            let _ = writeln!(out, "{text}");
            let _ = writeln!(err, "{}", o.summary);
            if let Some(path) = &cli.output {
                if let Err(e) = std::fs::write(path, format!("{text}\n")) {
                    let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
                    return EXIT_USAGE;
                }
            }
            o.code
        }
        Err(Error::BudgetExhausted) => {
            let _ = writeln!(out, "{}", json!({ "status": "budget_exhausted" }));
            let _ = writeln!(err, "budget exhausted");
            EXIT_BUDGET
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn load_problem(path: &Path) -> Result<Problem> {
    Problem::from_json(&read(path)?)
}

fn load_map(path: &Path) -> Result<BTreeMap<String, Rational>> {
    let raw: BTreeMap<String, String> = serde_json::from_str(&read(path)?)?;
    raw.into_iter().map(|(k, v)| Ok((k, rational::parse_rational(&v)?))).collect()
}

/// Values for every id, from a file or a default.
fn per_id(ids: Vec<&str>, file: Option<&Path>, default: Vec<Rational>, what: &str) -> Result<Vec<Rational>> {
    let Some(path) = file else { return Ok(default) };
    let map = load_map(path)?;
    if let Some(k) = map.keys().find(|k| !ids.contains(&k.as_str())) {
        return Err(Error::Parse(format!("{what} file names unknown id {k:?}")));
    }
    Ok(ids.iter().zip(default).map(|(id, d)| map.get(*id).cloned().unwrap_or(d)).collect())
}

fn rates_and_caps(p: &Problem, rates: Option<&Path>, caps: Option<&Path>) -> Result<(Vec<Rational>, Vec<Rational>)> {
    let r = per_id(p.sources.iter().map(|s| s.id.as_str()).collect(), rates, p.rates_or_unit(), "rates")?;
    let c = per_id(p.edges.iter().map(|e| e.id.as_str()).collect(), caps, p.capacities_or_unit(), "capacities")?;
    Ok((r, c))
}

fn bound_mode(mode: Mode, v: Vec<Rational>) -> BoundMode {
    match mode {
        Mode::Feasibility => BoundMode::Feasibility { rates: v },
        Mode::Throughput => BoundMode::Throughput { direction: v },
        Mode::Weighted => BoundMode::Weighted { weights: v },
    }
}

fn to_value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("serializable")
}

fn execute(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Validate { problem } => {
            let spec = ProblemSpec::from_json(&read(problem)?)?;
            let diags: Vec<String> = validate(&spec).iter().map(|d| d.to_string()).collect();
            if !diags.is_empty() {
                let summary = format!("invalid: {}", diags.join("; "));
                return Ok(Outcome::new(json!({ "valid": false, "diagnostics": diags }), summary, false));
            }
            let p = Problem::from_spec(&spec)?;
            let order: Vec<&str> = p.topological_order().iter().map(|&e| p.edges[e].id.as_str()).collect();
            let summary = format!("valid: {} nodes, {} edges, {} sources", p.num_nodes(), p.num_edges(), p.num_sources());
            Ok(Outcome::new(json!({ "valid": true, "diagnostics": [], "topological_order": order }), summary, true))
        }
        Command::Bound { problem, secure, mode, rates, caps } => {
            let p = load_problem(problem)?;
            let (r, c) = rates_and_caps(&p, rates.as_deref(), caps.as_deref())?;
            let q = BoundQuery::new(p, Some(c), bound_mode(*mode, r), *secure)?;
            let res = outer_bound(&q)?;
            if res.status == BoundStatus::BudgetExhausted {
                return Err(Error::BudgetExhausted);
            }
            let value = res.value.as_ref().map(rational::format_rational);
            let summary = format!("{} bound: {:?} {}", res.mode, res.status, value.as_deref().unwrap_or("-"));
            let ok = res.is_feasible();
            Ok(Outcome::new(to_value(&res.to_export()), summary, ok))
        }
        Command::Routing { problem, generalised, minimal, mode, rates, caps } => {
            let p = load_problem(problem)?;
            let (r, c) = rates_and_caps(&p, rates.as_deref(), caps.as_deref())?;
            let m = if *generalised { RoutingMode::Generalised } else { RoutingMode::Strict };
            let res = routing_capacity(&p, m, &c, &bound_mode(*mode, r), *minimal)?;
            let value = res.value.as_ref().map(rational::format_rational);
            let summary = format!("{:?} routing: {:?} {}", res.mode, res.status, value.as_deref().unwrap_or("-"));
            let ok = res.status != RoutingStatus::Infeasible;
            Ok(Outcome::new(to_value(&res.to_export(&p)), summary, ok))
        }
        Command::Transform { input, kind, code } => transform_command(input, *kind, code.as_deref()),
        Command::Search { problem, family, q, alphabets, source_size, edge_size, secrecy, budget, workers } => {
            let p = load_problem(problem)?;
            let sizes: AlphabetsFile = match alphabets {
                Some(path) => serde_json::from_str(&read(path)?)?,
                None => AlphabetsFile::default(),
            };
            let opts = SearchOptions { strong_secrecy: secrecy.is_some(), budget: *budget, workers: *workers };
            let strong = secrecy.is_some();
            let (outcome, nodes) = match family {
                Family::General => {
                    let space = general_space(&p, &sizes, source_size.unwrap_or(2), edge_size.unwrap_or(2))?;
                    let r = search_general(&p, &space, &opts)?;
                    (r.outcome.map_found(Code::General), r.nodes)
                }
                Family::Linear => {
                    let space = linear_space(&p, *q, &sizes, source_size.unwrap_or(1), edge_size.unwrap_or(1))?;
                    let r = search_linear(&p, &space, &opts)?;
                    (r.outcome.map_found(Code::Linear), r.nodes)
                }
            };
            match outcome {
                SearchOutcome::Found(c) => {
                    let report = verify(&c, &p, strong)?;
                    let body = json!({
                        "outcome": "found",
                        "nodes": nodes,
                        "code": to_value(&c.to_file(&p)),
                        "verified": report.passed(),
                    });
                    Ok(Outcome::new(body, format!("found a code after {nodes} assignments"), report.passed()))
                }
                SearchOutcome::NotFound => Ok(Outcome::new(
                    json!({ "outcome": "not_found", "nodes": nodes }),
                    format!("no code exists in the searched space ({nodes} assignments)"),
                    false,
                )),
                SearchOutcome::BudgetExhausted => Ok(Outcome {
                    json: json!({ "outcome": "budget_exhausted", "nodes": nodes }),
                    summary: format!("budget of {budget} assignments exhausted"),
                    code: EXIT_BUDGET,
                }),
            }
        }
        Command::Verify { problem, code, secrecy } => {
            let p = load_problem(problem)?;
            let c = Code::from_json(&read(code)?, &p)?;
            let report = verify_with_entropy(&c, &p, secrecy.is_some())?;
            let summary = format!(
                "zero-error: {}, strongly secure: {}",
                report.zero_error(),
                report.strongly_secure().map_or("not checked".to_string(), |b| b.to_string())
            );
            let mut body = to_value(&report);
            // leakage figures are floating point
            if let Some(list) = body.get_mut("secrecy").and_then(Value::as_array_mut) {
                for v in list {
                    v["approx"] = json!(true);
                }
            }
            Ok(Outcome::new(body, summary, report.passed()))
        }
        Command::Rankfn { check, input, problem } => rankfn_command(*check, input, problem.as_deref()),
    }
}

impl<C> SearchOutcome<C> {
    fn map_found<D>(self, f: impl FnOnce(C) -> D) -> SearchOutcome<D> {
        match self {
            SearchOutcome::Found(c) => SearchOutcome::Found(f(c)),
            SearchOutcome::NotFound => SearchOutcome::NotFound,
            SearchOutcome::BudgetExhausted => SearchOutcome::BudgetExhausted,
        }
    }
}

fn sized<T: Copy>(map: &BTreeMap<String, u32>, ids: &[&str], default: T, what: &str, conv: impl Fn(u32) -> T) -> Result<Vec<T>> {
    if let Some(k) = map.keys().find(|k| !ids.contains(&k.as_str())) {
        return Err(Error::Parse(format!("{what} names unknown id {k:?}")));
    }
    Ok(ids.iter().map(|id| map.get(*id).map_or(default, |&v| conv(v))).collect())
}

fn general_space(p: &Problem, f: &AlphabetsFile, source: u32, edge: u32) -> Result<GeneralSpace> {
    let sids: Vec<&str> = p.sources.iter().map(|s| s.id.as_str()).collect();
    let eids: Vec<&str> = p.edges.iter().map(|e| e.id.as_str()).collect();
    let nids: Vec<&str> = p.nodes.iter().map(String::as_str).collect();
    Ok(GeneralSpace {
        source_alphabets: sized(&f.sources, &sids, source, "sources", |v| v)?,
        edge_alphabets: sized(&f.edges, &eids, edge, "edges", |v| v)?,
        key_alphabets: if f.keys.is_empty() { None } else { Some(sized(&f.keys, &nids, 1, "keys", |v| v)?) },
    })
}

fn linear_space(p: &Problem, q: u32, f: &AlphabetsFile, length: u32, width: u32) -> Result<LinearSpace> {
    let sids: Vec<&str> = p.sources.iter().map(|s| s.id.as_str()).collect();
    let eids: Vec<&str> = p.edges.iter().map(|e| e.id.as_str()).collect();
    let nids: Vec<&str> = p.nodes.iter().map(String::as_str).collect();
    let us = |v: u32| v as usize;
    Ok(LinearSpace {
        q,
        lengths: sized(&f.sources, &sids, us(length), "sources", us)?,
        widths: sized(&f.edges, &eids, us(width), "edges", us)?,
        key_lengths: if f.keys.is_empty() { None } else { Some(sized(&f.keys, &nids, 0, "keys", us)?) },
    })
}

#[derive(Deserialize)]
struct SecretSharingFile {
    users: Vec<String>,
    access: Vec<Vec<String>>,
}

fn transform_json(input: &Problem, out: &TransformOutput) -> Value {
    json!({
        "problem": to_value(&out.problem.to_spec()),
        "map": out.map.to_json(input, &out.problem),
        "provenance": to_value(&out.provenance),
    })
}

fn transform_command(input: &Path, kind: Kind, code: Option<&Path>) -> Result<Outcome> {
    let text = read(input)?;
    if kind == Kind::SecretShare {
        if code.is_some() {
            return Err(Error::InvalidArgument("secret-share takes no code".into()));
        }
        let f: SecretSharingFile = serde_json::from_str(&text)?;
        let p = transform::secret_sharing_to_snc(&f.users, &f.access)?;
        let summary = format!("secret sharing problem with {} adversaries", p.adversaries().len());
        return Ok(Outcome::new(json!({ "problem": to_value(&p.to_spec()) }), summary, true));
    }
    let p = Problem::from_json(&text)?;
    let input_code = code.map(|c| read(c).and_then(|t| Code::from_json(&t, &p))).transpose()?;
    let (out, lifted) = match (kind, input_code) {
        (Kind::Supernode1 | Kind::Supernode2, Some(_)) => {
            return Err(Error::InvalidArgument("supernode transforms take no code".into()))
        }
        (Kind::Supernode1, None) => (transform::supernode_variation(&p, 1)?, None),
        (Kind::Supernode2, None) => (transform::supernode_variation(&p, 2)?, None),
        (Kind::PartialRouting, None) => (transform::remove_partial_routing(&p, None)?, None),
        (Kind::PartialRouting, Some(c)) => {
            let out = transform::remove_partial_routing(&p, None)?;
            let general = match c {
                Code::General(g) => g,
                Code::Linear(_) => return Err(Error::InvalidArgument("routed codes are table codes".into())),
            };
            let lifted = transform::lift_code_routing(&general, &p, &out)?;
            (out, Some(lifted))
        }
        (Kind::Incremental, None) => (transform::incremental_transform(&p)?, None),
        (Kind::Incremental, Some(c)) => {
            let (out, lifted) = transform::lift_code_incremental(&c, &p)?;
            (out, Some(lifted))
        }
        (Kind::Secure, None) => (transform::secure_transform(&p)?, None),
        (Kind::Secure, Some(c)) => {
            let (out, lifted) = transform::lift_code_secure(&c, &p)?;
            (out, Some(lifted))
        }
        (Kind::SecretShare, _) => unreachable!("handled above"),
    };
    let mut body = transform_json(&p, &out);
    let mut summary = format!(
        "{} nodes, {} edges, {} sources",
        out.problem.num_nodes(),
        out.problem.num_edges(),
        out.problem.num_sources()
    );
    let mut ok = true;
    if let Some(l) = lifted {
        let lifted = Code::General(l);
        let report = verify(&lifted, &out.problem, out.problem.is_secure())?;
        ok = report.passed();
        body["code"] = to_value(&lifted.to_file(&out.problem));
        body["verified"] = json!(ok);
        summary.push_str(&format!("; lifted code verified: {ok}"));
    }
    Ok(Outcome::new(body, summary, ok))
}

enum RankInput {
    Function(RankFunction),
    Distribution(Distribution),
}

fn load_rank_input(path: &Path) -> Result<RankInput> {
    let text = read(path)?;
    let v: Value = serde_json::from_str(&text)?;
    if v.get("pmf").is_some() {
        return Ok(RankInput::Distribution(Distribution::from_json(&text)?));
    }
    if v.get("spans").is_some() {
        let export: SubspaceFamilyExport = serde_json::from_value(v)?;
        return Ok(RankInput::Function(representable_function(&SubspaceFamily::from_export(&export)?)));
    }
    let export: RankFunctionExport = serde_json::from_value(v)?;
    Ok(RankInput::Function(RankFunction::from_export(&export)?))
}

fn rankfn_command(check: Check, input: &Path, problem: Option<&Path>) -> Result<Outcome> {
    let data = load_rank_input(input)?;
    match check {
        Check::Polymatroid => {
            let h = match data {
                RankInput::Function(h) => h,
                RankInput::Distribution(d) => d
                    .entropy_function()?
                    .exact()
                    .ok_or_else(|| Error::InvalidArgument("entropies of this distribution are not rational".into()))?,
            };
            let verdict = h.is_polymatroid_full();
            let ok = verdict.is_ok();
            let body = json!({ "check": "polymatroid", "pass": ok, "violation": verdict.err().map(|w| format!("{w:?}")) });
            Ok(Outcome::new(body, format!("polymatroid: {ok}"), ok))
        }
        Check::Quasiuniform => {
            let RankInput::Distribution(d) = data else {
                return Err(Error::InvalidArgument("quasi-uniformity needs a distribution".into()));
            };
            let verdict = d.is_quasi_uniform();
            let ok = verdict.is_ok();
            let witness = verdict.err().map(|w| {
                json!({
                    "subset": d.ground().subset_key(w.subset),
                    "heavier": { "point": w.heavier.0, "p": rational::format_rational(&w.heavier.1) },
                    "lighter": { "point": w.lighter.0, "p": rational::format_rational(&w.lighter.1) },
                })
            });
            let body = json!({ "check": "quasiuniform", "pass": ok, "witness": witness });
            Ok(Outcome::new(body, format!("quasi-uniform: {ok}"), ok))
        }
        Check::Constraints => {
            let path = problem.ok_or_else(|| Error::InvalidArgument("--problem is required for constraints".into()))?;
            let p = load_problem(path)?;
            let mut results = serde_json::Map::new();
            let mut ok = true;
            for which in ConstraintSet::ALL {
                if which == ConstraintSet::Secrecy && !p.is_secure() {
                    continue;
                }
                let verdict = match &data {
                    RankInput::Function(h) => constraint_membership(h, &p, which)?,
                    RankInput::Distribution(d) => constraint_membership(d, &p, which)?,
                };
                ok &= verdict.is_ok();
                let v = match verdict {
                    Ok(()) => json!({ "pass": true }),
                    Err(w) => json!({ "pass": false, "violation": w.to_string() }),
                };
                results.insert(which.name().to_string(), v);
            }
            let body = json!({ "check": "constraints", "pass": ok, "sets": results });
            Ok(Outcome::new(body, format!("constraints: {ok}"), ok))
        }
    }
}
