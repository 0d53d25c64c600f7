//! Command-line front end.
//!
//! Every command prints a run report as canonical JSON on stdout:
//!
//! ```text
//! {"command": …, "inputs": {name: {"path", "sha256"}}, "outputs": …,
//!  "tolerances": {…}, "timings": {stage: ms}}
//! ```
//!
//! `timings` only appears with `--timings`, so reports are byte-identical
//! across runs by default. Exit codes: 0 success, 1 numerical or
//! mathematical failure, 2 unreadable or invalid input, 3 dimension
//! mismatch, 4 enumeration cap exceeded.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::contractive::{enumerate_contractive, uniqueness, EnumerationMode};
use crate::error::Error;
use crate::geometry::halmos_decompose;
use crate::graph::analyze_graph;
use crate::instances::{build, refinement_csv, refinement_study, InstanceSpec};
use crate::json::to_canonical_string;
use crate::matrix::{ComplexMatrix, Subspace, TolerancePolicy};
use crate::riccati::{invariance_check, solve_spectral, BlockOperator, RiccatiSolution};

pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_DIMENSION: i32 = 3;
pub const EXIT_CAP: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "riccati", version, about = "Operator Riccati equations via invariant graph subspaces")]
pub struct Cli {
    #[command(flatten)]
    pub tol: TolFlags,
    /// Add wall-clock timings per stage to the report (breaks byte-identity).
    #[arg(long, global = true)]
    pub timings: bool,
    #[command(subcommand)]
    pub command: Command,
}

/// Overrides applied on top of the `RICCATI_TOL_PROFILE` preset.
#[derive(Args, Debug, Default)]
pub struct TolFlags {
    #[arg(long, global = true)]
    pub rank_rtol: Option<f64>,
    #[arg(long, global = true)]
    pub cluster_atol: Option<f64>,
    #[arg(long, global = true)]
    pub residual_atol: Option<f64>,
    #[arg(long, global = true)]
    pub residual_rtol: Option<f64>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Canonical decomposition of the pair (P, Q) of subspace JSON files.
    Decompose {
        p: PathBuf,
        q: PathBuf,
    },
    /// Spectral solutions of a block operator JSON file.
    Solve {
        b: PathBuf,
        /// Enumerate contractive solutions around each contractive spectral one.
        #[arg(long)]
        enumerate_contractive: bool,
        /// Report the uniqueness verdict for each contractive spectral solution.
        #[arg(long)]
        check_uniqueness: bool,
        /// Random admissible subspaces drawn on top of the lattice.
        #[arg(long, default_value_t = 0)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Build a built-in instance: `involution K`, `multiplication N`,
    /// `random N0 N1 SEED [--gap G]`, `constructed-nonunique SEED`,
    /// `constructed-dissipative SEED`.
    Example {
        kind: String,
        params: Vec<String>,
        #[arg(long)]
        gap: Option<f64>,
        /// Write the instance JSON here instead of embedding it in the report.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Refinement table of the multiplication example for a comma-separated
    /// list of grid sizes.
    Refine {
        n_list: String,
        /// Write the CSV table (n,norm_x,dist) here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Residual, invariance defect and classification of X for B.
    Check {
        b: PathBuf,
        x: PathBuf,
    },
}

/// A failed command: exit code plus message for stderr.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::DimensionMismatch(_) => EXIT_DIMENSION,
            Error::TooManyClusters { .. } | Error::TooManyComponents { .. } => EXIT_CAP,
            Error::InvalidSpec(_) | Error::InvalidMatrix(_) | Error::NotHermitian { .. } => EXIT_INPUT,
            _ => EXIT_FAILURE,
        };
        Failure { code, message: e.to_string() }
    }
}

fn input_failure(message: String) -> Failure {
    Failure { code: EXIT_INPUT, message }
}

#[derive(Serialize)]
struct InputDigest {
    path: String,
    sha256: String,
}

#[derive(Serialize)]
struct RunReport {
    command: &'static str,
    inputs: BTreeMap<&'static str, InputDigest>,
    outputs: Value,
    tolerances: TolerancePolicy,
    #[serde(skip_serializing_if = "Option::is_none")]
    timings: Option<BTreeMap<&'static str, f64>>,
}

struct Stopwatch {
    enabled: bool,
    stages: BTreeMap<&'static str, f64>,
}

impl Stopwatch {
    fn time<T>(&mut self, stage: &'static str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        if self.enabled {
            *self.stages.entry(stage).or_default() += start.elapsed().as_secs_f64() * 1e3;
        }
        out
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<(T, InputDigest), Failure> {
    let bytes = std::fs::read(path).map_err(|e| input_failure(format!("cannot read {}: {e}", path.display())))?;
    let digest = Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect();
    let value = serde_json::from_slice(&bytes).map_err(|e| {
        input_failure(format!("{}: line {}, column {}: {e}", path.display(), e.line(), e.column()))
    })?;
    Ok((value, InputDigest { path: path.display().to_string(), sha256: digest }))
}

/// A block operator file: either the operator itself or an instance file
/// produced by `example`, whose operator sits under `"b"`.
fn read_block(path: &Path) -> Result<(BlockOperator, InputDigest), Failure> {
    #[derive(serde::Deserialize)]
    struct Wrapped {
        b: BlockOperator,
    }
    let (value, digest): (Value, _) = read_json(path)?;
    let wrapped = value.get("b").is_some_and(Value::is_object);
    let bytes = std::fs::read(path).map_err(|e| input_failure(format!("cannot read {}: {e}", path.display())))?;
    let parsed = if wrapped {
        serde_json::from_slice::<Wrapped>(&bytes).map(|w| w.b)
    } else {
        serde_json::from_slice::<BlockOperator>(&bytes)
    };
    let b = parsed.map_err(|e| {
        let code = if e.to_string().starts_with("dimension mismatch") {
            EXIT_DIMENSION
        } else {
            EXIT_INPUT
        };
        let message = if e.line() == 0 {
            format!("{}: {e}", path.display())
        } else {
            format!("{}: line {}, column {}: {e}", path.display(), e.line(), e.column())
        };
        Failure { code, message }
    })?;
    Ok((b, digest))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents).map_err(|e| Failure {
        code: EXIT_FAILURE,
        message: format!("cannot write {}: {e}", path.display()),
    })
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("library types serialize to JSON")
}

pub fn tolerances(flags: &TolFlags) -> Result<TolerancePolicy, Failure> {
    let mut pol = TolerancePolicy::from_env()?;
    if let Some(v) = flags.rank_rtol {
        pol.rank_rtol = v;
    }
    if let Some(v) = flags.cluster_atol {
        pol.cluster_atol = v;
    }
    if let Some(v) = flags.residual_atol {
        pol.residual_atol = v;
    }
    if let Some(v) = flags.residual_rtol {
        pol.residual_rtol = v;
    }
    pol.validate()?;
    Ok(pol)
}

fn parse_param<T: std::str::FromStr>(params: &[String], i: usize, name: &str) -> Result<T, Failure> {
    let raw = params.get(i).ok_or_else(|| input_failure(format!("missing parameter {name}")))?;
    raw.parse().map_err(|_| input_failure(format!("parameter {name} must be a number, got {raw:?}")))
}

pub fn parse_example(kind: &str, params: &[String], gap: Option<f64>) -> Result<InstanceSpec, Failure> {
    let expect = |n: usize| {
        if params.len() == n {
            Ok(())
        } else {
            Err(input_failure(format!("{kind} takes {n} parameter(s), got {}", params.len())))
        }
    };
    let spec = match kind {
        "involution" => {
            expect(1)?;
            InstanceSpec::Involution { k: parse_param(params, 0, "K")? }
        }
        "multiplication" => {
            expect(1)?;
            InstanceSpec::Multiplication { n: parse_param(params, 0, "N")? }
        }
        "random" => {
            expect(3)?;
            InstanceSpec::Random {
                n0: parse_param(params, 0, "N0")?,
                n1: parse_param(params, 1, "N1")?,
                seed: parse_param(params, 2, "SEED")?,
                gap,
            }
        }
        "constructed-nonunique" | "constructed_nonunique" => {
            expect(1)?;
            InstanceSpec::ConstructedNonunique { seed: parse_param(params, 0, "SEED")? }
        }
        "constructed-dissipative" | "constructed_dissipative" => {
            expect(1)?;
            InstanceSpec::ConstructedDissipative { seed: parse_param(params, 0, "SEED")? }
        }
        other => {
            return Err(input_failure(format!(
                "unknown instance kind {other:?} (involution, multiplication, random, constructed-nonunique, constructed-dissipative)"
            )))
        }
    };
    if gap.is_some() && !matches!(spec, InstanceSpec::Random { .. }) {
        return Err(input_failure("--gap only applies to random instances".into()));
    }
    spec.validate()?;
    Ok(spec)
}

/// Runs a parsed command and returns the canonical report.
pub fn execute(cli: &Cli) -> Result<String, Failure> {
    let pol = tolerances(&cli.tol)?;
    let mut clock = Stopwatch { enabled: cli.timings, stages: BTreeMap::new() };
    let mut inputs = BTreeMap::new();
    let (command, outputs) = match &cli.command {
        Command::Decompose { p, q } => {
            let (p_sub, dp): (Subspace, _) = read_json(p)?;
            let (q_sub, dq): (Subspace, _) = read_json(q)?;
            inputs.insert("p", dp);
            inputs.insert("q", dq);
            let d = clock.time("decompose", || halmos_decompose(&p_sub, &q_sub, &pol))?;
            let g = clock.time("graph", || analyze_graph(&p_sub, &q_sub, &pol))?;
            let outputs = json!({
                "decomposition": to_value(&d),
                "dist": g.dist,
                "is_graph": g.is_graph,
                "graph": to_value(&g),
            });
            ("decompose", outputs)
        }
        Command::Solve { b, enumerate_contractive: enumerate, check_uniqueness, samples, seed } => {
            let (op, db) = read_block(b)?;
            inputs.insert("b", db);
            let sols = clock.time("solve", || solve_spectral(&op, &pol))?;
            let mut outputs = json!({ "solutions": to_value(&sols) });
            let anchors: Vec<&RiccatiSolution> = sols.iter().filter(|s| s.is_contractive).collect();
            if *enumerate {
                let mode = if *samples > 0 {
                    EnumerationMode::Sample { count: *samples, seed: *seed }
                } else {
                    EnumerationMode::Lattice
                };
                let families = clock.time("enumerate", || {
                    anchors.iter().map(|s| enumerate_contractive(&op, &s.x, &pol, mode)).collect::<Result<Vec<_>, _>>()
                })?;
                outputs["families"] = to_value(&families);
            }
            if *check_uniqueness {
                let verdicts = clock.time("uniqueness", || {
                    anchors.iter().map(|s| uniqueness(&op, &s.x, &pol)).collect::<Result<Vec<_>, _>>()
                })?;
                outputs["uniqueness"] = to_value(&verdicts);
            }
            ("solve", outputs)
        }
        Command::Example { kind, params, gap, out } => {
            let spec = parse_example(kind, params, *gap)?;
            let inst = clock.time("build", || build(&spec))?;
            let body = to_value(&inst);
            let outputs = match out {
                Some(path) => {
                    write_file(path, &(canonical(&body) + "\n"))?;
                    json!({ "spec": to_value(&spec), "description": spec.description(), "written": path.display().to_string() })
                }
                None => json!({ "spec": to_value(&spec), "description": spec.description(), "instance": body }),
            };
            ("example", outputs)
        }
        Command::Refine { n_list, out } => {
            let ns = n_list
                .split(',')
                .map(|s| s.trim().parse::<usize>().map_err(|_| input_failure(format!("bad grid size {s:?} in {n_list:?}"))))
                .collect::<Result<Vec<_>, _>>()?;
            if let Some(&bad) = ns.iter().find(|&&n| n < 2) {
                return Err(input_failure(format!("grid sizes must be >= 2, got {bad}")));
            }
            let rows = clock.time("refine", || refinement_study(&ns))?;
            let csv = refinement_csv(&rows);
            let mut outputs = json!({ "rows": to_value(&rows) });
            match out {
                Some(path) => {
                    write_file(path, &csv)?;
                    outputs["written"] = json!(path.display().to_string());
                }
                None => outputs["csv"] = json!(csv),
            }
            ("refine", outputs)
        }
        Command::Check { b, x } => {
            let (op, db) = read_block(b)?;
            let (xm, dx): (ComplexMatrix, _) = read_json(x)?;
            inputs.insert("b", db);
            inputs.insert("x", dx);
            let check = clock.time("check", || invariance_check(&op, &xm, &pol))?;
            let mut outputs = json!({ "check": to_value(&check), "agree": check.agree() });
            if check.residual_ok {
                let sol = clock.time("classify", || RiccatiSolution::classify(&op, &xm, &pol))?;
                outputs["solution"] = to_value(&sol);
            }
            ("check", outputs)
        }
    };
    let report = RunReport {
        command,
        inputs,
        outputs,
        tolerances: pol,
        timings: clock.enabled.then_some(clock.stages),
    };
    Ok(canonical(&to_value(&report)))
}

fn canonical(v: &Value) -> String {
    to_canonical_string(v).expect("values serialize")
}

/// Entry point shared by the binary and the tests.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = if code == 0 { write!(stdout, "{e}") } else { write!(stderr, "{e}") };
            return code;
        }
    };
    match execute(&cli) {
        Ok(report) => {
            let _ = writeln!(stdout, "{report}");
            0
        }
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}
