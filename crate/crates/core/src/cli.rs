//! `hardylab` command line: `verify`, `sweep`, `rearrange`, `maximize`.
//!
//! Exit status 0 means every check passed, 1 means a check failed (an
//! inequality violation or a sweep outside its gap), 2 means bad usage or
//! bad input.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{HardyError, Result};
use crate::grid::{
    read_step_function, step_function_to_csv, write_step_function, Exponent, StepFunction,
};
use crate::inequalities::{sharp_constant, Evaluator, Kind, RatioReport};
use crate::random::{random_step_function, Shape, GENERATOR_NAME};
use crate::rearrange::{check_norm_preservation, decreasing_rearrangement};
use crate::sharpness::{
    ratio_maximize, sharpness_sweep_with, CutoffSpec, SweepConfig, DEFAULT_EPS_LIST,
    DEFAULT_SWEEP_CELLS,
};

pub const TOL_ENV: &str = "HARDYLAB_DEFAULT_TOL";
pub const DEFAULT_TOL: f64 = 1e-6;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "hardylab",
    version,
    about = "Numerical checks of Hardy-type integral inequalities"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one inequality on seeded random step functions or a CSV input.
    Verify(VerifyArgs),
    /// Sweep the minimizing sequence and extrapolate the ratio limit.
    Sweep(SweepArgs),
    /// Write the decreasing rearrangement of a CSV step function.
    Rearrange(CommonArgs),
    /// Search for a large ratio by coordinate ascent.
    Maximize(MaximizeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CutoffArg {
    QuinticSmoothstep,
    Linear,
}

impl From<CutoffArg> for CutoffSpec {
    fn from(c: CutoffArg) -> Self {
        match c {
            CutoffArg::QuinticSmoothstep => CutoffSpec::QuinticSmoothstep,
            CutoffArg::Linear => CutoffSpec::Linear,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// hardy, new_hardy, hardy_rellich_int, improved_hardy_rellich, rellich_p or rellich_chain.
    #[arg(long, value_parser = parse_kind)]
    pub kind: Option<Kind>,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub count: usize,
    /// Step function CSV (`edge,value`).
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Report path; standard output when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Relative tolerance; defaults to $HARDYLAB_DEFAULT_TOL, then 1e-6.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, default_value_t = crate::grid::DEFAULT_QUAD_ORDER)]
    pub quad_order: usize,
    /// Leave the timestamp out of reports so runs compare byte for byte.
    #[arg(long)]
    pub no_timestamp: bool,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Strictly decreasing ε values in (0, 1).
    #[arg(long, value_delimiter = ',')]
    pub eps: Option<Vec<f64>>,
    #[arg(long, default_value_t = DEFAULT_SWEEP_CELLS)]
    pub cells: usize,
    #[arg(long, default_value = "1e-300")]
    pub r_min: f64,
    /// Largest accepted relative gap between the limit and the sharp constant.
    #[arg(long, default_value_t = 0.01)]
    pub gap: f64,
    #[arg(long, value_enum, default_value_t = CutoffArg::QuinticSmoothstep)]
    pub cutoff: CutoffArg,
}

#[derive(Debug, Clone, Args)]
pub struct MaximizeArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, default_value_t = 32)]
    pub cells: usize,
    #[arg(long, default_value_t = 200)]
    pub iters: usize,
    /// Where to write the best function as CSV.
    #[arg(long)]
    pub best_output: Option<PathBuf>,
}

fn parse_kind(s: &str) -> std::result::Result<Kind, String> {
    s.parse().map_err(|e: HardyError| e.to_string())
}

/// Failure of a command before any verdict was reached.
#[derive(Debug)]
struct Usage(String);

impl From<HardyError> for Usage {
    fn from(e: HardyError) -> Self {
        Usage(e.to_string())
    }
}

type CmdResult = std::result::Result<i32, Usage>;

/// Runs the command line and returns the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_PASS
            };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let result = match &cli.command {
        Command::Verify(a) => cmd_verify(a, stdout, stderr),
        Command::Sweep(a) => cmd_sweep(a, stdout, stderr),
        Command::Rearrange(a) => cmd_rearrange(a, stdout, stderr),
        Command::Maximize(a) => cmd_maximize(a, stdout, stderr),
    };
    match result {
        Ok(code) => code,
        Err(Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn resolve_tol(explicit: Option<f64>) -> std::result::Result<f64, Usage> {
    let tol = match explicit {
        Some(t) => t,
        None => match std::env::var(TOL_ENV) {
            Ok(s) => s
                .trim()
                .parse()
                .map_err(|_| Usage(format!("{TOL_ENV} is not a number: `{s}`")))?,
            Err(_) => DEFAULT_TOL,
        },
    };
    if !(tol >= 0.0 && tol.is_finite()) {
        return Err(Usage(format!(
            "tolerance must be finite and non-negative, got {tol}"
        )));
    }
    Ok(tol)
}

fn require_kind(c: &CommonArgs) -> std::result::Result<Kind, Usage> {
    c.kind.ok_or_else(|| Usage("--kind is required".into()))
}

fn exponent(c: &CommonArgs) -> std::result::Result<Exponent, Usage> {
    Ok(Exponent::new(c.p)?)
}

fn timestamp() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

pub fn input_hash(f: &StepFunction) -> String {
    let digest = Sha256::digest(step_function_to_csv(f).as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

fn emit(c: &CommonArgs, text: &str, stdout: &mut dyn Write) -> std::result::Result<(), Usage> {
    match &c.output {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| Usage(format!("{}: {e}", path.display())))
        }
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| Usage(format!("stdout: {e}"))),
    }
}

fn envelope(c: &CommonArgs, command: &str, mut body: serde_json::Map<String, Value>) -> String {
    let mut out = serde_json::Map::new();
    out.insert("command".into(), json!(command));
    if !c.no_timestamp {
        out.insert("timestamp_unix".into(), json!(timestamp()));
    }
    out.append(&mut body);
    let mut s = serde_json::to_string_pretty(&Value::Object(out)).expect("json value serializes");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct Case {
    index: usize,
    input_sha256: String,
    passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<RatioReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    violations: Vec<String>,
}

fn violation_path(c: &CommonArgs, index: usize) -> PathBuf {
    match &c.output {
        Some(out) => {
            let stem = out
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            out.with_file_name(format!("{stem}.violation-{index}.csv"))
        }
        None => PathBuf::from(format!("hardylab-violation-{}-{index}.csv", c.seed)),
    }
}

fn cmd_verify(a: &VerifyArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CmdResult {
    let c = &a.common;
    let kind = require_kind(c)?;
    let p = exponent(c)?;
    let tol = resolve_tol(c.tol)?;
    sharp_constant(kind, p)?;
    let evaluator = Evaluator::new(c.quad_order)?;

    let inputs: Vec<StepFunction> = match &c.input {
        Some(path) => vec![read_step_function(path)?],
        None => (0..c.count)
            .into_par_iter()
            .map(|i| random_step_function(c.seed, i as u64, Shape::Signed))
            .collect(),
    };
    let cases: Vec<Case> = inputs
        .par_iter()
        .enumerate()
        .map(|(index, f)| {
            let input_sha256 = input_hash(f);
            match evaluator.ratio(kind, f, p) {
                Ok(rep) => {
                    let violations = rep.violations(tol);
                    Case {
                        index,
                        input_sha256,
                        passed: violations.is_empty(),
                        report: Some(rep),
                        violations,
                    }
                }
                Err(e) => Case {
                    index,
                    input_sha256,
                    passed: false,
                    report: None,
                    violations: vec![e.to_string()],
                },
            }
        })
        .collect();

    let failed: Vec<&Case> = cases.iter().filter(|cs| !cs.passed).collect();
    for cs in &failed {
        let path = violation_path(c, cs.index);
        write_step_function(&path, &inputs[cs.index])?;
        let _ = writeln!(
            stderr,
            "case {}: {} (function written to {})",
            cs.index,
            cs.violations.join("; "),
            path.display()
        );
    }

    let text = match c.format {
        Format::Json => {
            let mut body = serde_json::Map::new();
            body.insert("kind".into(), json!(kind));
            body.insert("p".into(), json!(p.value()));
            if c.input.is_none() {
                body.insert("seed".into(), json!(c.seed));
                body.insert("generator".into(), json!(GENERATOR_NAME));
            }
            body.insert("count".into(), json!(cases.len()));
            body.insert("tol".into(), json!(tol));
            body.insert("quad_order".into(), json!(c.quad_order));
            body.insert("violations".into(), json!(failed.len()));
            body.insert(
                "cases".into(),
                serde_json::to_value(&cases).map_err(HardyError::from)?,
            );
            envelope(c, "verify", body)
        }
        Format::Csv => verify_csv(&cases)?,
    };
    emit(c, &text, stdout)?;
    let _ = writeln!(stderr, "{} cases, {} violations", cases.len(), failed.len());
    Ok(if failed.is_empty() {
        EXIT_PASS
    } else {
        EXIT_VIOLATION
    })
}

fn verify_csv(cases: &[Case]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "index",
        "input_sha256",
        "passed",
        "kind",
        "p",
        "numerator",
        "middle",
        "denominator",
        "sharp",
        "ratio",
        "slack",
        "quad_order",
        "refinement_estimate",
    ])
    .map_err(csv_err)?;
    for cs in cases {
        let mut row = vec![
            cs.index.to_string(),
            cs.input_sha256.clone(),
            cs.passed.to_string(),
        ];
        match &cs.report {
            Some(r) => row.extend([
                r.kind.to_string(),
                r.p.to_string(),
                r.numerator.to_string(),
                r.middle.map(|m| m.to_string()).unwrap_or_default(),
                r.denominator.to_string(),
                r.sharp.to_string(),
                r.ratio.to_string(),
                r.slack.to_string(),
                r.quad_order.to_string(),
                r.refinement_estimate.to_string(),
            ]),
            None => row.extend(std::iter::repeat_n(String::new(), 10)),
        }
        w.write_record(&row).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| HardyError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv is utf-8"))
}

fn csv_err(e: csv::Error) -> HardyError {
    HardyError::Io(std::io::Error::other(e))
}

fn cmd_sweep(a: &SweepArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CmdResult {
    let c = &a.common;
    let kind = require_kind(c)?;
    let p = exponent(c)?;
    if a.gap.is_nan() || a.gap < 0.0 {
        return Err(Usage(format!("--gap must be non-negative, got {}", a.gap)));
    }
    let eps = a.eps.clone().unwrap_or_else(|| DEFAULT_EPS_LIST.to_vec());
    let config = SweepConfig {
        n_cells: a.cells,
        r_min: a.r_min,
        quad_order: c.quad_order,
    };
    let result = sharpness_sweep_with(kind, p, &eps, a.cutoff.into(), &config)?;
    let passed = result.relative_gap <= a.gap && result.all_below_sharp();
    let text = match c.format {
        Format::Json => {
            let mut body = match serde_json::to_value(&result).map_err(HardyError::from)? {
                Value::Object(m) => m,
                _ => unreachable!("sweep result is an object"),
            };
            body.insert("gap".into(), json!(a.gap));
            body.insert("passed".into(), json!(passed));
            envelope(c, "sweep", body)
        }
        Format::Csv => result.to_csv(),
    };
    emit(c, &text, stdout)?;
    let _ = writeln!(
        stderr,
        "sharp = {:.10}, limit = {:.10}, gap = {:.3e}",
        result.sharp, result.limit, result.relative_gap
    );
    Ok(if passed { EXIT_PASS } else { EXIT_VIOLATION })
}

fn cmd_rearrange(c: &CommonArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CmdResult {
    let path: &Path = c
        .input
        .as_deref()
        .ok_or_else(|| Usage("--input is required".into()))?;
    let p = exponent(c)?;
    let f = read_step_function(path)?;
    let star = decreasing_rearrangement(&f);
    emit(c, &step_function_to_csv(star.function()), stdout)?;
    let (before, after) = check_norm_preservation(&f, p);
    let _ = writeln!(
        stderr,
        "norm check p = {}: {before:.17e} -> {after:.17e}",
        p.value()
    );
    Ok(EXIT_PASS)
}

fn cmd_maximize(a: &MaximizeArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CmdResult {
    let c = &a.common;
    let kind = require_kind(c)?;
    let p = exponent(c)?;
    let tol = resolve_tol(c.tol)?;
    let (best, report) = ratio_maximize(kind, p, a.cells, c.seed, a.iters)?;
    let violations = report.violations(tol);
    let passed = violations.is_empty();
    if let Some(path) = &a.best_output {
        write_step_function(path, &best)?;
    }
    let text = match c.format {
        Format::Json => {
            let mut body = serde_json::Map::new();
            body.insert("seed".into(), json!(c.seed));
            body.insert("cells".into(), json!(a.cells));
            body.insert("iters".into(), json!(a.iters));
            body.insert("tol".into(), json!(tol));
            body.insert("passed".into(), json!(passed));
            body.insert("input_sha256".into(), json!(input_hash(&best)));
            body.insert(
                "report".into(),
                serde_json::to_value(&report).map_err(HardyError::from)?,
            );
            if !violations.is_empty() {
                body.insert("violations".into(), json!(violations));
            }
            envelope(c, "maximize", body)
        }
        Format::Csv => {
            let case = Case {
                index: 0,
                input_sha256: input_hash(&best),
                passed,
                report: Some(report.clone()),
                violations: Vec::new(),
            };
            verify_csv(std::slice::from_ref(&case))?
        }
    };
    emit(c, &text, stdout)?;
    let _ = writeln!(
        stderr,
        "best ratio {:.10} (bound ratio {:.10}) against sharp {:.10}",
        report.ratio,
        report.bound_ratio(),
        report.sharp
    );
    Ok(if passed { EXIT_PASS } else { EXIT_VIOLATION })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sharpness::DEFAULT_SWEEP_R_MIN;

    #[test]
    fn sweep_defaults_match_library() {
        let Cli {
            command: Command::Sweep(a),
        } = Cli::try_parse_from(["hardylab", "sweep"]).unwrap()
        else {
            panic!("not a sweep");
        };
        assert_eq!(a.r_min, DEFAULT_SWEEP_R_MIN);
        assert_eq!(a.cells, DEFAULT_SWEEP_CELLS);
    }

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["hardylab"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn bad_exponent_is_usage() {
        assert_eq!(
            run_args(&["verify", "--kind", "hardy", "--p", "0.5"]).0,
            EXIT_USAGE
        );
    }

    #[test]
    fn missing_kind_is_usage() {
        let (code, _, err) = run_args(&["maximize", "--p", "2"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("--kind"));
    }

    #[test]
    fn unknown_kind_is_usage() {
        assert_eq!(run_args(&["verify", "--kind", "nope"]).0, EXIT_USAGE);
    }

    #[test]
    fn restricted_kind_is_usage() {
        assert_eq!(
            run_args(&["sweep", "--kind", "hardy_rellich_int", "--p", "3"]).0,
            EXIT_USAGE
        );
    }

    #[test]
    fn small_verify_passes() {
        let (code, out, _) = run_args(&[
            "verify",
            "--kind",
            "hardy",
            "--count",
            "3",
            "--no-timestamp",
        ]);
        assert_eq!(code, EXIT_PASS);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["cases"].as_array().unwrap().len(), 3);
        assert!(v.get("timestamp_unix").is_none());
        assert_eq!(v["cases"][0]["input_sha256"].as_str().unwrap().len(), 64);
    }

    #[test]
    fn violation_dump_names() {
        let mut c = Cli::try_parse_from(["hardylab", "rearrange", "--seed", "5"]).unwrap();
        let Command::Rearrange(args) = &mut c.command else {
            unreachable!()
        };
        assert_eq!(
            violation_path(args, 3),
            PathBuf::from("hardylab-violation-5-3.csv")
        );
        args.output = Some(PathBuf::from("/tmp/out/report.json"));
        assert_eq!(
            violation_path(args, 3),
            PathBuf::from("/tmp/out/report.violation-3.csv")
        );
    }

    #[test]
    fn explicit_tol_wins() {
        assert_eq!(resolve_tol(Some(0.5)).unwrap(), 0.5);
        assert!(resolve_tol(Some(-1.0)).is_err());
    }
}
