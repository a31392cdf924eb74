//! The `thom` command line: argument parsing, document loading, and reports
//! in text or JSON. [`run`] does everything except touching the process, so
//! tests can drive it directly.

pub mod corpus;
mod render;
pub mod verify;

use std::ffi::OsString;
use std::ops::RangeInclusive;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

pub use corpus::{resolve, Corpus};
use render::{cech_json, group_json, steenrod_detail, steenrod_json, summary_line};
pub use verify::Suite;

use crate::complexes::{Coefficients, Pair};
use crate::doc::{DocError, Instance, InstanceDocument};
use crate::steenrod::{cech_cohomology_with, steenrod_homology_with, SteenrodError, SteenrodOptions};
use crate::towers::Tower;

pub const EXIT_FAIL: i32 = 1;
pub const EXIT_SCHEMA: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;
pub const EXIT_UNSUPPORTED: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "thom", version, about = "Exact homology and cohomology of cell complexes and towers of them")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Report rendering.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Append wall-clock timing to the report (reports are otherwise reproducible byte for byte).
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Cellular homology of a complex or pair.
    Homology(FiniteArgs),
    /// Cellular cohomology of a complex or pair.
    Cohomology(FiniteArgs),
    /// Steenrod homology of the limit of a tower.
    Steenrod(TowerArgs),
    /// Čech cohomology of the limit of a tower.
    Cech(TowerArgs),
    /// Run a randomized verification suite.
    Verify(VerifyArgs),
    /// List, show or check the instance corpus.
    Corpus(CorpusArgs),
}

#[derive(Args, Debug)]
pub struct FiniteArgs {
    /// Document file (`path` or `path#name`) or corpus entry name.
    pub input: String,
    /// Degrees, inclusive: `a..b`, `a..=b` or `n`. Defaults to all degrees up to the dimension.
    #[arg(long, value_parser = parse_degrees)]
    pub degree: Option<RangeInclusive<usize>>,
    /// `Z` or `Z/m`.
    #[arg(long, value_parser = parse_coeffs, default_value = "Z")]
    pub coeffs: Coefficients,
}

#[derive(Args, Debug)]
pub struct TowerArgs {
    /// Document file (`path` or `path#name`) or corpus entry name.
    pub input: String,
    #[arg(long, value_parser = parse_degrees)]
    pub degree: Option<RangeInclusive<usize>>,
    #[arg(long, value_parser = parse_coeffs, default_value = "Z")]
    pub coeffs: Coefficients,
    /// Minimum telescope depth for eventually constant towers.
    #[arg(long)]
    pub depth: Option<usize>,
    /// Reduced homology in degree zero (Steenrod only).
    #[arg(long)]
    pub reduced: bool,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random trials per check; each suite has its own default.
    #[arg(long)]
    pub trials: Option<usize>,
}

#[derive(Args, Debug)]
pub struct CorpusArgs {
    #[command(subcommand)]
    pub action: Option<CorpusAction>,
}

#[derive(Subcommand, Debug)]
pub enum CorpusAction {
    /// Names and kinds of every entry.
    List,
    /// Print one entry as JSON.
    Show { name: String },
    /// Build every entry and report problems.
    Check,
}

fn parse_degrees(s: &str) -> Result<RangeInclusive<usize>, String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("bad degree {t:?}"));
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
        None => (num(s)?, num(s)?),
    };
    if a > b {
        return Err(format!("empty degree range {s}"));
    }
    Ok(a..=b)
}

fn parse_coeffs(s: &str) -> Result<Coefficients, String> {
    Coefficients::parse(s).ok_or_else(|| format!("coefficients must be Z or Z/m with m >= 2, got {s:?}"))
}

/// Exit code with what goes to stdout and stderr.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Report {
    code: i32,
    json: Value,
    text: String,
    warnings: Vec<String>,
}

impl Report {
    fn ok(json: Value, text: String) -> Report {
        Report { code: 0, json, text, warnings: vec![] }
    }
}

fn doc_error(command: &str, input: &str, e: &DocError) -> Report {
    let (code, json, text) = match e {
        DocError::Schema(m) => (EXIT_SCHEMA, json!({"kind": "schema", "message": m}), format!("schema error: {m}")),
        DocError::Validation { message, cells } => (
            EXIT_VALIDATION,
            json!({"kind": "validation", "message": message, "cells": cells}),
            format!("validation error: {message}\noffending cells: {}", cells.join(", ")),
        ),
    };
    Report { code, json: json!({"command": command, "input": input, "error": json}), text, warnings: vec![] }
}

fn load(command: &str, input: &str) -> Result<(InstanceDocument, Instance), Report> {
    let corpus = Corpus::from_env().map_err(|e| doc_error(command, input, &e))?;
    let doc = resolve(input, &corpus).map_err(|e| doc_error(command, input, &e))?;
    let inst = doc.build().map_err(|e| doc_error(command, input, &e))?;
    Ok((doc, inst))
}

fn wrong_kind(command: &str, input: &str, expected: &str, got: &str) -> Report {
    doc_error(command, input, &DocError::Schema(format!("{command} expects a {expected} document, got {got}")))
}

fn finite(command: &str, a: &FiniteArgs, cohomology: bool) -> Report {
    let (doc, inst) = match load(command, &a.input) {
        Ok(x) => x,
        Err(r) => return r,
    };
    let pair = match inst {
        Instance::Complex(k) => Pair::absolute(k),
        Instance::Pair(p) => p,
        _ => return wrong_kind(command, &a.input, "complex or pair", doc.kind()),
    };
    let degrees = a.degree.clone().unwrap_or(0..=pair.complex.dimension().unwrap_or(0));
    let groups: Vec<(usize, crate::algebra::CanonicalGroup)> = degrees
        .map(|n| {
            let g = if cohomology { pair.relative_cohomology(n, &a.coeffs) } else { pair.relative_homology(n, &a.coeffs) };
            (n, g)
        })
        .collect();
    let json = json!({
        "command": command,
        "input": a.input,
        "name": doc.name(),
        "kind": doc.kind(),
        "coefficients": a.coeffs.to_string(),
        "groups": groups.iter().map(|(n, g)| json!({"degree": n, "group": group_json(g)})).collect::<Vec<_>>(),
    });
    let text = summary_line(cohomology, &groups.iter().map(|(n, g)| (*n, g.to_string())).collect::<Vec<_>>());
    Report::ok(json, text)
}

fn tower_of(command: &str, a: &TowerArgs) -> Result<(InstanceDocument, Tower), Report> {
    let (doc, inst) = load(command, &a.input)?;
    match inst {
        Instance::Tower(t) => Ok((doc, t)),
        Instance::Complex(k) => Tower::try_constant((*k).clone()).map(|t| (doc, t)).map_err(|e| doc_error(command, &a.input, &e.into())),
        _ => Err(wrong_kind(command, &a.input, "tower", doc.kind())),
    }
}

/// Level groups of the stored part of the tower, for reports that cannot go further.
fn truncated(tower: &Tower, n: usize, coeffs: &Coefficients, cohomology: bool) -> Vec<Value> {
    tower
        .stored_levels()
        .iter()
        .map(|l| {
            let p = Pair::absolute(l.clone());
            group_json(&if cohomology { p.relative_cohomology(n, coeffs) } else { p.relative_homology(n, coeffs) })
        })
        .collect()
}

fn unsupported_entry(tower: &Tower, n: usize, e: &SteenrodError, a: &TowerArgs, cohomology: bool) -> (i32, Value, String) {
    let code = match e {
        SteenrodError::UnsupportedBonding(_) => EXIT_UNSUPPORTED,
        _ => EXIT_VALIDATION,
    };
    let levels = truncated(tower, n, &a.coeffs, cohomology);
    let texts: Vec<String> = levels.iter().map(|g| g["text"].as_str().unwrap_or_default().to_string()).collect();
    (
        code,
        json!({"degree": n, "error": e.to_string(), "truncated_levels": levels}),
        format!("unsupported ({e}); stored levels: [{}]", texts.join(", ")),
    )
}

fn steenrod(a: &TowerArgs) -> Report {
    let (doc, tower) = match tower_of("steenrod", a) {
        Ok(x) => x,
        Err(r) => return r,
    };
    let opts = SteenrodOptions { reduced: a.reduced, coefficients: a.coeffs.clone(), depth: a.depth };
    let degrees = a.degree.clone().unwrap_or(0..=tower.dimension());
    let mut code = 0;
    let mut entries = Vec::new();
    let mut summary = Vec::new();
    let mut details = Vec::new();
    for n in degrees {
        match steenrod_homology_with(&tower, n, &opts) {
            Ok(r) => {
                if r.discrepancy.is_some() {
                    code = code.max(EXIT_FAIL);
                }
                summary.push((n, r.group.to_string()));
                details.push(format!("  H{n}: {}", steenrod_detail(&r)));
                entries.push(steenrod_json(&r));
            }
            Err(e) => {
                let (c, v, t) = unsupported_entry(&tower, n, &e, a, false);
                code = code.max(c);
                summary.push((n, "?".into()));
                details.push(format!("  H{n}: {t}"));
                entries.push(v);
            }
        }
    }
    let json = json!({
        "command": "steenrod",
        "input": a.input,
        "name": doc.name(),
        "coefficients": a.coeffs.to_string(),
        "reduced": a.reduced,
        "degrees": entries,
    });
    let text = format!("{}\n{}", summary_line(false, &summary), details.join("\n"));
    Report { code, json, text, warnings: vec![] }
}

fn cech(a: &TowerArgs) -> Report {
    let (doc, tower) = match tower_of("cech", a) {
        Ok(x) => x,
        Err(r) => return r,
    };
    let mut warnings = Vec::new();
    if a.reduced || a.depth.is_some() {
        warnings.push("--reduced and --depth only affect steenrod".to_string());
    }
    let degrees = a.degree.clone().unwrap_or(0..=tower.dimension());
    let mut code = 0;
    let mut entries = Vec::new();
    let mut summary = Vec::new();
    let mut details = Vec::new();
    for n in degrees {
        match cech_cohomology_with(&tower, n, &a.coeffs) {
            Ok(r) => {
                summary.push((n, r.group.to_string()));
                if let Some(rank) = r.rational_rank() {
                    details.push(format!("  H^{n}: rational rank {rank}"));
                }
                entries.push(cech_json(&r));
            }
            Err(e) => {
                let (c, v, t) = unsupported_entry(&tower, n, &e, a, true);
                code = code.max(c);
                summary.push((n, "?".into()));
                details.push(format!("  H^{n}: {t}"));
                entries.push(v);
            }
        }
    }
    let json = json!({
        "command": "cech",
        "input": a.input,
        "name": doc.name(),
        "coefficients": a.coeffs.to_string(),
        "degrees": entries,
    });
    let mut text = summary_line(true, &summary);
    if !details.is_empty() {
        text = format!("{text}\n{}", details.join("\n"));
    }
    Report { code, json, text, warnings }
}

fn verify(a: &VerifyArgs) -> Report {
    let corpus = match Corpus::from_env() {
        Ok(c) => c,
        Err(e) => return doc_error("verify", a.suite.name(), &e),
    };
    let checks = verify::run(a.suite, a.seed, a.trials, &corpus);
    verify_report(a, &corpus.source, &checks)
}

fn verify_report(a: &VerifyArgs, source: &str, checks: &[verify::Check]) -> Report {
    let passed = checks.iter().all(|c| c.passed);
    let mut lines: Vec<String> = checks
        .iter()
        .map(|c| {
            let mut l = format!("{} {} ({} trials)", if c.passed { "PASS" } else { "FAIL" }, c.name, c.trials);
            if let Some(x) = &c.counterexample {
                l.push_str(&format!("\n  counterexample: {x}"));
            }
            l
        })
        .collect();
    lines.push(format!("{}: {}", a.suite.name(), if passed { "PASS" } else { "FAIL" }));
    let json = json!({
        "command": "verify",
        "suite": a.suite.name(),
        "seed": a.seed,
        "trials": a.trials,
        "corpus": source,
        "passed": passed,
        "checks": checks.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
    });
    Report {
        code: if passed { 0 } else { EXIT_FAIL },
        json,
        text: lines.join("\n"),
        warnings: checks.iter().filter_map(|c| c.warning.clone()).collect(),
    }
}

fn corpus_cmd(a: &CorpusArgs) -> Report {
    let corpus = match Corpus::from_env() {
        Ok(c) => c,
        Err(e) => return doc_error("corpus", "", &e),
    };
    match a.action.as_ref().unwrap_or(&CorpusAction::List) {
        CorpusAction::List => {
            let entries: Vec<Value> = corpus.docs.iter().map(|d| json!({"name": d.name(), "kind": d.kind()})).collect();
            let text = corpus.docs.iter().map(|d| format!("{:<10} {}", d.kind(), d.name())).collect::<Vec<_>>().join("\n");
            Report::ok(json!({"command": "corpus", "source": corpus.source, "entries": entries}), text)
        }
        CorpusAction::Show { name } => match corpus.get(name) {
            Some(d) => {
                let v = serde_json::to_value(d).expect("documents serialize");
                Report::ok(v, d.to_json())
            }
            None => doc_error("corpus", name, &DocError::Schema(format!("no corpus entry named {name}"))),
        },
        CorpusAction::Check => {
            let mut code = 0;
            let mut rows = Vec::new();
            let mut lines = Vec::new();
            for d in &corpus.docs {
                match d.build() {
                    Ok(_) => {
                        rows.push(json!({"name": d.name(), "ok": true}));
                        lines.push(format!("ok      {}", d.name()));
                    }
                    Err(e) => {
                        code = code.max(match e {
                            DocError::Schema(_) => EXIT_SCHEMA,
                            DocError::Validation { .. } => EXIT_VALIDATION,
                        });
                        rows.push(json!({"name": d.name(), "ok": false, "error": e.to_string()}));
                        lines.push(format!("error   {}: {e}", d.name()));
                    }
                }
            }
            Report { code, json: json!({"command": "corpus", "source": corpus.source, "entries": rows}), text: lines.join("\n"), warnings: vec![] }
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: EXIT_SCHEMA, stdout: String::new(), stderr: rendered }
            } else {
                Outcome { code: 0, stdout: rendered, stderr: String::new() }
            };
        }
    };
    let start = Instant::now();
    let mut report = match &cli.command {
        Command::Homology(a) => finite("homology", a, false),
        Command::Cohomology(a) => finite("cohomology", a, true),
        Command::Steenrod(a) => steenrod(a),
        Command::Cech(a) => cech(a),
        Command::Verify(a) => verify(a),
        Command::Corpus(a) => corpus_cmd(a),
    };
    let elapsed = start.elapsed();
    if cli.timing {
        report.json["elapsed_ms"] = json!(elapsed.as_millis() as u64);
        report.text.push_str(&format!("\nelapsed: {:.3} s", elapsed.as_secs_f64()));
    }
    let mut stderr: String = report.warnings.iter().map(|w| format!("warning: {w}\n")).collect();
    let stdout = match cli.format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&report.json).expect("reports serialize")),
        Format::Text if report.code == EXIT_SCHEMA || report.code == EXIT_VALIDATION => {
            if report.json.get("error").is_some() {
                stderr.push_str(&report.text);
                stderr.push('\n');
                String::new()
            } else {
                format!("{}\n", report.text)
            }
        }
        Format::Text => format!("{}\n", report.text),
    };
    Outcome { code: report.code, stdout, stderr }
}
