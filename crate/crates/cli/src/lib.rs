//! Command-line front end for webtensor.
//!
//! `webtensor <command> <manifest-path> [--strict-paper] [--format human|records]`
//!
//! Exit codes: 0 when every check passes, 1 when any check fails (or, under
//! `--strict-paper`, any erratum is recorded), 2 for unusable input.

pub mod manifest;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde::Serialize;
use webtensor_core::suites::{run_command, COMMANDS};
use webtensor_core::{CheckRecord, Report, Status};

pub use manifest::{parse_manifest, ErrorKind, Manifest, ManifestError};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    /// One JSON object per line.
    Records,
}

#[derive(Parser, Debug)]
#[command(name = "webtensor", version, about = "Exact structure tensors of coset-section loops")]
struct Args {
    /// validate | expand | tensors | identities | hexagonal | oracle-check
    #[arg(value_parser = clap::builder::PossibleValuesParser::new(COMMANDS))]
    command: String,
    manifest: PathBuf,
    /// Count erratum records as failures.
    #[arg(long)]
    strict_paper: bool,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    format: Format,
}

/// What a run prints and how it exits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn input_error(message: String) -> Self {
        Outcome { stdout: String::new(), stderr: message, code: EXIT_INPUT }
    }
}

/// Runs the command line; `args` includes the program name.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome { stdout: text, stderr: String::new(), code: EXIT_PASS }
                }
                _ => Outcome::input_error(text),
            };
        }
    };
    let path = args.manifest.display();
    let text = match std::fs::read_to_string(&args.manifest) {
        Ok(t) => t,
        Err(e) => return Outcome::input_error(format!("error: cannot read {path}: {e}\n")),
    };
    let model = match parse_manifest(&text).and_then(|m| m.model()) {
        Ok(m) => m,
        Err(e) => return Outcome::input_error(format!("error: {path}: {e}\n")),
    };
    let Some(report) = run_command(&args.command, &model) else {
        return Outcome::input_error(format!("error: unknown command {}\n", args.command));
    };
    let passed = report.passed(args.strict_paper);
    let stdout = match args.format {
        Format::Human => human(&args.command, &model.name, &report, args.strict_paper),
        Format::Records => records(&model.name, &report, args.strict_paper),
    };
    Outcome { stdout, stderr: String::new(), code: if passed { EXIT_PASS } else { EXIT_FAIL } }
}

fn tally(report: &Report) -> String {
    [Status::Pass, Status::Fail, Status::Erratum, Status::Info]
        .iter()
        .map(|&s| format!("{} {}", report.count(s), s))
        .collect::<Vec<_>>()
        .join(", ")
}

fn labels(witness: &[usize]) -> String {
    let parts: Vec<String> = witness.iter().map(|i| format!("e{i}")).collect();
    format!("({})", parts.join(", "))
}

pub fn human(command: &str, model: &str, report: &Report, strict: bool) -> String {
    let mut out = format!("webtensor {command}: {model}\n");
    for r in &report.records {
        let _ = write!(out, "{:<8} {}", r.status.name().to_uppercase(), r.check);
        if let Some(w) = &r.witness {
            let _ = write!(out, " at {}", labels(w));
        }
        match (&r.expected, &r.actual) {
            (Some(e), Some(a)) => {
                let _ = write!(out, ": expected {e}, actual {a}");
            }
            (None, Some(a)) => {
                let _ = write!(out, ": {a}");
            }
            _ => {}
        }
        if let Some(d) = &r.detail {
            let _ = write!(out, " ({d})");
        }
        out.push('\n');
    }
    let verdict = if report.passed(strict) { "PASS" } else { "FAIL" };
    let mode = if strict { ", errata count as failures" } else { "" };
    let _ = writeln!(out, "summary: {}{mode}: {verdict}", tally(report));
    out
}

#[derive(Serialize)]
struct Line<'a> {
    model: &'a str,
    suite: &'a str,
    check: &'a str,
    status: &'a str,
    witness: Option<&'a [usize]>,
    expected: Option<&'a str>,
    actual: Option<&'a str>,
    detail: Option<&'a str>,
}

impl<'a> Line<'a> {
    fn of(model: &'a str, r: &'a CheckRecord) -> Self {
        Line {
            model,
            suite: r.suite,
            check: &r.check,
            status: r.status.name(),
            witness: r.witness.as_deref(),
            expected: r.expected.as_deref(),
            actual: r.actual.as_deref(),
            detail: r.detail.as_deref(),
        }
    }
}

/// Line-delimited JSON. The final line has check `summary`, status `pass` or
/// `fail` for the whole run, and the per-status counts as its detail.
pub fn records(model: &str, report: &Report, strict: bool) -> String {
    let mut out = String::new();
    for r in &report.records {
        out.push_str(&serde_json::to_string(&Line::of(model, r)).expect("records serialize"));
        out.push('\n');
    }
    let suite = report.records.first().map_or("", |r| r.suite);
    let status = if report.passed(strict) { Status::Pass } else { Status::Fail };
    let detail = format!("{}{}", tally(report), if strict { ", strict" } else { "" });
    let summary = CheckRecord { suite, ..CheckRecord::new("", "summary", status).detail(detail) };
    out.push_str(&serde_json::to_string(&Line::of(model, &summary)).expect("records serialize"));
    out.push('\n');
    out
}
