//! The `infocat` command line.
//!
//! Exit codes: 0 success with no violations, 1 violations found (or a
//! violation that no longer reproduces), 2 usage or input error, 3 internal
//! error.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use infocat::audit::{self, AuditConfig, AuditReport};
use infocat::capacity::{blahut_arimoto, DEFAULT_EPSILON, DEFAULT_MAX_ITERS};
use infocat::channel::Channel;
use infocat::field::Field;
use infocat::json::AnyMorphism;
use infocat::sample::Mode;
use infocat::{CategoryId, Error, LogBase};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATIONS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "infocat", version, about = "Audit information functions on categories of communication systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Audit a measure against the axioms and propositions.
    Audit(AuditArgs),
    /// Evaluate a measure on a morphism file.
    Info {
        /// Morphism JSON file, or `-` for stdin.
        #[arg(long)]
        input: String,
        #[arg(long)]
        measure: String,
    },
    /// Channel capacity by Blahut-Arimoto.
    Capacity {
        /// Channel JSON file, or `-` for stdin.
        #[arg(long)]
        channel: String,
        #[arg(long, default_value_t = DEFAULT_EPSILON)]
        epsilon: f64,
        #[arg(long, default_value_t = DEFAULT_MAX_ITERS)]
        max_iters: usize,
    },
    /// Regenerate a recorded violation and check it reproduces.
    Replay {
        #[arg(long)]
        report: PathBuf,
        #[arg(long)]
        index: usize,
    },
}

#[derive(Debug, Args)]
struct AuditArgs {
    #[arg(long)]
    category: CategoryId,
    #[arg(long)]
    measure: String,
    #[arg(long, default_value = "exhaustive")]
    mode: Mode,
    #[arg(long, default_value_t = 3)]
    max_size: usize,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
    /// Field for the linear categories: gf<p> or rational.
    #[arg(long)]
    field: Option<Field>,
    #[arg(long, default_value = "2")]
    log_base: LogBase,
    /// Capacity solver tolerance.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Only the axioms, only the propositions, or both.
    #[arg(long, default_value = "all", value_parser = ["axioms", "propositions", "all"])]
    checks: String,
    /// Where to write the JSON report.
    #[arg(long)]
    report: Option<PathBuf>,
}

/// A failure with the exit code it maps to.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::SearchBudgetExceeded(_) | Error::CategoryMismatch { .. } | Error::ObjectMismatch(_) | Error::DomainMismatch(_) => {
                EXIT_INTERNAL
            }
            Error::ReplayMismatch(_) => EXIT_VIOLATIONS,
            _ => EXIT_USAGE,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: String) -> Failure {
    Failure { code: EXIT_USAGE, message }
}

/// Runs the command line `argv` (program name first) and returns the exit
/// code.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    return EXIT_OK;
                }
                _ => EXIT_USAGE,
            };
            let _ = write!(err, "{}", e.render());
            return code;
        }
    };
    let result = match cli.command {
        Command::Audit(a) => run_audit(a, out),
        Command::Info { input, measure } => run_info(&input, &measure, out),
        Command::Capacity { channel, epsilon, max_iters } => run_capacity(&channel, epsilon, max_iters, out),
        Command::Replay { report, index } => run_replay(&report, index, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn read_input(path: &str) -> Result<String, Failure> {
    let mut text = String::new();
    if path == "-" {
        io::stdin().read_to_string(&mut text).map_err(|e| usage(format!("stdin: {e}")))?;
    } else {
        text = fs::read_to_string(path).map_err(|e| usage(format!("{path}: {e}")))?;
    }
    Ok(text)
}

/// Parses JSON, reporting syntax errors with their line and column.
fn parse_json<T: serde::de::DeserializeOwned>(path: &str, text: &str) -> Result<T, Failure> {
    serde_json::from_str(text).map_err(|e| {
        usage(format!("{path}: line {}, column {}: {}", e.line(), e.column(), strip_position(&e)))
    })
}

fn strip_position(e: &serde_json::Error) -> String {
    let s = e.to_string();
    match s.rfind(" at line ") {
        Some(i) => s[..i].to_string(),
        None => s,
    }
}

fn write_out(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    writeln!(out, "{text}").map_err(|e| Failure { code: EXIT_USAGE, message: format!("writing output: {e}") })
}

fn run_audit(a: AuditArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let mut config = AuditConfig::new(a.category, a.measure)
        .mode(a.mode)
        .max_size(a.max_size)
        .trials(a.trials)
        .seed(a.seed)
        .tolerance(a.tolerance)
        .log_base(a.log_base);
    if let Some(f) = a.field {
        config = config.field(f);
    }
    if let Some(e) = a.epsilon {
        config = config.epsilon(e);
    }
    let report = match a.checks.as_str() {
        "axioms" => audit::audit_axioms(&config)?,
        "propositions" => audit::audit_propositions(&config)?,
        _ => audit::audit_all(&config)?,
    };
    if let Some(path) = &a.report {
        fs::write(path, report.to_json_pretty() + "\n").map_err(|e| usage(format!("{}: {e}", path.display())))?;
    }
    write_out(out, &summary(&report))?;
    Ok(if report.passed() { EXIT_OK } else { EXIT_VIOLATIONS })
}

fn summary(r: &AuditReport) -> String {
    let mut lines = Vec::new();
    for (check, runs) in &r.checks_run {
        let bad = r.violations_of(check);
        let skipped = r.skipped_undefined.get(check).copied().unwrap_or(0);
        let mark = if bad == 0 { "ok" } else { "FAIL" };
        lines.push(format!("{mark:<4} {check}: {runs} run, {skipped} undefined, {bad} violating"));
    }
    for f in &r.findings {
        lines.push(format!("note {}: {}", f.topic, f.message));
    }
    let n = r.total_violations();
    lines.push(format!("{n} violation{}", if n == 1 { "" } else { "s" }));
    lines.join("\n")
}

fn run_info(input: &str, measure: &str, out: &mut dyn Write) -> Result<i32, Failure> {
    let text = read_input(input)?;
    let env = parse_json(input, &text)?;
    let f = AnyMorphism::from_envelope(&env)?;
    let shown = match audit::measure_value(&f, measure)? {
        Some(v) => format!("{v}"),
        None => "undefined".into(),
    };
    write_out(out, &shown)?;
    Ok(EXIT_OK)
}

fn run_capacity(path: &str, epsilon: f64, max_iters: usize, out: &mut dyn Write) -> Result<i32, Failure> {
    let text = read_input(path)?;
    let channel: Channel = parse_json(path, &text)?;
    let result = blahut_arimoto(&channel, epsilon, max_iters)?;
    let json = serde_json::to_string_pretty(&result).map_err(|e| Failure { code: EXIT_INTERNAL, message: e.to_string() })?;
    write_out(out, &json)?;
    Ok(EXIT_OK)
}

fn run_replay(path: &Path, index: usize, out: &mut dyn Write) -> Result<i32, Failure> {
    let shown = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{shown}: {e}")))?;
    let value: serde_json::Value = parse_json(&shown, &text)?;
    let report = AuditReport::from_json(&value.to_string())?;
    let v = audit::replay(&report, index)?;
    let json = serde_json::to_string_pretty(&v).map_err(|e| Failure { code: EXIT_INTERNAL, message: e.to_string() })?;
    write_out(out, &json)?;
    write_out(out, &format!("violation {index} ({}) reproduced", v.check))?;
    Ok(EXIT_OK)
}
