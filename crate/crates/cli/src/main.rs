mod commands;
mod error;
mod report;
mod spec;

use std::io::{Read, Write};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use crate::commands::COMMANDS;
use crate::error::CliError;
use crate::report::{status_of, Meta, Report, Status};

#[derive(Parser)]
#[command(name = "padic-transfer", version, about = "Exact checks of smooth transfer for (GL_2n, GL_n x GL_n) and (GL_n(D), GL_n(E))")]
struct Cli {
    /// Print the command to operation mapping and exit.
    #[arg(long)]
    list: bool,
    #[command(subcommand)]
    command: Option<Cmd>,
}

#[derive(Args, Clone)]
struct Common {
    /// Job spec as a JSON file, or `-` for stdin. Defaults to `{}`.
    #[arg(long, value_name = "PATH")]
    json: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Add wall-clock time to the report (makes output non-reproducible).
    #[arg(long)]
    timing: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Hilbert symbol (a, b) with a search cross-check.
    Hilbert(Common),
    /// The character eta of E/F against a norm search.
    Eta(Common),
    /// Weil index of a quadratic form.
    WeilGamma(Common),
    /// Regular semisimple test and orbit invariant.
    Classify(Common),
    /// Whether X in s and Y in s' match.
    Match(Common),
    /// The transfer factor kappa and its equivariance.
    Kappa(Common),
    /// Nilpotent invariants r, m from the closed formula.
    NilpTable(Common),
    /// Inequalities for the nilpotent invariants.
    NilpVerify(Common),
    /// An orbital integral.
    Orbital(Common),
    /// Fundamental lemma for the unit element of the Hecke algebra.
    FundLemma(Common),
    /// Fourier transform of an orbital integral.
    FourierOrbital(Common),
    /// Limit formula for the Fourier transform of orbital integrals.
    LimitCheck(Common),
    /// The Weil index gamma(X, Y) and the cross-side relation.
    GammaPair(Common),
}

impl Cmd {
    fn split(&self) -> (&'static str, &Common) {
        match self {
            Cmd::Hilbert(c) => ("hilbert", c),
            Cmd::Eta(c) => ("eta", c),
            Cmd::WeilGamma(c) => ("weil-gamma", c),
            Cmd::Classify(c) => ("classify", c),
            Cmd::Match(c) => ("match", c),
            Cmd::Kappa(c) => ("kappa", c),
            Cmd::NilpTable(c) => ("nilp-table", c),
            Cmd::NilpVerify(c) => ("nilp-verify", c),
            Cmd::Orbital(c) => ("orbital", c),
            Cmd::FundLemma(c) => ("fund-lemma", c),
            Cmd::FourierOrbital(c) => ("fourier-orbital", c),
            Cmd::LimitCheck(c) => ("limit-check", c),
            Cmd::GammaPair(c) => ("gamma-pair", c),
        }
    }
}

fn read_spec(path: Option<&str>) -> Result<Value, CliError> {
    let text = match path {
        None => return Ok(Value::Object(Default::default())),
        Some("-") => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::Usage(format!("stdin: {e}")))?;
            s
        }
        Some(p) => std::fs::read_to_string(p).map_err(|e| CliError::Usage(format!("{p}: {e}")))?,
    };
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("$: invalid JSON: {e}")))
}

fn run(command: &'static str, common: &Common) -> Report {
    let (_, operation, runner) = COMMANDS.iter().find(|c| c.0 == command).expect("every subcommand is in the table");
    let mut meta = Meta::new(command, operation, common.seed);
    let start = Instant::now();
    let spec = read_spec(common.json.as_deref());
    let inputs = spec.as_ref().cloned().unwrap_or(Value::Null);
    let outcome = spec.and_then(|s| {
        let job = spec::Job::from_value(&s, command)?;
        let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
        runner(&job, &mut rng)
    });
    let mut results = Vec::new();
    match outcome {
        Ok(out) => {
            meta.warnings = out.warnings;
            if out.results.is_empty() {
                meta.warnings.push("no results: the check passes vacuously".into());
            }
            meta.status = status_of(&out.results);
            results = out.results;
        }
        Err(e) => {
            meta.status = e.status();
            meta.error = Some(e.to_string());
        }
    }
    if common.timing {
        meta.timing_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    let pass = meta.status == Status::Pass;
    Report { meta, inputs, results, pass }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    let mut out = std::io::stdout().lock();
    if cli.list {
        for (cmd, op, _) in COMMANDS {
            let _ = writeln!(out, "{cmd:<16} {op}");
        }
        return ExitCode::SUCCESS;
    }
    let Some(cmd) = cli.command else {
        eprintln!("error: a subcommand is required (see --help or --list)");
        return ExitCode::from(3);
    };
    let (name, common) = cmd.split();
    let report = run(name, common);
    let _ = writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    if let Some(e) = &report.meta.error {
        eprintln!("error: {e}");
    }
    ExitCode::from(report.meta.status.exit_code())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_command_has_a_subcommand() {
        use clap::CommandFactory;
        let cli = Cli::command();
        let subs: Vec<String> = cli.get_subcommands().map(|s| s.get_name().to_string()).collect();
        for (cmd, _, _) in COMMANDS {
            assert!(subs.iter().any(|s| s == cmd), "{cmd}");
        }
        assert_eq!(subs.len(), COMMANDS.len());
    }

    #[test]
    fn report_round_trips() {
        let common = Common { json: None, seed: 5, timing: false };
        for cmd in ["hilbert", "weil-gamma", "fund-lemma", "classify"] {
            let report = run(cmd, &common);
            let text = serde_json::to_string_pretty(&report).unwrap();
            let back: Report = serde_json::from_str(&text).unwrap();
            assert_eq!(back, report);
            assert_eq!(serde_json::to_string_pretty(&back).unwrap(), text);
        }
    }
}
