//! `fextq`: extreme conditional quantiles of a heavy-tailed response given a
//! functional covariate.

mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use args::{CvArgs, EstimateArgs, ScanArgs, SimulateArgs, WeissmanArgs};

#[derive(Debug, Parser)]
#[command(
    name = "fextq",
    version,
    about = "Extreme conditional quantiles with functional covariates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Conditional survival estimate at `--y`.
    Csf(EstimateArgs),
    /// Conditional quantile of order `--alpha`.
    Quantile(EstimateArgs),
    /// Conditional tail index.
    Gamma(EstimateArgs),
    /// Extrapolated quantile of order `--beta`.
    Weissman(WeissmanArgs),
    /// Cross-validation scores over the bandwidth grid (CSV `h,score`).
    Cv(CvArgs),
    /// Replicated Burr study on the cosine covariate process.
    Simulate(SimulateArgs),
    /// Extrapolated quantile and tail index along a segment between two curves.
    Scan(ScanArgs),
}

/// Failure surfaced to the user as one JSON line on stderr.
#[derive(Debug)]
pub struct CliError {
    kind: &'static str,
    message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            kind: "usage",
            message: message.into(),
        }
    }
}

impl From<fextq::Error> for CliError {
    fn from(e: fextq::Error) -> Self {
        Self {
            kind: e.kind(),
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self {
            kind: "io",
            message: e.to_string(),
        }
    }
}

fn fail(err: &CliError) -> ExitCode {
    let record = serde_json::json!({
        "schema": output::SCHEMA,
        "status": "error",
        "kind": err.kind,
        "message": err.message,
    });
    eprintln!("{record}");
    ExitCode::FAILURE
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("FEXTQ_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw.trim().parse().ok().filter(|&t| t > 0).ok_or_else(|| {
        CliError::usage(format!(
            "FEXTQ_THREADS must be a positive integer, got `{raw}`"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::usage(e.to_string()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            return fail(&CliError::usage(
                e.to_string().trim_end().replace('\n', " "),
            ))
        }
    };
    if let Err(e) = configure_threads() {
        return fail(&e);
    }
    let result = match &cli.command {
        Command::Csf(a) => commands::csf(a),
        Command::Quantile(a) => commands::quantile(a),
        Command::Gamma(a) => commands::gamma(a),
        Command::Weissman(a) => commands::weissman(a),
        Command::Cv(a) => commands::cv(a),
        Command::Simulate(a) => commands::simulate(a),
        Command::Scan(a) => commands::scan(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(&e),
    }
}
