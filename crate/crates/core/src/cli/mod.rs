//! Command-line front end. Exit codes: 0 pass, 1 tolerance failure,
//! 2 configuration error.

pub mod commands;
pub mod config;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use commands::Outcome;
pub use config::{ConfigError, ExperimentConfig, SchemeName};

#[derive(Debug, Parser)]
#[command(name = "thinfilm", version, about = "Thin-film billiard experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// TOML experiment config; built-in defaults when omitted.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Report destination (JSON, or CSV for table commands).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Grid counts as `SxT`, overriding the config.
    #[arg(long, global = true, value_parser = parse_grid)]
    pub grid: Option<(usize, usize)>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Finite-difference ε-derivative of the thin-film ratio against the
    /// Hamiltonian field.
    VerifyPerline,
    /// `|det J − 1|` table for a reflection map (CSV).
    VerifySymplectic,
    /// Exact brackets, closure span and membership reports.
    Lie,
    /// Kernel and image ranks of the polynomial operators (CSV).
    Polyker,
    /// Convergence ladder of a product scheme.
    Approximate {
        #[arg(long, value_enum)]
        scheme: Option<SchemeName>,
    },
}

fn parse_grid(text: &str) -> Result<(usize, usize), String> {
    let (s, t) = text
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected SxT, got {text:?}"))?;
    let parse = |v: &str| v.trim().parse::<usize>().map_err(|e| format!("{v:?}: {e}"));
    let (s, t) = (parse(s)?, parse(t)?);
    if s == 0 || t == 0 {
        return Err("grid counts must be positive".into());
    }
    Ok((s, t))
}

/// Loads the config and applies command-line overrides.
pub fn resolve_config(cli: &Cli) -> Result<ExperimentConfig, ConfigError> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some((s, t)) = cli.grid {
        cfg.grid.s_count = Some(s);
        cfg.grid.theta_count = Some(t);
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Command::Approximate { scheme: Some(s) } = &cli.command {
        cfg.approximate.scheme = s.clone();
    }
    Ok(cfg)
}

pub fn execute(cli: &Cli) -> Result<Outcome, ConfigError> {
    let cfg = resolve_config(cli)?;
    match cli.command {
        Command::VerifyPerline => commands::verify_perline(&cfg),
        Command::VerifySymplectic => commands::verify_symplectic(&cfg),
        Command::Lie => commands::lie(&cfg),
        Command::Polyker => commands::polyker(&cfg),
        Command::Approximate { .. } => commands::approximate(&cfg),
    }
}

fn emit(cli: &Cli, outcome: &Outcome) -> std::io::Result<()> {
    let json = serde_json::to_string_pretty(&outcome.json).expect("report serializes") + "\n";
    let write_to = |path: &PathBuf, text: &str| std::fs::write(path, text);
    match (&outcome.csv, &cli.out) {
        (Some(csv), Some(path)) => {
            write_to(path, csv)?;
            std::io::stdout().write_all(json.as_bytes())
        }
        (Some(csv), None) => {
            std::io::stdout().write_all(csv.as_bytes())?;
            std::io::stderr().write_all(json.as_bytes())
        }
        (None, Some(path)) => write_to(path, &json),
        (None, None) => std::io::stdout().write_all(json.as_bytes()),
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(outcome) => match emit(&cli, &outcome) {
            Ok(()) => outcome.code,
            Err(e) => {
                eprintln!("error: cannot write report: {e}");
                2
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
