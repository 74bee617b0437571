//! Command-line scenario runner: loads scenario configs, runs the
//! verification suites and evolutions, and writes JSON reports and CSV plot
//! data.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 for
//! malformed configs, missing files and bad arguments.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod report;
pub mod suites;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use config::ScenarioConfig;
use report::{Check, Report};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("cannot read {}: {source}", path.display())]
    Read { path: PathBuf, source: std::io::Error },

    #[error("malformed input {}: {detail}", path.display())]
    Config { path: PathBuf, detail: String },

    #[error("cannot write {}: {source}", path.display())]
    Write { path: PathBuf, source: std::io::Error },
}

#[derive(Debug, Parser)]
#[command(name = "maxmon", version, about = "Verify maximal monotone boundary relations and run scenarios")]
pub struct Cli {
    /// Seed for every random sample.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,

    /// Output directory for reports and plot data.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,

    /// Multiplier applied to every check tolerance.
    #[arg(long, global = true, default_value_t = 1.0, value_parser = parse_tol_scale)]
    pub tol_scale: f64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Property suites over seeded random relations.
    VerifyRelations {
        /// Dimensions as a range `a-b` or a list `a,b,c`, within 1..=8.
        #[arg(long, default_value = "1-6", value_parser = parse_dims)]
        dims: Dims,

        /// Relations per dimension.
        #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,

        /// Rerun the failures recorded in a report instead of a fresh corpus.
        #[arg(long)]
        replay: Option<PathBuf>,
    },
    /// Checks of the two-dimensional boundary space.
    VerifyBd,
    /// Every check for one scenario config.
    Scenario { config: PathBuf },
    /// The evolution block of a scenario config.
    Evolve { config: PathBuf },
    /// Observed order of the resolvent solver.
    Convergence {
        config: PathBuf,

        #[arg(long, value_delimiter = ',', default_value = "64,128,256")]
        grids: Vec<usize>,

        #[arg(long, default_value_t = 0.1)]
        tau: f64,
    },
}

fn parse_tol_scale(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(format!("must be positive and finite, got {s}"))
    }
}

/// Dimensions for the property suites.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dims(pub Vec<usize>);

/// `a-b` or `a,b,c` with every entry in `1..=8`, sorted and deduplicated.
pub fn parse_dims(s: &str) -> Result<Dims, String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}"));
    let mut dims = match s.split_once('-') {
        Some((a, b)) => {
            let (a, b) = (num(a)?, num(b)?);
            if a > b {
                return Err(format!("empty range {s}"));
            }
            (a..=b).collect::<Vec<_>>()
        }
        None => s.split(',').map(num).collect::<Result<Vec<_>, _>>()?,
    };
    if let Some(d) = dims.iter().find(|d| !(1..=8).contains(*d)) {
        return Err(format!("dimension {d} outside 1..=8"));
    }
    dims.sort_unstable();
    dims.dedup();
    Ok(Dims(dims))
}

/// A finished command: its report and the files written.
pub struct Outcome {
    pub report: Report,
    pub written: Vec<PathBuf>,
}

fn load_payload(path: &Path) -> Result<(ScenarioConfig, config::Payload), CliError> {
    let cfg = ScenarioConfig::load(path)?;
    let payload = cfg.payload().map_err(|detail| CliError::Config { path: path.to_path_buf(), detail })?;
    Ok((cfg, payload))
}

fn block_of(path: &Path, payload: &config::Payload) -> Result<maxmon::systemnode::BlockOperator<f64>, CliError> {
    payload.block().map_err(|e| CliError::Config { path: path.to_path_buf(), detail: e.to_string() })
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let (seed, scale, out) = (cli.seed, cli.tol_scale, cli.out.as_path());
    match &cli.command {
        Command::VerifyRelations { dims, trials, replay } => {
            let (report, file) = match replay {
                Some(path) => {
                    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.clone(), source })?;
                    let parsed: suites::ReplayFile = serde_json::from_str(&text)
                        .map_err(|e| CliError::Config { path: path.clone(), detail: e.to_string() })?;
                    (suites::replay(&parsed, path, seed, scale)?, "verify-relations-replay.json")
                }
                None => (suites::property_suites(&dims.0, *trials as usize, seed, scale), "verify-relations.json"),
            };
            let written = vec![report::write_json(&out.join(file), &report)?];
            Ok(Outcome { report, written })
        }
        Command::VerifyBd => {
            let report = suites::boundary_space_checks(seed, scale);
            let written = vec![report::write_json(&out.join("verify-bd.json"), &report)?];
            Ok(Outcome { report, written })
        }
        Command::Scenario { config } => {
            let (cfg, payload) = load_payload(config)?;
            let run = suites::scenario_checks(&payload, cfg.expect_reject, cfg.evolution.as_ref(), seed, scale);
            let dir = out.join(&cfg.name);
            let mut written = Vec::new();
            if let Some(traj) = &run.trajectory {
                written.push(report::write_energy_csv(&dir.join("energy.csv"), traj)?);
            }
            let report = Report::new("scenario", &cfg.name, seed, scale, run.checks);
            written.insert(0, report::write_json(&dir.join("scenario.json"), &report)?);
            Ok(Outcome { report, written })
        }
        Command::Evolve { config } => {
            let (cfg, payload) = load_payload(config)?;
            let ev = cfg.evolution.ok_or_else(|| CliError::Config {
                path: config.clone(),
                detail: "no evolution block".into(),
            })?;
            let block = block_of(config, &payload)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (check, traj) = suites::evolution(&block, &ev, &mut rng, scale);
            let dir = out.join(&cfg.name);
            let mut written = Vec::new();
            if let Some(traj) = &traj {
                written.push(report::write_energy_csv(&dir.join("energy.csv"), traj)?);
            }
            let report = Report::new("evolve", &cfg.name, seed, scale, vec![check]);
            written.insert(0, report::write_json(&dir.join("evolve.json"), &report)?);
            Ok(Outcome { report, written })
        }
        Command::Convergence { config, grids, tau } => {
            if !(tau.is_finite() && *tau > 0.0) {
                return Err(CliError::Usage(format!("--tau must be positive, got {tau}")));
            }
            if let Some(n) = grids.iter().find(|&&n| n < maxmon::semigroup::MIN_NODES) {
                return Err(CliError::Usage(format!("grid {n} has fewer than {} nodes", maxmon::semigroup::MIN_NODES)));
            }
            let (cfg, payload) = load_payload(config)?;
            let block = block_of(config, &payload)?;
            let (checks, errors) = suites::convergence_checks(&block, *tau, grids, scale)?;
            let dir = out.join(&cfg.name);
            let mut written = Vec::new();
            if errors.len() == grids.len() {
                written.push(report::write_convergence_csv(&dir.join("convergence.csv"), grids, &errors)?);
            }
            let report = Report::new("convergence", &cfg.name, seed, scale, checks);
            written.insert(0, report::write_json(&dir.join("convergence.json"), &report)?);
            Ok(Outcome { report, written })
        }
    }
}

/// Human-readable summary lines for stdout.
pub fn summary(outcome: &Outcome) -> Vec<String> {
    let r = &outcome.report;
    let mut lines: Vec<String> = r.checks.iter().map(format_check).collect();
    if !r.failures.is_empty() {
        lines.push(format!("{} relations failed; rerun them with --replay", r.failures.len()));
    }
    lines.extend(outcome.written.iter().map(|p| format!("wrote {}", p.display())));
    lines.push(format!("{} {}: {}", r.command, r.name, if r.passed() { "PASS" } else { "FAIL" }));
    lines
}

fn format_check(c: &Check) -> String {
    format!("{} {}: {:.3e} (tolerance {:.3e})", if c.pass { "PASS" } else { "FAIL" }, c.check, c.value, c.tolerance)
}
