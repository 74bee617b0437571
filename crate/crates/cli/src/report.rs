//! Machine-readable reports and plot data, written atomically.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use maxmon::semigroup::Trajectory;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// One measured quantity with its tolerance; passes when `value ≤ tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub check: String,
    pub pass: bool,
    pub value: f64,
    pub tolerance: f64,
}

impl Check {
    /// `NaN` values fail.
    pub fn at_most(check: &str, value: f64, tolerance: f64) -> Self {
        Self { check: check.into(), pass: value <= tolerance, value, tolerance }
    }

    /// A yes/no check recorded as a violation count of 0 or 1.
    pub fn holds(check: &str, ok: bool) -> Self {
        Self::at_most(check, if ok { 0.0 } else { 1.0 }, 0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

/// A relation that failed a property check, with everything needed to
/// rebuild it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationRecord {
    pub dim: usize,
    pub kind: String,
    /// Generator seed; `None` for relations given only by their data.
    pub seed: Option<u64>,
    /// Gram matrix rows.
    pub gram: Vec<Vec<[f64; 2]>>,
    /// Rows of the `2·dim × k` graph basis.
    pub graph_basis: Vec<Vec<[f64; 2]>>,
    /// Names of the failed checks.
    pub failed: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub name: String,
    pub seed: u64,
    pub version: String,
    pub tol_scale: f64,
    pub checks: Vec<Check>,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<RelationRecord>,
}

impl Report {
    pub fn new(command: &str, name: &str, seed: u64, tol_scale: f64, checks: Vec<Check>) -> Self {
        let verdict = if checks.iter().all(|c| c.pass) { Verdict::Pass } else { Verdict::Fail };
        Self {
            command: command.into(),
            name: name.into(),
            seed,
            version: env!("CARGO_PKG_VERSION").into(),
            tol_scale,
            checks,
            verdict,
            failures: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })?;
        serde_json::from_str(&text).map_err(|e| CliError::Config { path: path.to_path_buf(), detail: e.to_string() })
    }
}

/// Writes `bytes` to a temporary file beside `path` and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let wrap = |source| CliError::Write { path: path.to_path_buf(), source };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir).map_err(wrap)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(wrap)?;
    tmp.write_all(bytes).map_err(wrap)?;
    tmp.as_file().sync_all().map_err(wrap)?;
    tmp.persist(path).map_err(|e| wrap(e.error))?;
    Ok(())
}

pub fn write_json<S: Serialize>(path: &Path, value: &S) -> Result<PathBuf, CliError> {
    let mut bytes = serde_json::to_vec_pretty(value).expect("reports serialize");
    bytes.push(b'\n');
    write_atomic(path, &bytes)?;
    Ok(path.to_path_buf())
}

fn float(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_bytes(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

/// Columns `step, t, energy, energy_ratio` with `energy_ratio = E_k / E_0`
/// (1 when `E_0 = 0`).
pub fn write_energy_csv(path: &Path, trajectory: &Trajectory<f64>) -> Result<PathBuf, CliError> {
    let e0 = trajectory.states.first().map_or(0.0, |s| s.energy);
    let rows = trajectory.states.iter().map(|s| {
        let ratio = if e0 > 0.0 { s.energy / e0 } else { 1.0 };
        vec![s.step.to_string(), float(s.t), float(s.energy), float(ratio)]
    });
    write_atomic(path, &csv_bytes(&["step", "t", "energy", "energy_ratio"], rows))?;
    Ok(path.to_path_buf())
}

/// Columns `n, dx, error`.
pub fn write_convergence_csv(path: &Path, grids: &[usize], errors: &[f64]) -> Result<PathBuf, CliError> {
    let rows = grids.iter().zip(errors).map(|(&n, &e)| vec![n.to_string(), float(1.0 / (n - 1) as f64), float(e)]);
    write_atomic(path, &csv_bytes(&["n", "dx", "error"], rows))?;
    Ok(path.to_path_buf())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_is_the_conjunction() {
        let ok = Report::new("t", "n", 1, 1.0, vec![Check::at_most("a", 0.5, 1.0), Check::holds("b", true)]);
        assert!(ok.passed());
        let bad = Report::new("t", "n", 1, 1.0, vec![Check::at_most("a", 0.5, 1.0), Check::at_most("c", f64::NAN, 1.0)]);
        assert!(!bad.passed());
    }

    #[test]
    fn atomic_write_replaces_content() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("nested").join("r.json");
        write_atomic(&path, b"first").unwrap();
        write_atomic(&path, b"second").unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), "second");
        assert_eq!(fs::read_dir(path.parent().unwrap()).unwrap().count(), 1);
    }

    #[test]
    fn floats_keep_seventeen_digits() {
        let x = 0.1f64 + 0.2;
        assert_eq!(float(x).parse::<f64>().unwrap(), x);
        assert_eq!(float(1.0), "1.0000000000000000e0");
    }

    #[test]
    fn report_round_trips() {
        let mut r = Report::new("t", "n", 7, 1.0, vec![Check::at_most("a", 1.0 / 3.0, 1e-10)]);
        r.failures.push(RelationRecord {
            dim: 1,
            kind: "operator".into(),
            seed: Some(3),
            gram: vec![vec![[1.0, 0.0]]],
            graph_basis: vec![vec![[0.6, 0.0]], vec![[0.8, 0.1]]],
            failed: vec!["a".into()],
        });
        let text = serde_json::to_string(&r).unwrap();
        assert_eq!(serde_json::from_str::<Report>(&text).unwrap(), r);
    }
}
