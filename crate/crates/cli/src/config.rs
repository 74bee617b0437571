//! Scenario configuration files: UTF-8 JSON with complex numbers written as
//! `[re, im]` pairs.

use std::fs;
use std::path::Path;

use maxmon::relation::LinearRelation;
use maxmon::systemnode::{bd_space, BlockOperator, TraceSystem};
use maxmon::CMatrix;
use nalgebra::Complex;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// A complex number as `[re, im]`.
pub type JsonComplex = [f64; 2];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    TraceSystem,
    BoundaryRelation,
}

/// `V ⊆ ℂ²` spanned by `v_basis` and `K u = M ξ_u`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceSystemConfig {
    pub v_basis: Vec<[JsonComplex; 2]>,
    pub m: Vec<[JsonComplex; 2]>,
}

/// Graph of `h` spanned by quadruples `(x₀, x₁, y₀, y₁)` in `BD(G)`
/// coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundaryRelationConfig {
    pub h_basis: Vec<[JsonComplex; 4]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialData {
    /// `u₀ = 16x²(1 − x)²`, `w₀ = 0`.
    Bump,
    Zero,
    /// Seeded random smooth data.
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolutionBlock {
    pub tau: f64,
    pub steps: usize,
    pub n: usize,
    #[serde(default = "default_initial")]
    pub initial: InitialData,
}

fn default_initial() -> InitialData {
    InitialData::Bump
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    pub kind: ScenarioKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace_system: Option<TraceSystemConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary_relation: Option<BoundaryRelationConfig>,
    /// The relation must be rejected by the reverse construction.
    #[serde(default)]
    pub expect_reject: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evolution: Option<EvolutionBlock>,
}

/// The system a configuration describes.
#[derive(Debug, Clone)]
pub enum Payload {
    TraceSystem(TraceSystem<f64>),
    BoundaryRelation(LinearRelation<f64>),
}

impl Payload {
    /// The boundary relation in endpoint form, via `forward_h` for trace
    /// systems.
    pub fn block(&self) -> maxmon::Result<BlockOperator<f64>> {
        match self {
            Payload::TraceSystem(ts) => maxmon::systemnode::forward_h(ts),
            Payload::BoundaryRelation(h) => BlockOperator::from_relation(h.clone()),
        }
    }
}

fn cx(z: &JsonComplex) -> Complex<f64> {
    Complex::new(z[0], z[1])
}

fn all_finite<const N: usize>(rows: &[[JsonComplex; N]]) -> bool {
    rows.iter().flatten().flatten().all(|x| x.is_finite())
}

impl ScenarioConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })?;
        let config: Self = serde_json::from_str(&text).map_err(|e| CliError::Config {
            path: path.to_path_buf(),
            detail: e.to_string(),
        })?;
        config.validate().map_err(|detail| CliError::Config { path: path.to_path_buf(), detail })?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.name.is_empty() || !self.name.chars().all(|c| c.is_ascii_alphanumeric() || "-_.".contains(c)) {
            return Err(format!("name {:?} must be nonempty and use only ASCII letters, digits, '-', '_' or '.'", self.name));
        }
        if self.name.starts_with('.') {
            return Err(format!("name {:?} must not start with '.'", self.name));
        }
        match (self.kind, &self.trace_system, &self.boundary_relation) {
            (ScenarioKind::TraceSystem, Some(ts), None) => {
                if !all_finite(&ts.v_basis) || !all_finite(&ts.m) {
                    return Err("trace_system entries must be finite".into());
                }
                if self.expect_reject {
                    return Err("expect_reject applies to boundary_relation scenarios only".into());
                }
            }
            (ScenarioKind::BoundaryRelation, None, Some(br)) => {
                if !all_finite(&br.h_basis) {
                    return Err("boundary_relation entries must be finite".into());
                }
            }
            _ => return Err("exactly one payload matching `kind` must be present".into()),
        }
        if let Some(ev) = &self.evolution {
            if !(ev.tau.is_finite() && ev.tau > 0.0) {
                return Err(format!("evolution tau must be positive, got {}", ev.tau));
            }
            if ev.steps == 0 {
                return Err("evolution steps must be at least 1".into());
            }
            if ev.n < maxmon::semigroup::MIN_NODES {
                return Err(format!("evolution n must be at least {}", maxmon::semigroup::MIN_NODES));
            }
        }
        Ok(())
    }

    /// Builds the typed system; construction failures are configuration
    /// errors.
    pub fn payload(&self) -> Result<Payload, String> {
        if let Some(ts) = &self.trace_system {
            let v = CMatrix::from_fn(2, ts.v_basis.len(), |i, j| cx(&ts.v_basis[j][i]));
            let m = CMatrix::from_fn(ts.m.len(), 2, |i, j| cx(&ts.m[i][j]));
            return TraceSystem::new(&v, m).map(Payload::TraceSystem).map_err(|e| e.to_string());
        }
        let br = self.boundary_relation.as_ref().ok_or("missing payload")?;
        let spanning = CMatrix::from_fn(4, br.h_basis.len(), |i, j| cx(&br.h_basis[j][i]));
        let bd = bd_space::<f64>();
        LinearRelation::from_spanning(&bd, &bd, &spanning).map(Payload::BoundaryRelation).map_err(|e| e.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<ScenarioConfig, String> {
        let c: ScenarioConfig = serde_json::from_str(text).map_err(|e| e.to_string())?;
        c.validate()?;
        Ok(c)
    }

    #[test]
    fn dirichlet_parses() {
        let c = parse(r#"{"name": "d", "kind": "trace_system", "trace_system": {"v_basis": [], "m": []}}"#).unwrap();
        match c.payload().unwrap() {
            Payload::TraceSystem(ts) => assert_eq!((ts.v().dim(), ts.u_dim()), (0, 0)),
            Payload::BoundaryRelation(_) => panic!("wrong payload"),
        }
    }

    #[test]
    fn payload_must_match_kind() {
        let both = r#"{"name": "x", "kind": "trace_system", "trace_system": {"v_basis": [], "m": []},
            "boundary_relation": {"h_basis": []}}"#;
        assert!(parse(both).is_err());
        let wrong = r#"{"name": "x", "kind": "boundary_relation", "trace_system": {"v_basis": [], "m": []}}"#;
        assert!(parse(wrong).is_err());
    }

    #[test]
    fn ragged_rows_are_rejected() {
        let ragged = r#"{"name": "x", "kind": "trace_system", "trace_system": {"v_basis": [], "m": [[[1, 0]]]}}"#;
        assert!(parse(ragged).is_err());
    }

    #[test]
    fn rank_deficient_v_is_rejected() {
        let c = parse(
            r#"{"name": "x", "kind": "trace_system",
                "trace_system": {"v_basis": [[[1, 0], [0, 0]], [[2, 0], [0, 0]]], "m": []}}"#,
        )
        .unwrap();
        assert!(c.payload().is_err());
    }

    #[test]
    fn unsafe_names_are_rejected() {
        for name in ["", "../x", "a/b", ".hidden"] {
            let text = format!(r#"{{"name": {name:?}, "kind": "trace_system", "trace_system": {{"v_basis": [], "m": []}}}}"#);
            assert!(parse(&text).is_err(), "{name}");
        }
    }
}
