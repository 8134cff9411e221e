//! TOML run configuration.

use std::f64::consts::PI;
use std::path::Path;

use dressgate_core::{CqedParams, DressedBranch, Error, Geometry, GateTime, SystemParams};
use serde::{Deserialize, Serialize};

use crate::sweeps::{Fig2aSettings, Fig2bSettings, Fig3Settings, Fig4Settings, Fig5Settings, Numerics};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    Reflection,
    GateError,
    Fig2a,
    Fig2b,
    Fig3,
    Fig4,
    Fig5,
    OracleCheck,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::Reflection => "reflection",
            Scenario::GateError => "gate-error",
            Scenario::Fig2a => "fig2a",
            Scenario::Fig2b => "fig2b",
            Scenario::Fig3 => "fig3",
            Scenario::Fig4 => "fig4",
            Scenario::Fig5 => "fig5",
            Scenario::OracleCheck => "oracle-check",
        }
    }

    /// Parameter set used when the config has no `[params]` table.
    pub fn default_params(self) -> SystemParams {
        match self {
            Scenario::Fig3 | Scenario::Fig4 | Scenario::OracleCheck => SystemParams::resonant_shell(),
            _ => SystemParams::dispersive_cloud(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReflectionKind {
    /// Bare cavity.
    Empty,
    /// Qubit in the uncoupled state: EIT closed form.
    Q0,
    /// Qubit in the dressed state: full blockade solver.
    Q1,
    /// Circuit-QED register in 0.
    Cqed0,
    /// Circuit-QED register in 1.
    Cqed1,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReflectionSettings {
    pub kind: ReflectionKind,
    pub omega_min: f64,
    pub omega_max: f64,
    pub n_omega: usize,
    /// Ensemble geometry; the full cloud when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub geometry: Option<Geometry>,
    pub branch: DressedBranch,
    /// Also write per-bin response ratios at this frequency.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bin_omega: Option<f64>,
}

impl Default for ReflectionSettings {
    fn default() -> Self {
        ReflectionSettings {
            kind: ReflectionKind::Empty,
            omega_min: -1000.0,
            omega_max: 1000.0,
            n_omega: 2001,
            geometry: None,
            branch: DressedBranch::Lower,
            bin_omega: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GateErrorSettings {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub geometry: Option<Geometry>,
    pub branch: DressedBranch,
    pub bandwidth: f64,
    pub omega_center: f64,
    pub phi: f64,
    pub gate_time: GateTime,
    /// Evaluate the circuit-QED model from `[cqed]` instead.
    pub cqed: bool,
}

impl Default for GateErrorSettings {
    fn default() -> Self {
        GateErrorSettings {
            geometry: None,
            branch: DressedBranch::Lower,
            bandwidth: 0.1,
            omega_center: 0.0,
            phi: PI,
            gate_time: GateTime::Window,
            cqed: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OracleSettings {
    pub geometry: Geometry,
    /// Bins of the ensemble; the time-domain integrator accepts at most 64.
    pub n_bins: usize,
    pub bandwidth: f64,
    /// Dressing angle; ε follows from `Delta` in `[params]`.
    pub theta: f64,
    pub branch: DressedBranch,
    /// Integration step as a fraction of the inverse largest rate.
    pub safety: f64,
    /// Integration time after the pulse window (µs).
    pub tail: f64,
    /// Largest accepted L² discrepancy.
    pub threshold: f64,
}

impl Default for OracleSettings {
    fn default() -> Self {
        OracleSettings {
            geometry: Geometry::Shell { r_center: 5.0, width: 1.0 },
            n_bins: 16,
            bandwidth: 0.5,
            theta: 0.15,
            branch: DressedBranch::Lower,
            safety: 0.05,
            tail: 60.0,
            threshold: 1e-5,
        }
    }
}

/// A complete run description; every table except `scenario` is optional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub scenario: Scenario,
    /// File stem of the outputs; the scenario name when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<SystemParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cqed: Option<CqedParams>,
    #[serde(default)]
    pub numerics: Numerics,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reflection: Option<ReflectionSettings>,
    #[serde(default, rename = "gate-error", skip_serializing_if = "Option::is_none")]
    pub gate_error: Option<GateErrorSettings>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fig2a: Option<Fig2aSettings>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fig2b: Option<Fig2bSettings>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fig3: Option<Fig3Settings>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fig4: Option<Fig4Settings>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fig5: Option<Fig5Settings>,
    #[serde(default, rename = "oracle-check", skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSettings>,
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("invalid config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
    #[error("invalid config: {0}")]
    Model(#[from] Error),
}

impl RunConfig {
    pub fn new(scenario: Scenario) -> Self {
        RunConfig {
            scenario,
            output: None,
            params: None,
            cqed: None,
            numerics: Numerics::default(),
            reflection: None,
            gate_error: None,
            fig2a: None,
            fig2b: None,
            fig3: None,
            fig4: None,
            fig5: None,
            oracle: None,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let config: RunConfig = toml::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ConfigError::Read { path: path.display().to_string(), source })?;
        Self::from_toml(&text)
    }

    /// Canonical TOML text; its hash identifies the run in metadata.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("run config is always representable in TOML")
    }

    pub fn params(&self) -> SystemParams {
        self.params.unwrap_or_else(|| self.scenario.default_params())
    }

    pub fn stem(&self) -> &str {
        self.output.as_deref().unwrap_or(self.scenario.name())
    }

    /// Rejects sections that belong to another scenario and bad values.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let present = [
            (Scenario::Reflection, self.reflection.is_some()),
            (Scenario::GateError, self.gate_error.is_some()),
            (Scenario::Fig2a, self.fig2a.is_some()),
            (Scenario::Fig2b, self.fig2b.is_some()),
            (Scenario::Fig3, self.fig3.is_some()),
            (Scenario::Fig4, self.fig4.is_some()),
            (Scenario::Fig5, self.fig5.is_some()),
            (Scenario::OracleCheck, self.oracle.is_some()),
        ];
        for (scenario, given) in present {
            if given && scenario != self.scenario {
                return Err(ConfigError::Invalid(format!(
                    "section [{}] does not apply to scenario \"{}\"",
                    scenario.name(),
                    self.scenario.name()
                )));
            }
        }
        if let Some(stem) = &self.output {
            if stem.is_empty() || stem.contains(['/', '\\']) {
                return Err(ConfigError::Invalid(format!("output \"{stem}\" must be a plain file stem")));
            }
        }
        self.params().validate()?;
        if let Some(c) = &self.cqed {
            c.validate()?;
        }
        let n = &self.numerics;
        if n.n_bins == 0 || n.starts == 0 || n.max_evals == 0 {
            return Err(ConfigError::Invalid("numerics counts must be positive".into()));
        }
        if let Some(r) = &self.reflection {
            if !(r.omega_min < r.omega_max) || r.n_omega < 2 {
                return Err(ConfigError::Invalid(
                    "reflection needs omega_min < omega_max and n_omega >= 2".into(),
                ));
            }
            if matches!(r.kind, ReflectionKind::Cqed0 | ReflectionKind::Cqed1) && self.cqed.is_none() {
                return Err(ConfigError::Invalid("cQED reflection needs a [cqed] table".into()));
            }
        }
        if let Some(g) = &self.gate_error {
            if g.cqed && self.cqed.is_none() {
                return Err(ConfigError::Invalid("cqed = true needs a [cqed] table".into()));
            }
        }
        Ok(())
    }
}
