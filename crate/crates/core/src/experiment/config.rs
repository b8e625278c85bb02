use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::data::Background;
use crate::error::{Error, Result};
use crate::integrators::StepperConfig;
use crate::models::Params;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Perturbation,
    Normal,
    EulerRiesz,
}

impl ModelKind {
    pub fn field_names(self) -> &'static [&'static str] {
        match self {
            ModelKind::Perturbation => &["omega", "e", "a"],
            ModelKind::Normal => &["omega", "e1", "e2", "b3"],
            ModelKind::EulerRiesz => &["omega"],
        }
    }
}

/// Initial datum, selected by `kind`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DatumSpec {
    Zero,
    /// `eps (f_N, g, g)`; for the normal model its A/B twin.
    Illposed {
        n_scales: usize,
        #[serde(default = "defaults::lambda")]
        lambda: f64,
        /// `null` means `1/N`.
        #[serde(default)]
        epsilon: Option<f64>,
        #[serde(default)]
        background: Background,
    },
    /// Independent seeded random smooth fields, one per component.
    Random {
        #[serde(default = "defaults::decay")]
        decay: f64,
        #[serde(default = "defaults::one")]
        omega_amp: f64,
        #[serde(default = "defaults::em_amp")]
        em_amp: f64,
    },
}

impl Default for DatumSpec {
    fn default() -> Self {
        DatumSpec::Random {
            decay: defaults::decay(),
            omega_amp: 1.0,
            em_amp: defaults::em_amp(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub n_scales: Vec<usize>,
    /// Also run a matched normal-structure twin per `N`.
    #[serde(default)]
    pub twins: bool,
    /// Inflation window; `null` means `t_end`.
    #[serde(default)]
    pub window: Option<f64>,
    #[serde(default = "defaults::thresholds")]
    pub thresholds: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LimitConfig {
    pub c_values: Vec<f64>,
    /// Comparison time; `null` means `t_end`.
    #[serde(default)]
    pub t_star: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LemmaConfig {
    /// Scale counts for the `family` check; `null` means `1..=max admissible`.
    #[serde(default)]
    pub n_values: Option<Vec<usize>>,
    /// Time of the flows in the commutator and composition suites.
    #[serde(default = "defaults::flow_time")]
    pub flow_time: f64,
    /// Also evaluate the commutator suite on the doubled grid.
    #[serde(default = "defaults::yes")]
    pub refine: bool,
}

impl Default for LemmaConfig {
    fn default() -> Self {
        Self {
            n_values: None,
            flow_time: defaults::flow_time(),
            refine: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "defaults::model")]
    pub model: ModelKind,
    #[serde(default = "defaults::grid")]
    pub grid: usize,
    #[serde(default)]
    pub params: Params,
    #[serde(default)]
    pub stepper: StepperConfig,
    #[serde(default)]
    pub datum: DatumSpec,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "defaults::output")]
    pub output: PathBuf,
    #[serde(default = "defaults::checks")]
    pub checks: Vec<String>,
    /// Tolerance of the energy check.
    #[serde(default = "defaults::energy_tol")]
    pub energy_tol: f64,
    /// Write a snapshot every this many samples (0: none); the last sample
    /// is always written when snapshots are on.
    #[serde(default = "defaults::snapshot_every")]
    pub snapshot_every: usize,
    #[serde(default)]
    pub sweep: Option<SweepConfig>,
    #[serde(default)]
    pub limit: Option<LimitConfig>,
    #[serde(default)]
    pub lemma: LemmaConfig,
}

pub(crate) mod defaults {
    use std::path::PathBuf;

    use super::ModelKind;

    pub fn model() -> ModelKind {
        ModelKind::Perturbation
    }
    pub fn grid() -> usize {
        128
    }
    pub fn lambda() -> f64 {
        2.0
    }
    pub fn decay() -> f64 {
        4.0
    }
    pub fn one() -> f64 {
        1.0
    }
    pub fn em_amp() -> f64 {
        0.1
    }
    pub fn thresholds() -> Vec<f64> {
        vec![1.5, 2.0, 4.0]
    }
    pub fn flow_time() -> f64 {
        0.5
    }
    pub fn yes() -> bool {
        true
    }
    pub fn output() -> PathBuf {
        PathBuf::from("runs/out")
    }
    pub fn checks() -> Vec<String> {
        ["energy", "maxwell", "local_bound", "lorentz"]
            .map(String::from)
            .to_vec()
    }
    pub fn energy_tol() -> f64 {
        1e-7
    }
    pub fn snapshot_every() -> usize {
        10
    }
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("all fields have defaults")
    }
}

/// Checks a run can evaluate.
pub const RUN_CHECKS: &[&str] = &["energy", "maxwell", "local_bound", "lorentz", "duhamel"];

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        crate::spectral::FourierGrid::new(self.grid)?;
        self.stepper.validate()?;
        match self.model {
            ModelKind::Perturbation => self.params.validate_perturbation()?,
            ModelKind::Normal => self.params.validate()?,
            ModelKind::EulerRiesz => self.params.validate_euler_riesz()?,
        }
        for c in &self.checks {
            if !RUN_CHECKS.contains(&c.as_str()) {
                return Err(Error::UnknownCheck(c.clone()));
            }
        }
        if let Some(s) = &self.sweep {
            if s.n_scales.is_empty() {
                return Err(Error::Config("sweep.n_scales must not be empty".into()));
            }
        }
        if let Some(l) = &self.limit {
            if l.c_values.is_empty() || l.c_values.iter().any(|&c| !(c > 0.0)) {
                return Err(Error::Config(
                    "limit.c_values must be a non-empty list of positive speeds".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn has_check(&self, name: &str) -> bool {
        self.checks.iter().any(|c| c == name)
    }

    /// Default configuration on the ill-posedness datum with `N` scales.
    pub fn illposed(n_scales: usize, grid: usize) -> Self {
        Self {
            grid,
            datum: DatumSpec::Illposed {
                n_scales,
                lambda: defaults::lambda(),
                epsilon: None,
                background: Background::Unit,
            },
            ..Self::default()
        }
    }
}
