//! Scenario configuration: schema, validation and the built-in scenarios.

use geoq::dynamics::{IntegratorConfig, Scheme, StepSpec};
use geoq::phase_space::{GaugePotential, ModelKind, PhaseModel};
use geoq::quantum::{AssemblyGauge, GridSpec};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("config io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
    #[error("unknown built-in scenario `{0}`")]
    UnknownScenario(String),
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub id: String,
    #[serde(default = "default_c")]
    pub c: f64,
    #[serde(default)]
    pub lambda: f64,
}

fn default_c() -> f64 {
    1.0
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct IntegratorSection {
    #[serde(default = "default_scheme")]
    pub scheme: Scheme,
    /// "auto" or a positive number.
    #[serde(default = "default_step")]
    pub step: serde_json::Value,
    #[serde(default = "default_fp_tol")]
    pub fixed_point_tol: f64,
    #[serde(default = "default_max_steps")]
    pub max_steps: u64,
    #[serde(default = "default_energy_tol")]
    pub energy_tol: f64,
    #[serde(default = "default_samples")]
    pub target_samples: usize,
}

fn default_scheme() -> Scheme {
    Scheme::ImplicitMidpoint
}
fn default_step() -> serde_json::Value {
    serde_json::Value::String("auto".into())
}
fn default_fp_tol() -> f64 {
    1e-12
}
fn default_max_steps() -> u64 {
    200_000_000
}
fn default_energy_tol() -> f64 {
    1e-6
}
fn default_samples() -> usize {
    4096
}

impl Default for IntegratorSection {
    fn default() -> Self {
        Self {
            scheme: default_scheme(),
            step: default_step(),
            fixed_point_tol: default_fp_tol(),
            max_steps: default_max_steps(),
            energy_tol: default_energy_tol(),
            target_samples: default_samples(),
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub half_width: f64,
    pub nodes: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: String,
    #[serde(default = "default_n")]
    pub n: usize,
    pub model: ModelConfig,
    #[serde(default)]
    pub hbar: Vec<f64>,
    #[serde(default = "default_t_final")]
    pub t_final: f64,
    /// Fast-action normalization J(0).
    #[serde(default = "default_j0")]
    pub j0: f64,
    /// Initial guiding center (length 2n).
    #[serde(default)]
    pub center0: Vec<f64>,
    #[serde(default)]
    pub integrator: IntegratorSection,
    #[serde(default)]
    pub grid: Option<GridSection>,
    /// Eigenpair budget; 0 means choose from the band arithmetic.
    #[serde(default)]
    pub eigenpairs: usize,
    #[serde(default = "default_gauge")]
    pub gauge: AssemblyGauge,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

fn default_n() -> usize {
    1
}
fn default_t_final() -> f64 {
    5.0
}
fn default_j0() -> f64 {
    1.0
}
fn default_gauge() -> AssemblyGauge {
    AssemblyGauge::Symmetric
}
fn default_seed() -> u64 {
    42
}

impl ScenarioConfig {
    pub fn from_path(path: &std::path::Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)?;
        let cfg: ScenarioConfig = serde_json::from_str(&text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Built-in scenarios by id.
    pub fn builtin(id: &str) -> Result<Self, ConfigError> {
        let cfg = match id {
            // Homogeneous field: the guiding center is frozen.
            "freeze-flat" => ScenarioConfig {
                scenario: id.into(),
                n: 1,
                model: ModelConfig {
                    id: "constant".into(),
                    c: 1.0,
                    lambda: 0.0,
                },
                hbar: vec![0.05],
                // 100 cyclotron periods of 2πℏ/h.
                t_final: 100.0 * 2.0 * std::f64::consts::PI * 0.05,
                j0: 1.0,
                center0: vec![0.3, -0.2],
                integrator: IntegratorSection::default(),
                grid: None,
                eigenpairs: 0,
                gauge: AssemblyGauge::Symmetric,
                seed: 42,
            },
            // Anharmonic reduction scan over a decade of hbar.
            "quartic-scan" => ScenarioConfig {
                scenario: id.into(),
                n: 1,
                model: ModelConfig {
                    id: "quartic".into(),
                    c: 1.0,
                    lambda: 0.08,
                },
                hbar: vec![0.1, 0.05, 0.02, 0.01],
                t_final: 5.0,
                j0: 1.0,
                center0: vec![0.4, 0.0],
                integrator: IntegratorSection::default(),
                grid: None,
                eigenpairs: 0,
                gauge: AssemblyGauge::Symmetric,
                seed: 42,
            },
            // Flat Landau levels at two hbar values.
            "landau-flat" => ScenarioConfig {
                scenario: id.into(),
                n: 1,
                model: ModelConfig {
                    id: "constant".into(),
                    c: 1.0,
                    lambda: 0.0,
                },
                hbar: vec![0.1, 0.05],
                t_final: 5.0,
                j0: 1.0,
                center0: vec![0.0, 0.0],
                integrator: IntegratorSection::default(),
                grid: Some(GridSection {
                    half_width: 1.4,
                    nodes: 192,
                }),
                eigenpairs: 0,
                gauge: AssemblyGauge::Symmetric,
                seed: 42,
            },
            // Confining model: band ladders, splittings and the gap.
            "shifted-harmonic" => ScenarioConfig {
                scenario: id.into(),
                n: 1,
                model: ModelConfig {
                    id: "shifted-harmonic".into(),
                    c: 1.0,
                    lambda: 0.0,
                },
                hbar: vec![0.1, 0.05],
                t_final: 5.0,
                j0: 1.0,
                center0: vec![0.0, 0.0],
                integrator: IntegratorSection::default(),
                grid: Some(GridSection {
                    half_width: 6.0,
                    nodes: 256,
                }),
                eigenpairs: 0,
                gauge: AssemblyGauge::Symmetric,
                seed: 42,
            },
            // Kinematical validations.
            "checks-default" => ScenarioConfig {
                scenario: id.into(),
                n: 1,
                model: ModelConfig {
                    id: "shifted-harmonic".into(),
                    c: 1.0,
                    lambda: 0.0,
                },
                hbar: vec![0.1],
                t_final: 1.0,
                j0: 1.0,
                center0: vec![0.0, 0.0],
                integrator: IntegratorSection::default(),
                grid: None,
                eigenpairs: 0,
                gauge: AssemblyGauge::Symmetric,
                seed: 42,
            },
            other => return Err(ConfigError::UnknownScenario(other.into())),
        };
        cfg.validate().expect("built-in scenarios are valid");
        Ok(cfg)
    }

    pub fn builtin_ids() -> &'static [&'static str] {
        &[
            "freeze-flat",
            "quartic-scan",
            "landau-flat",
            "shifted-harmonic",
            "checks-default",
        ]
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.n == 0 {
            return Err(ConfigError::Invalid("n must be at least 1".into()));
        }
        match self.model.id.as_str() {
            "constant" | "shifted-harmonic" | "quartic" => {}
            other => {
                return Err(ConfigError::Invalid(format!(
                    "unknown model id `{other}` (expected constant | shifted-harmonic | quartic)"
                )))
            }
        }
        if !(self.model.c > 0.0) {
            return Err(ConfigError::Invalid("model.c must be positive".into()));
        }
        if self.model.lambda < 0.0 {
            return Err(ConfigError::Invalid(
                "model.lambda must be nonnegative".into(),
            ));
        }
        if self.hbar.is_empty() {
            return Err(ConfigError::Invalid("hbar list must be nonempty".into()));
        }
        if self.hbar.iter().any(|&h| !(h > 0.0)) {
            return Err(ConfigError::Invalid("hbar values must be positive".into()));
        }
        if self.hbar.windows(2).any(|w| w[1] >= w[0]) {
            return Err(ConfigError::Invalid(
                "hbar list must be strictly decreasing".into(),
            ));
        }
        if !(self.t_final > 0.0) {
            return Err(ConfigError::Invalid("t_final must be positive".into()));
        }
        if !(self.j0 > 0.0) {
            return Err(ConfigError::Invalid("j0 must be positive".into()));
        }
        if !self.center0.is_empty() && self.center0.len() != 2 * self.n {
            return Err(ConfigError::Invalid(format!(
                "center0 must have 2n = {} components",
                2 * self.n
            )));
        }
        match &self.integrator.step {
            serde_json::Value::String(s) if s == "auto" => {}
            serde_json::Value::Number(x) => {
                let v = x.as_f64().unwrap_or(-1.0);
                if !(v > 0.0) {
                    return Err(ConfigError::Invalid(
                        "integrator.step must be positive".into(),
                    ));
                }
            }
            _ => {
                return Err(ConfigError::Invalid(
                    "integrator.step must be \"auto\" or a positive number".into(),
                ))
            }
        }
        if let Some(grid) = &self.grid {
            if !(grid.half_width > 0.0) || grid.nodes < 8 {
                return Err(ConfigError::Invalid(
                    "grid.half_width must be positive and grid.nodes >= 8".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn model_kind(&self) -> ModelKind {
        match self.model.id.as_str() {
            "constant" => ModelKind::Constant { c: self.model.c },
            "shifted-harmonic" => ModelKind::ShiftedHarmonic { c: self.model.c },
            "quartic" => ModelKind::Quartic {
                c: self.model.c,
                lambda: self.model.lambda,
            },
            _ => unreachable!("validated"),
        }
    }

    pub fn phase_model(&self) -> Result<PhaseModel, ConfigError> {
        PhaseModel::builtin(self.n, self.model_kind())
            .map_err(|e| ConfigError::Invalid(e.to_string()))
    }

    /// Model with the configured assembly gauge mirrored onto the classical
    /// potential (used by trajectory runs).
    pub fn phase_model_with_gauge(&self) -> Result<PhaseModel, ConfigError> {
        let model = self.phase_model()?;
        let gauge = match self.gauge {
            AssemblyGauge::Symmetric => GaugePotential::symmetric(self.n),
            AssemblyGauge::Landau | AssemblyGauge::ZeroField => GaugePotential::canonical(self.n),
        };
        model
            .with_gauge(gauge)
            .map_err(|e| ConfigError::Invalid(e.to_string()))
    }

    pub fn integrator_config(&self) -> IntegratorConfig {
        let step = match &self.integrator.step {
            serde_json::Value::Number(x) => StepSpec::Fixed(x.as_f64().unwrap()),
            _ => StepSpec::Auto,
        };
        IntegratorConfig {
            scheme: self.integrator.scheme,
            step,
            fixed_point_tol: self.integrator.fixed_point_tol,
            max_steps: self.integrator.max_steps,
            energy_tol: self.integrator.energy_tol,
            max_refinements: 14,
            target_samples: self.integrator.target_samples,
        }
    }

    pub fn grid_spec(&self) -> Result<GridSpec, ConfigError> {
        let grid = self.grid.ok_or_else(|| {
            ConfigError::Invalid("quantum runs need a `grid` section".into())
        })?;
        GridSpec::new(grid.half_width, grid.nodes).map_err(|e| ConfigError::Invalid(e.to_string()))
    }

    pub fn center(&self) -> Vec<f64> {
        if self.center0.is_empty() {
            vec![0.0; 2 * self.n]
        } else {
            self.center0.clone()
        }
    }
}
