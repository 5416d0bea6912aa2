use serde::{Deserialize, Serialize};

/// A point of the extended system: phase-space position ξ together with the
/// canonical momenta conjugate to it on the cotangent bundle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtendedState {
    pub xi: Vec<f64>,
    pub p: Vec<f64>,
    pub t: f64,
}

impl ExtendedState {
    pub fn new(xi: Vec<f64>, p: Vec<f64>) -> Self {
        assert_eq!(xi.len(), p.len());
        Self { xi, p, t: 0.0 }
    }

    pub fn dim(&self) -> usize {
        self.xi.len()
    }
}

/// Split of an extended state into guiding center `X`, kinematical momenta
/// `Π` and the fast action `J = ½ Σ Π_i Π_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GuidingDecomposition {
    pub center: Vec<f64>,
    pub momenta: Vec<f64>,
    pub action: f64,
}

/// Integration scheme selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    /// One-step symmetric method; preserves quadratic invariants and carries
    /// no secular energy drift. The default.
    ImplicitMidpoint,
    /// Adaptive explicit Runge–Kutta 5(4) with step control.
    ExplicitRk54,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepSpec {
    /// Resolve the fast rotation: one fiftieth of the cyclotron-period
    /// estimate `2πℏ/h(ξ₀)` for the extended system.
    Auto,
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub scheme: Scheme,
    pub step: StepSpec,
    /// Absolute tolerance of the fixed-point inner iteration.
    pub fixed_point_tol: f64,
    pub max_steps: u64,
    /// Relative energy-drift contract per run; the step is refined until the
    /// drift passes or refinement is exhausted.
    pub energy_tol: f64,
    pub max_refinements: u32,
    /// Approximate number of stored samples.
    pub target_samples: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            scheme: Scheme::ImplicitMidpoint,
            step: StepSpec::Auto,
            fixed_point_tol: 1e-12,
            max_steps: 200_000_000,
            energy_tol: 1e-6,
            max_refinements: 14,
            target_samples: 4096,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
pub struct IntegratorStats {
    pub steps: u64,
    pub rejected_steps: u64,
    /// `max_t |H(t) − H(0)| / max(1, |H(0)|)` over stored samples.
    pub energy_drift: f64,
    pub final_step: f64,
    pub refinements: u32,
}

/// Time series of the extended flow with derived diagnostics.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    pub times: Vec<f64>,
    pub states: Vec<ExtendedState>,
    pub guiding: Vec<GuidingDecomposition>,
    pub energy: Vec<f64>,
    pub stats: IntegratorStats,
}

impl TrajectoryRecord {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Time series of the reference Hamiltonian flow on the base phase space.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReferenceTrajectory {
    pub times: Vec<f64>,
    pub positions: Vec<Vec<f64>>,
    pub stats: IntegratorStats,
}
