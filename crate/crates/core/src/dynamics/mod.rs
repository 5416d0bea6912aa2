//! Dynamics of the extended system on the cotangent bundle of phase space:
//! integration, guiding-center decomposition, deviation metrics against the
//! reference Hamiltonian flow, and ℏ-scaling studies.

pub mod deviation;
pub mod extended;
pub mod guiding;
pub mod interp;
pub mod ode;
pub mod scaling;
pub mod state;

pub use deviation::{deviation_metrics, DeviationMetrics};
pub use extended::{extended_hamiltonian, integrate_extended, reference_flow};
pub use guiding::{from_guiding, scan_momenta, to_guiding, unit_action_momenta};
pub use interp::CubicSpline;
pub use scaling::{
    fit_log_log, report_from_points, scaling_study, scan_point, ExponentFit, ScalingPoint,
    ScalingReport, ScanScenario,
};
pub use state::{
    ExtendedState, GuidingDecomposition, IntegratorConfig, IntegratorStats, ReferenceTrajectory,
    Scheme, StepSpec, TrajectoryRecord,
};
