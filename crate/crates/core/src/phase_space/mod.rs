//! Symplectic-geometry primitives: the canonical two-form and its inverse,
//! the Poisson bracket, gauge potentials, the conformal metric, built-in
//! Hamiltonian models, and the flux-integrality utility.

pub mod chart;
pub mod fields;
pub mod flux;
pub mod gauge;
pub mod metric;
pub mod models;
pub mod symplectic;

pub use chart::CanonicalChart;
pub use fields::ScalarField;
pub use flux::{kostant_flux, kostant_flux_converged, FluxResult, SurfaceCell, SurfaceMesh};
pub use gauge::{gauge_check, GaugeCheck, GaugePotential};
pub use metric::{ConformalMetric, MetricEval};
pub use models::{HamiltonianField, ModelKind, PhaseModel};
pub use symplectic::{
    hamiltonian_vector_field, jacobi_residual, omega_apply, omega_bar, omega_bar_apply,
    omega_bar_contract, omega_matrix, poisson_bracket,
};
