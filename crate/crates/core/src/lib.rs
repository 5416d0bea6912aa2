//! Numerical laboratory for the guiding-center reduction of an extended
//! phase-space theory.
//!
//! The library has four parts:
//!
//! - [`phase_space`] — canonical symplectic structure, Poisson bracket,
//!   gauge potentials, the conformal metric `g_ij = h⁻¹δ_ij`, built-in
//!   Hamiltonian models and closed-surface flux integrality.
//! - [`dynamics`] — the extended system on the cotangent bundle of phase
//!   space, its guiding-center/fast-variable decomposition, deviation
//!   metrics against the reference Hamiltonian flow, and scaling studies
//!   over a grid of ℏ values.
//! - [`prequantum`] — discretized prequantization operators on phase-plane
//!   sections, canonical-commutator residuals and the vertical-polarization
//!   diagnostic.
//! - [`quantum`] — the magnetic Schrödinger operator of the quantized
//!   extended system on the phase plane, a deterministic sparse eigensolver,
//!   Landau-band analysis and the reduced 1D reference spectra.

pub mod dynamics;
pub mod error;
pub mod phase_space;
pub mod prequantum;
pub mod quantum;

pub use error::{GeoqError, Result};
