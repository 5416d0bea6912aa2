//! Quantization of the extended system on the phase plane (n = 1):
//! operator assembly, a deterministic sparse Hermitian eigensolver, band
//! analysis, and the reduced 1D reference spectra.

pub mod bands;
pub mod cg;
pub mod csr;
pub mod grid;
pub mod lanczos;
pub mod linalg;
pub mod operator;
pub mod oracle;

pub use bands::{band_analysis, gap_clusters, lowest_spectrum, BandGroup, BandReport, SpectrumResult};
pub use csr::CsrMatrix;
pub use grid::GridSpec;
pub use lanczos::{smallest_eigenpairs, EigenOptions, EigenResult};
pub use operator::{build_hamiltonian, build_weighted, AssemblyGauge, MagneticOperator, WeightMode};
pub use oracle::{
    compare_bands, effective_prediction, oracle_h_spectrum, BandComparison, OracleSpectrum,
};
