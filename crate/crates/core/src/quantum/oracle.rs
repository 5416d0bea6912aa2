//! Reference spectra for the reduced problem and the effective band
//! prediction built on them.
//!
//! For a mechanical-form Hamiltonian `h = c + ½p² + V(q)` the reduced,
//! vertically polarized problem is the 1D operator
//! `ĥ = c + ½(−iℏ d/dq)² + V(q)`. Its levels multiply `(k + ½)` to predict
//! the intra-band ladders of the full two-dimensional operator.

use crate::error::{GeoqError, Result};
use crate::phase_space::models::{ModelKind, PhaseModel};
use crate::quantum::bands::BandReport;
use crate::quantum::linalg::tridiagonal_smallest;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OracleSpectrum {
    pub values: Vec<f64>,
    /// Residual refinement error estimate of the grid solve (zero for the
    /// closed forms).
    pub refinement_error: f64,
}

/// The `m` lowest levels of the reduced 1D operator.
pub fn oracle_h_spectrum(model: &PhaseModel, hbar: f64, m: usize) -> Result<OracleSpectrum> {
    if m == 0 {
        return Err(GeoqError::Precondition("need at least one level".into()));
    }
    match model.hamiltonian().kind() {
        ModelKind::Constant { c } => Ok(OracleSpectrum {
            values: vec![c; m],
            refinement_error: 0.0,
        }),
        ModelKind::ShiftedHarmonic { c } => Ok(OracleSpectrum {
            values: (0..m).map(|k| c + hbar * (k as f64 + 0.5)).collect(),
            refinement_error: 0.0,
        }),
        ModelKind::Quartic { c, lambda } => {
            quartic_oracle(c, lambda, hbar, m)
        }
        ModelKind::Custom => Err(GeoqError::Precondition(
            "reference spectrum requires a mechanical-form built-in model".into(),
        )),
    }
}

/// 1D Dirichlet grid solve with Richardson extrapolation over grid
/// doubling until the estimate stabilizes.
fn quartic_oracle(c: f64, lambda: f64, hbar: f64, m: usize) -> Result<OracleSpectrum> {
    let half_width = 8.0f64;
    let potential = |q: f64| 0.5 * q * q + lambda * q.powi(4);
    let solve = |nodes: usize| -> Result<Vec<f64>> {
        let delta = 2.0 * half_width / (nodes + 1) as f64;
        let kinetic = hbar * hbar / (delta * delta);
        let d: Vec<f64> = (1..=nodes)
            .map(|i| {
                let q = -half_width + i as f64 * delta;
                c + kinetic + potential(q)
            })
            .collect();
        let e = vec![-0.5 * kinetic; nodes - 1];
        tridiagonal_smallest(&d, &e, m)
    };

    // Second-order scheme: pairs of grids give extrapolated values with
    // O(Δ⁴) error; refine until successive extrapolations agree.
    let extrapolate = |coarse: &[f64], fine: &[f64]| -> Vec<f64> {
        coarse
            .iter()
            .zip(fine.iter())
            .map(|(a, b)| b + (b - a) / 3.0)
            .collect()
    };
    let mut nodes = 600;
    let mut coarse = solve(nodes)?;
    let mut fine = solve(2 * nodes)?;
    let mut ext_prev = extrapolate(&coarse, &fine);
    for _ in 0..5 {
        nodes *= 2;
        coarse = fine;
        fine = solve(2 * nodes)?;
        let ext = extrapolate(&coarse, &fine);
        let err = ext_prev
            .iter()
            .zip(ext.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        if err < 1e-8 {
            return Ok(OracleSpectrum {
                values: ext,
                refinement_error: err,
            });
        }
        ext_prev = ext;
    }
    Err(GeoqError::Precondition(
        "1d reference spectrum did not stabilize under refinement".into(),
    ))
}

/// Predicted eigenvalues of fast band `k`: `(k + ½) · E^oracle_m`.
pub fn effective_prediction(oracle: &OracleSpectrum, k: usize) -> Vec<f64> {
    let factor = k as f64 + 0.5;
    oracle.values.iter().map(|e| factor * e).collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BandComparison {
    /// Relative errors of the lowest-band levels against the prediction.
    pub level_rel_err: Vec<f64>,
    /// Relative errors of the consecutive splittings.
    pub splitting_rel_err: Vec<f64>,
    /// Relative error of the inter-band gap, when both sides are available.
    pub gap_rel_err: Option<f64>,
    /// Lengths disagreed and the comparison was truncated.
    pub truncated: bool,
    pub level_tol: f64,
    pub splitting_tol: f64,
    pub gap_tol: f64,
    pub pass: bool,
}

/// Compare a measured band report against a predicted lowest-band ladder
/// and (optionally) a predicted inter-band gap.
pub fn compare_bands(
    report: &BandReport,
    predicted_levels: &[f64],
    predicted_gap: Option<f64>,
    level_tol: f64,
    splitting_tol: f64,
    gap_tol: f64,
) -> Result<BandComparison> {
    let lowest = report
        .bands
        .iter()
        .find(|b| b.k == 0)
        .ok_or_else(|| GeoqError::Precondition("report carries no lowest band".into()))?;
    if predicted_levels.is_empty() {
        return Err(GeoqError::Precondition("empty prediction".into()));
    }
    let n = lowest.eigenvalues.len().min(predicted_levels.len());
    let truncated = lowest.eigenvalues.len() != predicted_levels.len();
    let level_rel_err: Vec<f64> = (0..n)
        .map(|i| (lowest.eigenvalues[i] - predicted_levels[i]).abs() / predicted_levels[i].abs())
        .collect();
    let splitting_rel_err: Vec<f64> = (0..n.saturating_sub(1))
        .map(|i| {
            let measured = lowest.eigenvalues[i + 1] - lowest.eigenvalues[i];
            let predicted = predicted_levels[i + 1] - predicted_levels[i];
            (measured - predicted).abs() / predicted.abs()
        })
        .collect();
    let gap_rel_err = match (report.inter_band_gap, predicted_gap) {
        (Some(measured), Some(predicted)) if predicted != 0.0 => {
            Some((measured - predicted).abs() / predicted.abs())
        }
        _ => None,
    };
    let pass = level_rel_err.iter().all(|&e| e <= level_tol)
        && splitting_rel_err.iter().all(|&e| e <= splitting_tol)
        && gap_rel_err.map(|e| e <= gap_tol).unwrap_or(true);
    Ok(BandComparison {
        level_rel_err,
        splitting_rel_err,
        gap_rel_err,
        truncated,
        level_tol,
        splitting_tol,
        gap_tol,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase_space::models::PhaseModel;

    #[test]
    fn shifted_harmonic_ladder() {
        let model = PhaseModel::builtin(1, ModelKind::ShiftedHarmonic { c: 1.0 }).unwrap();
        let oracle = oracle_h_spectrum(&model, 0.05, 3).unwrap();
        let expect = [1.025, 1.075, 1.125];
        for (v, e) in oracle.values.iter().zip(expect.iter()) {
            assert!((v - e).abs() < 1e-14);
        }
    }

    #[test]
    fn small_hbar_limit_approaches_floor() {
        let model = PhaseModel::builtin(1, ModelKind::ShiftedHarmonic { c: 2.0 }).unwrap();
        let oracle = oracle_h_spectrum(&model, 1e-6, 1).unwrap();
        assert!((oracle.values[0] - 2.0).abs() < 1e-5);
    }

    #[test]
    fn quartic_oracle_consistent_with_harmonic_at_zero_coupling() {
        // λ = 0 reduces to the shifted harmonic ladder.
        let grid_model = PhaseModel::builtin(1, ModelKind::Quartic { c: 1.0, lambda: 0.0 }).unwrap();
        let oracle = oracle_h_spectrum(&grid_model, 0.1, 4).unwrap();
        for (k, v) in oracle.values.iter().enumerate() {
            let exact = 1.0 + 0.1 * (k as f64 + 0.5);
            assert!((v - exact).abs() < 1e-6, "k={k}: {v} vs {exact}");
        }
        assert!(oracle.refinement_error < 1e-8);
    }

    #[test]
    fn quartic_oracle_first_order_shift_small_coupling() {
        // Perturbation theory: ΔE₀ = 3λℏ²/4 for V += λq⁴.
        let lambda = 0.01;
        let hbar = 0.1;
        let model = PhaseModel::builtin(1, ModelKind::Quartic { c: 1.0, lambda }).unwrap();
        let oracle = oracle_h_spectrum(&model, hbar, 1).unwrap();
        let unperturbed = 1.0 + hbar * 0.5;
        let predicted_shift = 0.75 * lambda * hbar * hbar;
        let measured_shift = oracle.values[0] - unperturbed;
        assert!(
            (measured_shift - predicted_shift).abs() < 0.1 * predicted_shift,
            "shift {measured_shift} vs {predicted_shift}"
        );
    }

    #[test]
    fn prediction_scales_with_band_index() {
        let oracle = OracleSpectrum {
            values: vec![1.025, 1.075, 1.125],
            refinement_error: 0.0,
        };
        let k0 = effective_prediction(&oracle, 0);
        assert!((k0[0] - 0.5125).abs() < 1e-12);
        assert!((k0[1] - 0.5375).abs() < 1e-12);
        assert!((k0[2] - 0.5625).abs() < 1e-12);
        let k1 = effective_prediction(&oracle, 1);
        for (a, b) in k1.iter().zip(oracle.values.iter()) {
            assert!((a - 1.5 * b).abs() < 1e-12);
        }
    }

    #[test]
    fn flat_oracle_is_degenerate() {
        let model = PhaseModel::builtin(1, ModelKind::Constant { c: 1.0 }).unwrap();
        let oracle = oracle_h_spectrum(&model, 0.1, 4).unwrap();
        assert!(oracle.values.iter().all(|&v| v == 1.0));
        let band = effective_prediction(&oracle, 0);
        assert!(band.iter().all(|&v| (v - 0.5).abs() < 1e-15));
    }

    #[test]
    fn custom_model_rejected() {
        let field = crate::phase_space::fields::ScalarField::new(2, |xi| 1.0 + xi[0] * xi[0]);
        let h = crate::phase_space::models::HamiltonianField::custom(field, 1.0).unwrap();
        let chart = crate::phase_space::chart::CanonicalChart::new(1).unwrap();
        let model = PhaseModel::new(
            chart,
            h,
            crate::phase_space::gauge::GaugePotential::canonical(1),
        )
        .unwrap();
        assert!(oracle_h_spectrum(&model, 0.1, 2).is_err());
    }

    #[test]
    fn identical_inputs_compare_clean() {
        use crate::quantum::bands::{BandGroup, BandReport};
        let levels = vec![0.5125, 0.5375, 0.5625];
        let report = BandReport {
            labels: vec![0, 0, 0],
            fast_index: vec![0.5, 0.5, 0.5],
            bands: vec![BandGroup {
                k: 0,
                indices: vec![0, 1, 2],
                eigenvalues: levels.clone(),
            }],
            lowest_band_splittings: vec![0.025, 0.025],
            inter_band_gap: None,
            gap_to_max_splitting: None,
            gap_clusters: None,
        };
        let cmp = compare_bands(&report, &levels, None, 0.25, 0.25, 0.25).unwrap();
        assert!(cmp.pass);
        assert!(cmp.level_rel_err.iter().all(|&e| e == 0.0));
        assert!(cmp.splitting_rel_err.iter().all(|&e| e == 0.0));
        assert!(!cmp.truncated);
    }
}
