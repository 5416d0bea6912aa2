//! Scaling studies over a grid of ℏ values: how fast the extended flow
//! collapses onto the reference Hamiltonian flow.

use crate::dynamics::deviation::{deviation_metrics, DeviationMetrics};
use crate::dynamics::extended::{integrate_extended, reference_flow};
use crate::dynamics::guiding::{from_guiding, scan_momenta};
use crate::dynamics::state::{IntegratorConfig, IntegratorStats};
use crate::error::{GeoqError, Result};
use crate::phase_space::models::PhaseModel;
use serde::{Deserialize, Serialize};

/// Values below this floor are integrator noise, not signal; fits over them
/// are flagged degenerate.
const NOISE_FLOOR: f64 = 1e-8;

/// A classical scan scenario: the model and the initial guiding center.
/// Kinematical momenta are normalized to unit fast action (`|Π(0)| = √2`,
/// aligned with `∇h` at the center, see [`scan_momenta`]), so the guiding
/// center follows the reference flow at unit rate and deviations are
/// comparable across ℏ.
#[derive(Debug, Clone)]
pub struct ScanScenario {
    pub model: PhaseModel,
    pub center0: Vec<f64>,
    /// Fast-action normalization J(0); the default comparison uses 1.
    pub j0: f64,
    pub cfg: IntegratorConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScalingPoint {
    pub hbar: f64,
    pub metrics: DeviationMetrics,
    pub energy_drift: f64,
    pub stats: IntegratorStats,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ExponentFit {
    pub exponent: f64,
    pub intercept: f64,
    pub residual_rms: f64,
    pub degenerate: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScalingReport {
    pub points: Vec<ScalingPoint>,
    /// Fit of `sup|ξ − X|` against ℏ.
    pub fit_xi_vs_center: ExponentFit,
    /// Fit of `sup|X − ξ_ref|` against ℏ.
    pub fit_center_vs_ref: ExponentFit,
    /// Fit of the relative fast-action drift against ℏ.
    pub fit_action_drift: ExponentFit,
}

/// Least-squares fit of `log y = intercept + exponent · log x`.
///
/// Degenerate inputs (signal below the noise floor, or no spread in x) are
/// flagged rather than fitted.
pub fn fit_log_log(xs: &[f64], ys: &[f64]) -> Result<ExponentFit> {
    if xs.len() != ys.len() || xs.len() < 3 {
        return Err(GeoqError::Precondition(
            "log-log fit needs at least three points".into(),
        ));
    }
    let max_y = ys.iter().cloned().fold(0.0f64, f64::max);
    if max_y < NOISE_FLOOR || ys.iter().any(|&y| y <= 0.0) {
        return Ok(ExponentFit {
            exponent: 0.0,
            intercept: 0.0,
            residual_rms: 0.0,
            degenerate: true,
        });
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx < 1e-12 {
        return Ok(ExponentFit {
            exponent: 0.0,
            intercept: my,
            residual_rms: 0.0,
            degenerate: true,
        });
    }
    let sxy: f64 = lx
        .iter()
        .zip(ly.iter())
        .map(|(x, y)| (x - mx) * (y - my))
        .sum();
    let exponent = sxy / sxx;
    let intercept = my - exponent * mx;
    let residual_rms = (lx
        .iter()
        .zip(ly.iter())
        .map(|(x, y)| {
            let r = y - (intercept + exponent * x);
            r * r
        })
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(ExponentFit {
        exponent,
        intercept,
        residual_rms,
        degenerate: false,
    })
}

/// Run one scan point: extended flow at the given ℏ compared against the
/// shared reference flow started at the guiding center.
pub fn scan_point(
    scenario: &ScanScenario,
    reference: &crate::dynamics::state::ReferenceTrajectory,
    hbar: f64,
    t_final: f64,
) -> Result<ScalingPoint> {
    let mut momenta = scan_momenta(&scenario.model, &scenario.center0);
    let action_scale = scenario.j0.sqrt();
    for m in &mut momenta {
        *m *= action_scale;
    }
    let state0 = from_guiding(&scenario.center0, &momenta, &scenario.model, hbar);
    let traj = integrate_extended(&state0, t_final, &scenario.model, hbar, &scenario.cfg)?;
    let metrics = deviation_metrics(&traj, reference)?;
    Ok(ScalingPoint {
        hbar,
        metrics,
        energy_drift: traj.stats.energy_drift,
        stats: traj.stats,
    })
}

/// Scaling study over a strictly positive ℏ grid spanning at least a decade.
pub fn scaling_study(
    scenario: &ScanScenario,
    hbars: &[f64],
    t_final: f64,
) -> Result<ScalingReport> {
    validate_hbar_grid(hbars)?;
    let reference = reference_flow(&scenario.center0, t_final, &scenario.model, &scenario.cfg)?;
    let mut points = Vec::with_capacity(hbars.len());
    for &hbar in hbars {
        points.push(scan_point(scenario, &reference, hbar, t_final)?);
    }
    report_from_points(points)
}

/// Assemble the report (fits included) from already-computed points; used by
/// drivers that fan the points out over a thread pool.
pub fn report_from_points(mut points: Vec<ScalingPoint>) -> Result<ScalingReport> {
    points.sort_by(|a, b| b.hbar.partial_cmp(&a.hbar).unwrap());
    let xs: Vec<f64> = points.iter().map(|p| p.hbar).collect();
    let fit_xi_vs_center = fit_log_log(
        &xs,
        &points
            .iter()
            .map(|p| p.metrics.sup_xi_vs_center)
            .collect::<Vec<_>>(),
    )?;
    let fit_center_vs_ref = fit_log_log(
        &xs,
        &points
            .iter()
            .map(|p| p.metrics.sup_center_vs_ref)
            .collect::<Vec<_>>(),
    )?;
    let fit_action_drift = fit_log_log(
        &xs,
        &points
            .iter()
            .map(|p| p.metrics.action_drift)
            .collect::<Vec<_>>(),
    )?;
    Ok(ScalingReport {
        points,
        fit_xi_vs_center,
        fit_center_vs_ref,
        fit_action_drift,
    })
}

pub fn validate_hbar_grid(hbars: &[f64]) -> Result<()> {
    if hbars.len() < 3 {
        return Err(GeoqError::Precondition(
            "scaling study needs at least three hbar values".into(),
        ));
    }
    if hbars.iter().any(|&h| !(h > 0.0)) {
        return Err(GeoqError::Precondition("hbar values must be positive".into()));
    }
    let max = hbars.iter().cloned().fold(f64::MIN, f64::max);
    let min = hbars.iter().cloned().fold(f64::MAX, f64::min);
    if max / min < 10.0 * (1.0 - 1e-9) {
        return Err(GeoqError::Precondition(
            "hbar grid must span at least one decade".into(),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::state::IntegratorConfig;
    use crate::phase_space::models::{ModelKind, PhaseModel};

    #[test]
    fn fit_recovers_known_power_law() {
        let xs = [0.1, 0.05, 0.02, 0.01];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powf(0.5)).collect();
        let fit = fit_log_log(&xs, &ys).unwrap();
        assert!(!fit.degenerate);
        assert!((fit.exponent - 0.5).abs() < 1e-12);
        assert!((fit.intercept - 3.0f64.ln()).abs() < 1e-12);
        assert!(fit.residual_rms < 1e-13);
    }

    #[test]
    fn noise_floor_flags_degenerate() {
        let xs = [0.1, 0.05, 0.01];
        let ys = [1e-12, 2e-13, 5e-12];
        let fit = fit_log_log(&xs, &ys).unwrap();
        assert!(fit.degenerate);
    }

    #[test]
    fn grid_validation() {
        assert!(validate_hbar_grid(&[0.1, 0.05]).is_err());
        assert!(validate_hbar_grid(&[0.1, 0.05, 0.02]).is_err()); // only 5x span
        assert!(validate_hbar_grid(&[0.1, 0.05, 0.01]).is_ok());
        assert!(validate_hbar_grid(&[0.1, -0.05, 0.01]).is_err());
    }

    #[test]
    fn homogeneous_scan_is_degenerate_in_center_drift() {
        let scenario = ScanScenario {
            model: PhaseModel::builtin(1, ModelKind::Constant { c: 1.0 }).unwrap(),
            center0: vec![0.2, -0.4],
            j0: 1.0,
            cfg: IntegratorConfig::default(),
        };
        let report = scaling_study(&scenario, &[0.1, 0.05, 0.01], 1.0).unwrap();
        // X and ξ_ref are both constant: the fit over their distance is noise.
        assert!(report.fit_center_vs_ref.degenerate);
        // The fast-circle amplitude √(2ℏ) is real signal with exponent 1/2.
        assert!(!report.fit_xi_vs_center.degenerate);
        assert!((report.fit_xi_vs_center.exponent - 0.5).abs() < 0.02);
    }
}
