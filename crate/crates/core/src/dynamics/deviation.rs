//! Sup-norm deviation diagnostics between the extended flow, its guiding
//! center, and the reference Hamiltonian flow.

use crate::dynamics::interp::resample;
use crate::dynamics::state::{ReferenceTrajectory, TrajectoryRecord};
use crate::error::{GeoqError, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DeviationMetrics {
    /// `sup_t |ξ(t) − ξ_ref(t)|`
    pub sup_xi_vs_ref: f64,
    /// `sup_t |X(t) − ξ_ref(t)|`
    pub sup_center_vs_ref: f64,
    /// `sup_t |ξ(t) − X(t)|`
    pub sup_xi_vs_center: f64,
    /// `sup_t |J(t) − J(0)| / J(0)` (absolute when J(0) = 0)
    pub action_drift: f64,
    /// `sup_t |X(t) − X(0)|`
    pub center_drift: f64,
}

fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Compare a trajectory record against a reference flow on the overlapping
/// time window, resampling the reference by cubic interpolation when the
/// grids differ.
pub fn deviation_metrics(
    traj: &TrajectoryRecord,
    reference: &ReferenceTrajectory,
) -> Result<DeviationMetrics> {
    if traj.is_empty() || reference.times.is_empty() {
        return Err(GeoqError::Precondition("empty trajectory".into()));
    }
    let t_lo = traj.times[0].max(reference.times[0]);
    let t_hi = traj
        .times
        .last()
        .unwrap()
        .min(*reference.times.last().unwrap());
    if t_hi <= t_lo {
        return Err(GeoqError::Precondition(
            "trajectories have no overlapping time window".into(),
        ));
    }

    let window: Vec<usize> = (0..traj.len())
        .filter(|&i| traj.times[i] >= t_lo - 1e-12 && traj.times[i] <= t_hi + 1e-12)
        .collect();
    if window.is_empty() {
        return Err(GeoqError::Precondition(
            "no samples in the overlap window".into(),
        ));
    }
    let target_times: Vec<f64> = window.iter().map(|&i| traj.times[i]).collect();

    let dim = traj.states[0].dim();
    let same_grid = reference.times.len() == target_times.len()
        && reference
            .times
            .iter()
            .zip(target_times.iter())
            .all(|(a, b)| (a - b).abs() <= 1e-12 * (1.0 + a.abs()));
    let ref_on_grid: Vec<Vec<f64>> = if same_grid {
        reference.positions.clone()
    } else {
        let mut columns = Vec::with_capacity(dim);
        for c in 0..dim {
            columns.push(resample(
                &reference.times,
                reference.positions.iter().map(|p| p[c]),
                &target_times,
            )?);
        }
        (0..target_times.len())
            .map(|k| columns.iter().map(|col| col[k]).collect())
            .collect()
    };

    let j0 = traj.guiding[window[0]].action;
    let x0 = traj.guiding[window[0]].center.clone();
    let mut m = DeviationMetrics {
        sup_xi_vs_ref: 0.0,
        sup_center_vs_ref: 0.0,
        sup_xi_vs_center: 0.0,
        action_drift: 0.0,
        center_drift: 0.0,
    };
    for (k, &i) in window.iter().enumerate() {
        let xi = &traj.states[i].xi;
        let g = &traj.guiding[i];
        let r = &ref_on_grid[k];
        m.sup_xi_vs_ref = m.sup_xi_vs_ref.max(euclidean(xi, r));
        m.sup_center_vs_ref = m.sup_center_vs_ref.max(euclidean(&g.center, r));
        m.sup_xi_vs_center = m.sup_xi_vs_center.max(euclidean(xi, &g.center));
        let dj = (g.action - j0).abs();
        m.action_drift = m.action_drift.max(if j0 > 0.0 { dj / j0 } else { dj });
        m.center_drift = m.center_drift.max(euclidean(&g.center, &x0));
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::extended::{integrate_extended, reference_flow};
    use crate::dynamics::guiding::{from_guiding, unit_action_momenta};
    use crate::dynamics::state::IntegratorConfig;
    use crate::phase_space::models::{ModelKind, PhaseModel};

    #[test]
    fn identical_inputs_have_zero_position_deviation() {
        let model = PhaseModel::builtin(1, ModelKind::ShiftedHarmonic { c: 1.0 }).unwrap();
        let cfg = IntegratorConfig::default();
        let reference = reference_flow(&[1.0, 0.0], 2.0, &model, &cfg).unwrap();
        // Wrap the reference itself as a trajectory with X = ξ and J = 0.
        let traj = TrajectoryRecord {
            times: reference.times.clone(),
            states: reference
                .positions
                .iter()
                .zip(reference.times.iter())
                .map(|(p, t)| crate::dynamics::state::ExtendedState {
                    xi: p.clone(),
                    p: vec![0.0; 2],
                    t: *t,
                })
                .collect(),
            guiding: reference
                .positions
                .iter()
                .map(|p| crate::dynamics::state::GuidingDecomposition {
                    center: p.clone(),
                    momenta: vec![0.0; 2],
                    action: 0.0,
                })
                .collect(),
            energy: vec![1.0; reference.times.len()],
            stats: Default::default(),
        };
        let m = deviation_metrics(&traj, &reference).unwrap();
        assert_eq!(m.sup_xi_vs_ref, 0.0);
        assert_eq!(m.sup_center_vs_ref, 0.0);
        assert_eq!(m.sup_xi_vs_center, 0.0);
    }

    #[test]
    fn homogeneous_field_center_tracks_stationary_reference() {
        let model = PhaseModel::builtin(1, ModelKind::Constant { c: 1.0 }).unwrap();
        let hbar = 0.04;
        let x0 = [0.5, 0.5];
        let state0 = from_guiding(&x0, &unit_action_momenta(2), &model, hbar);
        let t_final = 20.0 * 2.0 * std::f64::consts::PI * hbar;
        let cfg = IntegratorConfig::default();
        let traj = integrate_extended(&state0, t_final, &model, hbar, &cfg).unwrap();
        let reference = reference_flow(&x0, t_final, &model, &cfg).unwrap();
        let m = deviation_metrics(&traj, &reference).unwrap();
        assert!(m.sup_center_vs_ref < 1e-6, "{}", m.sup_center_vs_ref);
        // The raw trajectory stays on the cyclotron circle of radius √(2ℏ).
        let expect = (2.0 * hbar).sqrt();
        assert!((m.sup_xi_vs_ref - expect).abs() < 0.05 * expect);
    }

    #[test]
    fn fast_circle_radius_matches_amplitude_law() {
        // |ξ − X| = √(2 J ℏ) holds sample by sample, and with J(0) = 1 the
        // sup stays near √(2ℏ); the fast action breathes by O(√ℏ) on an
        // anharmonic model, which sets the width of the band.
        let model = PhaseModel::builtin(1, ModelKind::ShiftedHarmonic { c: 1.0 }).unwrap();
        let hbar = 0.05;
        let state0 = from_guiding(&[1.0, 0.0], &unit_action_momenta(2), &model, hbar);
        let cfg = IntegratorConfig::default();
        let traj = integrate_extended(&state0, 5.0, &model, hbar, &cfg).unwrap();
        for (state, g) in traj.states.iter().zip(traj.guiding.iter()) {
            let r: f64 = state
                .xi
                .iter()
                .zip(g.center.iter())
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            let law = (2.0 * g.action * hbar).sqrt();
            assert!((r - law).abs() <= 1e-12 * law.max(1.0), "{r} vs {law}");
        }
        let reference = reference_flow(&[1.0, 0.0], 5.0, &model, &cfg).unwrap();
        let m = deviation_metrics(&traj, &reference).unwrap();
        let expect = (2.0 * hbar).sqrt();
        assert!(
            (m.sup_xi_vs_center - expect).abs() < 0.25 * expect,
            "{} vs {}",
            m.sup_xi_vs_center,
            expect
        );
    }

    #[test]
    fn disjoint_windows_are_rejected() {
        let model = PhaseModel::builtin(1, ModelKind::Constant { c: 1.0 }).unwrap();
        let cfg = IntegratorConfig::default();
        let reference = reference_flow(&[1.0, 0.0], 1.0, &model, &cfg).unwrap();
        let mut shifted = reference.clone();
        for t in &mut shifted.times {
            *t += 10.0;
        }
        let traj = TrajectoryRecord {
            times: reference.times.clone(),
            states: reference
                .positions
                .iter()
                .map(|p| crate::dynamics::state::ExtendedState {
                    xi: p.clone(),
                    p: vec![0.0; 2],
                    t: 0.0,
                })
                .collect(),
            guiding: reference
                .positions
                .iter()
                .map(|p| crate::dynamics::state::GuidingDecomposition {
                    center: p.clone(),
                    momenta: vec![0.0; 2],
                    action: 0.0,
                })
                .collect(),
            energy: vec![1.0; reference.times.len()],
            stats: Default::default(),
        };
        assert!(deviation_metrics(&traj, &shifted).is_err());
    }
}
