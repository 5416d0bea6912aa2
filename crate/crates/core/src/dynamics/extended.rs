//! The extended system on the cotangent bundle of phase space and its
//! reference counterpart, the plain Hamiltonian flow.
//!
//! With the conformal metric the extended Hamiltonian is
//!
//! ```text
//! H(ξ, p) = (1/2ℏ) g^{ij}(ξ) (p_i − θ_i)(p_j − θ_j) = h(ξ) · ½|Π|²,
//! ```
//!
//! whose canonical flow combines a fast rotation of the kinematical momenta
//! at frequency `h/ℏ` with a slow drift of the guiding center along the
//! reference flow `ξ̇ = ω̄ ∇h`.

use crate::dynamics::guiding::to_guiding;
use crate::dynamics::ode::{integrate, OdeOutput, OdeSystem};
use crate::dynamics::state::{
    ExtendedState, IntegratorConfig, ReferenceTrajectory, StepSpec, TrajectoryRecord,
};
use crate::error::{GeoqError, Result};
use crate::phase_space::models::PhaseModel;
use crate::phase_space::symplectic::omega_bar_apply;

/// Fraction of the cyclotron-period estimate used for the automatic step.
const AUTO_STEP_PERIODS: f64 = 50.0;
/// Default sample count for the automatic reference-flow step.
const REFERENCE_AUTO_STEPS: f64 = 5000.0;

/// Energy of the extended system, `(1/2ℏ) g^{ij} (p−θ)_i (p−θ)_j`.
pub fn extended_hamiltonian(state: &ExtendedState, model: &PhaseModel, hbar: f64) -> Result<f64> {
    let metric = model.metric();
    let (_, h_upper, _) = metric.factors(&state.xi)?;
    let mut theta = vec![0.0; state.dim()];
    model.gauge().eval_into(&state.xi, &mut theta);
    let u2: f64 = state
        .p
        .iter()
        .zip(theta.iter())
        .map(|(p, th)| (p - th) * (p - th))
        .sum();
    Ok(h_upper * u2 / (2.0 * hbar))
}

struct ExtendedSystem<'a> {
    model: &'a PhaseModel,
    hbar: f64,
}

impl OdeSystem for ExtendedSystem<'_> {
    fn dim(&self) -> usize {
        2 * self.model.dim()
    }

    fn eval(&self, y: &[f64], dy: &mut [f64]) -> Result<()> {
        let d = self.model.dim();
        let (xi, p) = y.split_at(d);
        let h = self.model.hamiltonian().eval_checked(xi)?;
        let grad_h = self.model.hamiltonian().gradient(xi)?;
        let mut theta = vec![0.0; d];
        self.model.gauge().eval_into(xi, &mut theta);
        let jac = self.model.gauge().jacobian(xi);
        let u: Vec<f64> = (0..d).map(|i| p[i] - theta[i]).collect();
        let u2: f64 = u.iter().map(|x| x * x).sum();
        let scale = h / self.hbar;
        for i in 0..d {
            dy[i] = scale * u[i];
            let mut coupling = 0.0;
            for j in 0..d {
                coupling += jac[(i, j)] * u[j];
            }
            dy[d + i] = -grad_h[i] * u2 / (2.0 * self.hbar) + scale * coupling;
        }
        Ok(())
    }

    fn energy(&self, y: &[f64]) -> Result<f64> {
        let d = self.model.dim();
        let state = ExtendedState {
            xi: y[..d].to_vec(),
            p: y[d..].to_vec(),
            t: 0.0,
        };
        extended_hamiltonian(&state, self.model, self.hbar)
    }
}

/// Integrate the extended flow over `[0, T]`.
pub fn integrate_extended(
    state0: &ExtendedState,
    t_final: f64,
    model: &PhaseModel,
    hbar: f64,
    cfg: &IntegratorConfig,
) -> Result<TrajectoryRecord> {
    if state0.dim() != model.dim() {
        return Err(GeoqError::InvalidDimension(
            "state dimension disagrees with model".into(),
        ));
    }
    if !(hbar > 0.0) {
        return Err(GeoqError::Precondition("hbar must be positive".into()));
    }
    let sys = ExtendedSystem { model, hbar };
    let base_step = match cfg.step {
        StepSpec::Fixed(s) => s,
        StepSpec::Auto => {
            let h0 = model.hamiltonian().eval_checked(&state0.xi)?;
            2.0 * std::f64::consts::PI * hbar / h0 / AUTO_STEP_PERIODS
        }
    };
    let mut y0 = state0.xi.clone();
    y0.extend_from_slice(&state0.p);
    let out = integrate(&sys, &y0, t_final, base_step, cfg)?;
    Ok(record_from_output(out, model, hbar))
}

fn record_from_output(out: OdeOutput, model: &PhaseModel, hbar: f64) -> TrajectoryRecord {
    let d = model.dim();
    let mut states = Vec::with_capacity(out.samples.len());
    let mut guiding = Vec::with_capacity(out.samples.len());
    for (t, y) in out.times.iter().zip(out.samples.iter()) {
        let state = ExtendedState {
            xi: y[..d].to_vec(),
            p: y[d..].to_vec(),
            t: *t,
        };
        guiding.push(to_guiding(&state, model, hbar));
        states.push(state);
    }
    TrajectoryRecord {
        times: out.times,
        states,
        guiding,
        energy: out.energies,
        stats: out.stats,
    }
}

struct ReferenceSystem<'a> {
    model: &'a PhaseModel,
}

impl OdeSystem for ReferenceSystem<'_> {
    fn dim(&self) -> usize {
        self.model.dim()
    }

    fn eval(&self, y: &[f64], dy: &mut [f64]) -> Result<()> {
        let grad = self.model.hamiltonian().gradient(y)?;
        omega_bar_apply(&grad, dy);
        Ok(())
    }

    fn energy(&self, y: &[f64]) -> Result<f64> {
        Ok(self.model.hamiltonian().eval(y))
    }
}

/// The reference Hamiltonian flow `ξ̇ = ω̄ ∇h` on the base phase space.
pub fn reference_flow(
    xi0: &[f64],
    t_final: f64,
    model: &PhaseModel,
    cfg: &IntegratorConfig,
) -> Result<ReferenceTrajectory> {
    if xi0.len() != model.dim() {
        return Err(GeoqError::InvalidDimension(
            "initial point dimension disagrees with model".into(),
        ));
    }
    let sys = ReferenceSystem { model };
    let base_step = match cfg.step {
        StepSpec::Fixed(s) => s,
        StepSpec::Auto => t_final / REFERENCE_AUTO_STEPS,
    };
    let out = integrate(&sys, xi0, t_final, base_step, cfg)?;
    Ok(ReferenceTrajectory {
        times: out.times,
        positions: out.samples,
        stats: out.stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::guiding::from_guiding;
    use crate::phase_space::models::{ModelKind, PhaseModel};

    #[test]
    fn hamiltonian_value_from_direct_arithmetic() {
        // h = 1 + ½(q²+p²) at ξ = (1, 0) is 1.5; with p − θ = (0, 0.2) and
        // ℏ = 0.1 the energy is 1.5 · 0.04 / 0.2 = 0.3.
        let model = PhaseModel::builtin(1, ModelKind::ShiftedHarmonic { c: 1.0 }).unwrap();
        let xi = vec![1.0, 0.0];
        let theta = model.gauge().eval(&xi);
        let p = vec![theta[0], theta[1] + 0.2];
        let state = ExtendedState::new(xi, p);
        let h = extended_hamiltonian(&state, &model, 0.1).unwrap();
        assert!((h - 0.3).abs() < 1e-14, "{h}");
    }

    #[test]
    fn zero_kinematical_momentum_gives_zero_energy() {
        let model = PhaseModel::builtin(1, ModelKind::Quartic { c: 1.0, lambda: 0.2 }).unwrap();
        let xi = vec![0.4, -1.1];
        let theta = model.gauge().eval(&xi);
        let state = ExtendedState::new(xi, theta);
        assert_eq!(extended_hamiltonian(&state, &model, 0.05).unwrap(), 0.0);
    }

    #[test]
    fn energy_equals_h_times_action() {
        // H = h(ξ)·J is exact under the conformal metric.
        let model = PhaseModel::builtin(2, ModelKind::Quartic { c: 1.0, lambda: 0.3 }).unwrap();
        let hbar = 0.07;
        let mut seed = 0x2545f4914f6cdd1d_u64;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            (seed >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        };
        for _ in 0..1000 {
            let xi: Vec<f64> = (0..4).map(|_| 2.0 * next()).collect();
            let p: Vec<f64> = (0..4).map(|_| 2.0 * next()).collect();
            let state = ExtendedState::new(xi, p);
            let h_ext = extended_hamiltonian(&state, &model, hbar).unwrap();
            let g = to_guiding(&state, &model, hbar);
            let h_val = model.hamiltonian().eval(&state.xi);
            assert!(
                (h_ext - h_val * g.action).abs() <= 1e-14 * h_ext.abs().max(1.0),
                "{h_ext} vs {}",
                h_val * g.action
            );
        }
    }

    #[test]
    fn homogeneous_field_orbit_is_circular_with_frozen_center() {
        let model = PhaseModel::builtin(1, ModelKind::Constant { c: 1.0 }).unwrap();
        let hbar = 0.05;
        let momenta = crate::dynamics::guiding::unit_action_momenta(2);
        let state0 = from_guiding(&[0.3, -0.2], &momenta, &model, hbar);
        // Ten cyclotron periods.
        let t_final = 10.0 * 2.0 * std::f64::consts::PI * hbar;
        let cfg = IntegratorConfig::default();
        let traj = integrate_extended(&state0, t_final, &model, hbar, &cfg).unwrap();

        let radius = hbar.sqrt() * (2.0f64).sqrt();
        for (state, g) in traj.states.iter().zip(traj.guiding.iter()) {
            let r: f64 = state
                .xi
                .iter()
                .zip(g.center.iter())
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            assert!((r - radius).abs() < 1e-9, "radius {r} vs {radius}");
            assert!((g.center[0] - 0.3).abs() < 1e-8);
            assert!((g.center[1] + 0.2).abs() < 1e-8);
        }
        assert!(traj.stats.energy_drift < 1e-10);
    }

    #[test]
    fn reference_flow_constant_h_is_stationary() {
        let model = PhaseModel::builtin(1, ModelKind::Constant { c: 2.0 }).unwrap();
        let cfg = IntegratorConfig::default();
        let traj = reference_flow(&[1.0, -1.0], 3.0, &model, &cfg).unwrap();
        for pos in &traj.positions {
            assert_eq!(pos[0], 1.0);
            assert_eq!(pos[1], -1.0);
        }
    }

    #[test]
    fn reference_flow_quarter_turn() {
        // The flow of the (shifted) harmonic Hamiltonian is a clockwise
        // rotation: (1, 0) reaches (0, −1) at t = π/2; the shift c does not
        // enter the gradient.
        let model = PhaseModel::builtin(1, ModelKind::ShiftedHarmonic { c: 1.0 }).unwrap();
        let cfg = IntegratorConfig::default();
        let traj = reference_flow(
            &[1.0, 0.0],
            std::f64::consts::FRAC_PI_2,
            &model,
            &cfg,
        )
        .unwrap();
        let last = traj.positions.last().unwrap();
        assert!(last[0].abs() < 1e-6);
        assert!((last[1] + 1.0).abs() < 1e-6);
    }

    #[test]
    fn reference_self_convergence_on_quartic() {
        let model = PhaseModel::builtin(1, ModelKind::Quartic { c: 1.0, lambda: 0.4 }).unwrap();
        let coarse_cfg = IntegratorConfig {
            step: StepSpec::Fixed(8e-5),
            energy_tol: 1e-5,
            ..Default::default()
        };
        let fine_cfg = IntegratorConfig {
            step: StepSpec::Fixed(4e-5),
            energy_tol: 1e-5,
            ..Default::default()
        };
        let a = reference_flow(&[1.0, 0.0], 3.0, &model, &coarse_cfg).unwrap();
        let b = reference_flow(&[1.0, 0.0], 3.0, &model, &fine_cfg).unwrap();
        let ea = a.positions.last().unwrap();
        let eb = b.positions.last().unwrap();
        let diff = ((ea[0] - eb[0]).powi(2) + (ea[1] - eb[1]).powi(2)).sqrt();
        assert!(diff < 1e-8, "half-step disagreement {diff}");
    }
}
