//! Generic integration drivers for autonomous systems with a monitored
//! conserved quantity.
//!
//! Both drivers enforce the relative energy-drift contract by refining the
//! discretization (halving the step, or tightening the error tolerances for
//! the adaptive scheme) and re-running until the drift passes or the
//! refinement budget is exhausted.

use crate::dynamics::state::{IntegratorConfig, IntegratorStats, Scheme};
use crate::error::{GeoqError, Result};

pub trait OdeSystem {
    fn dim(&self) -> usize;
    /// Right-hand side of `ẏ = f(y)`.
    fn eval(&self, y: &[f64], dy: &mut [f64]) -> Result<()>;
    /// Conserved quantity monitored for the drift contract.
    fn energy(&self, y: &[f64]) -> Result<f64>;
}

#[derive(Debug)]
pub struct OdeOutput {
    pub times: Vec<f64>,
    pub samples: Vec<Vec<f64>>,
    pub energies: Vec<f64>,
    pub stats: IntegratorStats,
}

const MIN_STEP_FRACTION: f64 = 1e-14;
const MAX_FIXED_POINT_ITERS: usize = 200;

/// Integrate over `[0, t_final]` with the configured scheme, refining until
/// the energy contract holds.
pub fn integrate(
    sys: &dyn OdeSystem,
    y0: &[f64],
    t_final: f64,
    base_step: f64,
    cfg: &IntegratorConfig,
) -> Result<OdeOutput> {
    if !(t_final > 0.0) {
        return Err(GeoqError::Precondition(
            "integration horizon must be positive".into(),
        ));
    }
    let mut refinement = 0u32;
    loop {
        let attempt = match cfg.scheme {
            Scheme::ImplicitMidpoint => {
                let step = base_step / f64::powi(2.0, refinement as i32);
                if step < MIN_STEP_FRACTION * t_final {
                    return Err(GeoqError::StepUnderflow {
                        step,
                        refinements: refinement,
                    });
                }
                run_midpoint(sys, y0, t_final, step, cfg)
            }
            Scheme::ExplicitRk54 => {
                let scale = f64::powi(10.0, refinement as i32);
                let tol = (1e-9 / scale).max(1e-14);
                run_rk54(sys, y0, t_final, base_step, tol, cfg)
            }
        }?;
        if attempt.stats.energy_drift <= cfg.energy_tol {
            let mut out = attempt;
            out.stats.refinements = refinement;
            return Ok(out);
        }
        refinement += 1;
        if refinement > cfg.max_refinements {
            return Err(GeoqError::EnergyToleranceNotMet {
                drift: attempt.stats.energy_drift,
                tol: cfg.energy_tol,
            });
        }
    }
}

fn sample_stride(total_steps: u64, target_samples: usize) -> u64 {
    (total_steps / target_samples.max(2) as u64).max(1)
}

fn run_midpoint(
    sys: &dyn OdeSystem,
    y0: &[f64],
    t_final: f64,
    step: f64,
    cfg: &IntegratorConfig,
) -> Result<OdeOutput> {
    let n_steps = (t_final / step).ceil() as u64;
    if n_steps > cfg.max_steps {
        return Err(GeoqError::MaxStepsExceeded {
            max_steps: cfg.max_steps,
        });
    }
    let dt = t_final / n_steps as f64;
    let stride = sample_stride(n_steps, cfg.target_samples);
    let dim = sys.dim();

    let mut y = y0.to_vec();
    let mut mid = vec![0.0; dim];
    let mut next_mid = vec![0.0; dim];
    let mut f = vec![0.0; dim];

    let mut times = Vec::new();
    let mut samples = Vec::new();
    let mut energies = Vec::new();
    let e0 = sys.energy(&y)?;
    let mut drift = 0.0f64;
    let mut push_sample = |t: f64, y: &[f64], e: f64, drift: &mut f64| {
        *drift = (*drift).max((e - e0).abs() / e0.abs().max(1.0));
        times.push(t);
        samples.push(y.to_vec());
        energies.push(e);
    };
    push_sample(0.0, &y, e0, &mut drift);

    for k in 0..n_steps {
        // Solve y_mid = y + (dt/2) f(y_mid) by fixed-point iteration, then
        // y_next = 2 y_mid − y.
        sys.eval(&y, &mut f)?;
        for i in 0..dim {
            mid[i] = y[i] + 0.5 * dt * f[i];
        }
        let mut converged = false;
        for _ in 0..MAX_FIXED_POINT_ITERS {
            sys.eval(&mid, &mut f)?;
            let mut delta = 0.0f64;
            for i in 0..dim {
                next_mid[i] = y[i] + 0.5 * dt * f[i];
                delta = delta.max((next_mid[i] - mid[i]).abs());
            }
            std::mem::swap(&mut mid, &mut next_mid);
            if delta <= cfg.fixed_point_tol {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(GeoqError::FixedPointDivergence {
                t: k as f64 * dt,
                max_iters: MAX_FIXED_POINT_ITERS,
            });
        }
        for i in 0..dim {
            y[i] = 2.0 * mid[i] - y[i];
        }
        if !y.iter().all(|v| v.is_finite()) {
            return Err(GeoqError::NonFinite(format!(
                "state at t = {:.6}",
                (k + 1) as f64 * dt
            )));
        }
        if (k + 1) % stride == 0 || k + 1 == n_steps {
            let t = (k + 1) as f64 * dt;
            let e = sys.energy(&y)?;
            push_sample(t, &y, e, &mut drift);
        }
    }

    Ok(OdeOutput {
        times,
        samples,
        energies,
        stats: IntegratorStats {
            steps: n_steps,
            rejected_steps: 0,
            energy_drift: drift,
            final_step: dt,
            refinements: 0,
        },
    })
}

// Dormand–Prince 5(4) coefficients.
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

fn run_rk54(
    sys: &dyn OdeSystem,
    y0: &[f64],
    t_final: f64,
    initial_step: f64,
    tol: f64,
    cfg: &IntegratorConfig,
) -> Result<OdeOutput> {
    let dim = sys.dim();
    let n_out = cfg.target_samples.max(2);
    let out_dt = t_final / (n_out - 1) as f64;

    let mut y = y0.to_vec();
    let mut t = 0.0f64;
    let mut dt = initial_step.min(out_dt);
    let mut k = vec![vec![0.0; dim]; 7];
    let mut y_stage = vec![0.0; dim];
    let mut y_next = vec![0.0; dim];

    let mut times = Vec::with_capacity(n_out);
    let mut samples = Vec::with_capacity(n_out);
    let mut energies = Vec::with_capacity(n_out);
    let e0 = sys.energy(&y)?;
    let mut drift = 0.0f64;
    times.push(0.0);
    samples.push(y.clone());
    energies.push(e0);

    let mut steps = 0u64;
    let mut rejected = 0u64;
    sys.eval(&y, &mut k[0])?;
    let mut fsal_valid = true;

    for out_idx in 1..n_out {
        let t_target = out_idx as f64 * out_dt;
        while t < t_target - 1e-14 * t_final {
            let h = dt.min(t_target - t);
            if h < MIN_STEP_FRACTION * t_final {
                return Err(GeoqError::StepUnderflow {
                    step: h,
                    refinements: 0,
                });
            }
            if steps + rejected > cfg.max_steps {
                return Err(GeoqError::MaxStepsExceeded {
                    max_steps: cfg.max_steps,
                });
            }
            if !fsal_valid {
                sys.eval(&y, &mut k[0])?;
                fsal_valid = true;
            }
            for stage in 1..7 {
                for i in 0..dim {
                    let mut acc = 0.0;
                    for (j, kj) in k.iter().enumerate().take(stage) {
                        let a = A[stage - 1][j];
                        if a != 0.0 {
                            acc += a * kj[i];
                        }
                    }
                    y_stage[i] = y[i] + h * acc;
                }
                let (head, tail) = k.split_at_mut(stage);
                let _ = head;
                sys.eval(&y_stage, &mut tail[0])?;
            }
            let mut err_norm = 0.0f64;
            for i in 0..dim {
                let mut y5 = y[i];
                let mut e = 0.0;
                for j in 0..7 {
                    y5 += h * B5[j] * k[j][i];
                    e += h * (B5[j] - B4[j]) * k[j][i];
                }
                y_next[i] = y5;
                let scale = tol * (1.0 + y[i].abs().max(y5.abs()));
                err_norm += (e / scale) * (e / scale);
            }
            err_norm = (err_norm / dim as f64).sqrt();
            if err_norm <= 1.0 {
                t += h;
                std::mem::swap(&mut y, &mut y_next);
                // FSAL: last stage of an accepted step is the first of the next.
                let (first, rest) = k.split_at_mut(1);
                first[0].copy_from_slice(&rest[5]);
                steps += 1;
            } else {
                rejected += 1;
                fsal_valid = false;
            }
            let factor = if err_norm > 0.0 {
                (0.9 * err_norm.powf(-0.2)).clamp(0.2, 5.0)
            } else {
                5.0
            };
            dt = (dt * factor).min(t_final);
        }
        t = t_target;
        let e = sys.energy(&y)?;
        drift = drift.max((e - e0).abs() / e0.abs().max(1.0));
        times.push(t);
        samples.push(y.clone());
        energies.push(e);
    }

    Ok(OdeOutput {
        times,
        samples,
        energies,
        stats: IntegratorStats {
            steps,
            rejected_steps: rejected,
            energy_drift: drift,
            final_step: dt,
            refinements: 0,
        },
    })
}
