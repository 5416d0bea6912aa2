//! Gauge potentials for the canonical two-form: one-forms θ with
//! `∂_i θ_j − ∂_j θ_i = ω_ij`, defined up to a total derivative.

use crate::error::Result;
use crate::phase_space::fields::ScalarField;
use crate::phase_space::symplectic::omega_matrix;
use nalgebra::DMatrix;
use std::sync::Arc;

type VectorFn = Arc<dyn Fn(&[f64], &mut [f64]) + Send + Sync>;
type JacobianFn = Arc<dyn Fn(&[f64]) -> DMatrix<f64> + Send + Sync>;

/// Base step for the finite-difference Jacobian fallback.
const JACOBIAN_FD_STEP: f64 = 1e-5;

#[derive(Clone)]
pub struct GaugePotential {
    dim: usize,
    label: String,
    eval: VectorFn,
    jacobian: Option<JacobianFn>,
}

impl std::fmt::Debug for GaugePotential {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GaugePotential")
            .field("dim", &self.dim)
            .field("label", &self.label)
            .field("analytic_jacobian", &self.jacobian.is_some())
            .finish()
    }
}

impl GaugePotential {
    pub fn custom(
        dim: usize,
        label: impl Into<String>,
        eval: impl Fn(&[f64], &mut [f64]) + Send + Sync + 'static,
    ) -> Self {
        Self {
            dim,
            label: label.into(),
            eval: Arc::new(eval),
            jacobian: None,
        }
    }

    pub fn custom_with_jacobian(
        dim: usize,
        label: impl Into<String>,
        eval: impl Fn(&[f64], &mut [f64]) + Send + Sync + 'static,
        jac: impl Fn(&[f64]) -> DMatrix<f64> + Send + Sync + 'static,
    ) -> Self {
        Self {
            dim,
            label: label.into(),
            eval: Arc::new(eval),
            jacobian: Some(Arc::new(jac)),
        }
    }

    /// Canonical gauge `θ = (0, …, 0, −q^1, …, −q^n)`.
    pub fn canonical(n: usize) -> Self {
        let dim = 2 * n;
        Self::custom_with_jacobian(
            dim,
            "canonical",
            move |xi, out| {
                for mu in 0..n {
                    out[mu] = 0.0;
                    out[n + mu] = -xi[mu];
                }
            },
            move |_| {
                // ∂_i θ_j: θ_{n+μ} = −q^μ gives ∂_μ θ_{n+μ} = −1.
                let mut j = DMatrix::zeros(dim, dim);
                for mu in 0..n {
                    j[(mu, n + mu)] = -1.0;
                }
                j
            },
        )
    }

    /// Symmetric gauge `θ_i = −½ ω_ij ξ^j`; for n = 1 this is `(p/2, −q/2)`.
    pub fn symmetric(n: usize) -> Self {
        let dim = 2 * n;
        Self::custom_with_jacobian(
            dim,
            "symmetric",
            move |xi, out| {
                for mu in 0..n {
                    out[mu] = 0.5 * xi[n + mu];
                    out[n + mu] = -0.5 * xi[mu];
                }
            },
            move |_| {
                let mut j = DMatrix::zeros(dim, dim);
                for mu in 0..n {
                    // ∂_{p_μ} θ_{q^μ} = 1/2, ∂_{q^μ} θ_{p_μ} = −1/2.
                    j[(n + mu, mu)] = 0.5;
                    j[(mu, n + mu)] = -0.5;
                }
                j
            },
        )
    }

    /// The zero one-form. Its curl is zero, not ω; used for field-free
    /// operator assembly, never as a symplectic potential.
    pub fn zero(n: usize) -> Self {
        Self::custom_with_jacobian(
            2 * n,
            "zero",
            |_, out| out.fill(0.0),
            move |_| DMatrix::zeros(2 * n, 2 * n),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eval_into(&self, xi: &[f64], out: &mut [f64]) {
        debug_assert_eq!(xi.len(), self.dim);
        debug_assert_eq!(out.len(), self.dim);
        (self.eval)(xi, out);
    }

    pub fn eval(&self, xi: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        self.eval_into(xi, &mut out);
        out
    }

    /// Jacobian `J[(i, j)] = ∂_i θ_j`, analytic when available, otherwise
    /// 4th-order central differences.
    pub fn jacobian(&self, xi: &[f64]) -> DMatrix<f64> {
        if let Some(jac) = &self.jacobian {
            return jac(xi);
        }
        self.fd_jacobian(xi)
    }

    fn fd_jacobian(&self, xi: &[f64]) -> DMatrix<f64> {
        let d = self.dim;
        let norm = xi.iter().map(|x| x * x).sum::<f64>().sqrt();
        let h = JACOBIAN_FD_STEP * norm.max(1.0);
        let mut j = DMatrix::zeros(d, d);
        let mut work = xi.to_vec();
        let mut th = vec![0.0; d];
        let sample = |i: usize, delta: f64, w: &mut Vec<f64>, out: &mut Vec<f64>| {
            let x0 = w[i];
            w[i] = x0 + delta;
            (self.eval)(w, out);
            w[i] = x0;
        };
        let mut p2 = vec![0.0; d];
        let mut p1 = vec![0.0; d];
        let mut m1 = vec![0.0; d];
        let mut m2 = vec![0.0; d];
        for i in 0..d {
            sample(i, 2.0 * h, &mut work, &mut th);
            p2.copy_from_slice(&th);
            sample(i, h, &mut work, &mut th);
            p1.copy_from_slice(&th);
            sample(i, -h, &mut work, &mut th);
            m1.copy_from_slice(&th);
            sample(i, -2.0 * h, &mut work, &mut th);
            m2.copy_from_slice(&th);
            for col in 0..d {
                j[(i, col)] = (-p2[col] + 8.0 * p1[col] - 8.0 * m1[col] + m2[col]) / (12.0 * h);
            }
        }
        j
    }

    /// Gauge transform `θ → θ + ∂χ`.
    ///
    /// The transformed Jacobian needs the Hessian of χ; it is obtained by
    /// differencing the gradient of χ, which is exact to round-off for the
    /// polynomial gauge functions used in practice.
    pub fn transform(&self, chi: &ScalarField) -> GaugePotential {
        let dim = self.dim;
        let base_eval = Arc::clone(&self.eval);
        let base = self.clone();
        let chi_eval = chi.clone();
        let chi_jac = chi.clone();
        let label = format!("{}+dchi", self.label);
        GaugePotential {
            dim,
            label: label.clone(),
            eval: Arc::new(move |xi: &[f64], out: &mut [f64]| {
                base_eval(xi, out);
                let grad = chi_eval
                    .gradient(xi)
                    .expect("gauge function gradient must be finite");
                for (o, g) in out.iter_mut().zip(grad.iter()) {
                    *o += g;
                }
            }),
            jacobian: Some(Arc::new(move |xi: &[f64]| {
                let mut j = base.jacobian(xi);
                let hess = hessian_of(&chi_jac, xi);
                j += hess;
                j
            })),
        }
    }
}

/// Hessian `∂_i ∂_j χ` by 4th-order differencing of the gradient.
fn hessian_of(chi: &ScalarField, xi: &[f64]) -> DMatrix<f64> {
    let d = chi.dim();
    let norm = xi.iter().map(|x| x * x).sum::<f64>().sqrt();
    let h = JACOBIAN_FD_STEP * norm.max(1.0);
    let mut out = DMatrix::zeros(d, d);
    let mut work = xi.to_vec();
    for i in 0..d {
        let x0 = work[i];
        let grad_at = |delta: f64, w: &mut Vec<f64>| -> Vec<f64> {
            w[i] = x0 + delta;
            let g = chi.gradient(w).expect("finite gradient");
            w[i] = x0;
            g
        };
        let p2 = grad_at(2.0 * h, &mut work);
        let p1 = grad_at(h, &mut work);
        let m1 = grad_at(-h, &mut work);
        let m2 = grad_at(-2.0 * h, &mut work);
        for j in 0..d {
            out[(i, j)] = (-p2[j] + 8.0 * p1[j] - 8.0 * m1[j] + m2[j]) / (12.0 * h);
        }
    }
    // Hessians are symmetric; averaging removes differencing noise.
    let t = out.transpose();
    (out + t) * 0.5
}

/// Report from checking the curl identity `∂_i θ_j − ∂_j θ_i = ω_ij`.
#[derive(Debug, Clone)]
pub struct GaugeCheck {
    pub max_residual: f64,
    pub worst_point: Vec<f64>,
    pub tolerance: f64,
}

impl GaugeCheck {
    pub fn passed(&self) -> bool {
        self.max_residual <= self.tolerance
    }
}

/// Maximum curl residual over the sample points. Exceeding the tolerance is
/// reported in the result, not raised as an error.
pub fn gauge_check(theta: &GaugePotential, points: &[Vec<f64>], tol: f64) -> Result<GaugeCheck> {
    if points.is_empty() {
        return Err(crate::error::GeoqError::Precondition(
            "gauge_check requires a nonempty sample set".into(),
        ));
    }
    let n = theta.dim() / 2;
    let omega = omega_matrix(n)?;
    let mut max_residual = 0.0_f64;
    let mut worst = points[0].clone();
    for xi in points {
        let jac = theta.jacobian(xi);
        let mut local = 0.0_f64;
        for i in 0..theta.dim() {
            for j in 0..theta.dim() {
                let curl = jac[(i, j)] - jac[(j, i)];
                local = local.max((curl - omega[(i, j)]).abs());
            }
        }
        if local > max_residual {
            max_residual = local;
            worst = xi.clone();
        }
    }
    Ok(GaugeCheck {
        max_residual,
        worst_point: worst,
        tolerance: tol,
    })
}
