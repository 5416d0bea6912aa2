use crate::error::{GeoqError, Result};
use std::sync::Arc;

pub type EvalFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
pub type GradFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// Default base step for finite-difference gradients; scaled by `max(1, |ξ|)`.
pub const DEFAULT_FD_STEP: f64 = 1e-4;

/// A scalar function on phase space with a gradient, either analytic or
/// obtained from 4th-order central differences.
///
/// Fields are immutable after construction and safe to evaluate from many
/// threads.
#[derive(Clone)]
pub struct ScalarField {
    dim: usize,
    eval: EvalFn,
    grad: Option<GradFn>,
    fd_step: f64,
}

impl std::fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ScalarField")
            .field("dim", &self.dim)
            .field("analytic_gradient", &self.grad.is_some())
            .field("fd_step", &self.fd_step)
            .finish()
    }
}

impl ScalarField {
    /// A field with finite-difference gradient fallback.
    pub fn new(dim: usize, eval: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            dim,
            eval: Arc::new(eval),
            grad: None,
            fd_step: DEFAULT_FD_STEP,
        }
    }

    /// A field with an analytic gradient.
    pub fn with_gradient(
        dim: usize,
        eval: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
        grad: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        Self {
            dim,
            eval: Arc::new(eval),
            grad: Some(Arc::new(grad)),
            fd_step: DEFAULT_FD_STEP,
        }
    }

    /// Override the finite-difference base step.
    pub fn with_fd_step(mut self, step: f64) -> Self {
        self.fd_step = step;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn has_analytic_gradient(&self) -> bool {
        self.grad.is_some()
    }

    pub fn eval(&self, xi: &[f64]) -> f64 {
        debug_assert_eq!(xi.len(), self.dim);
        (self.eval)(xi)
    }

    /// Gradient at `xi`. Non-finite components are reported as evaluation
    /// failures rather than propagated silently.
    pub fn gradient(&self, xi: &[f64]) -> Result<Vec<f64>> {
        let g = match &self.grad {
            Some(grad) => grad(xi),
            None => self.fd_gradient(xi),
        };
        if g.len() != self.dim {
            return Err(GeoqError::InvalidDimension(format!(
                "gradient has {} components, expected {}",
                g.len(),
                self.dim
            )));
        }
        if g.iter().any(|x| !x.is_finite()) {
            return Err(GeoqError::NonFinite("gradient evaluation".into()));
        }
        Ok(g)
    }

    /// 4th-order central differences, step `fd_step · max(1, |ξ|)`.
    fn fd_gradient(&self, xi: &[f64]) -> Vec<f64> {
        let norm = xi.iter().map(|x| x * x).sum::<f64>().sqrt();
        let h = self.fd_step * norm.max(1.0);
        let mut work = xi.to_vec();
        let mut out = vec![0.0; self.dim];
        for i in 0..self.dim {
            let x0 = xi[i];
            let sample = |delta: f64, w: &mut Vec<f64>| -> f64 {
                w[i] = x0 + delta;
                let v = (self.eval)(w);
                w[i] = x0;
                v
            };
            let f_p2 = sample(2.0 * h, &mut work);
            let f_p1 = sample(h, &mut work);
            let f_m1 = sample(-h, &mut work);
            let f_m2 = sample(-2.0 * h, &mut work);
            out[i] = (-f_p2 + 8.0 * f_p1 - 8.0 * f_m1 + f_m2) / (12.0 * h);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fd_gradient_matches_analytic_quartic() {
        let f = ScalarField::new(2, |xi| xi[0].powi(4) + 0.5 * xi[1] * xi[1]);
        let xi = [1.3, -0.7];
        let g = f.gradient(&xi).unwrap();
        assert!((g[0] - 4.0 * 1.3f64.powi(3)).abs() < 1e-9);
        assert!((g[1] + 0.7).abs() < 1e-10);
    }

    #[test]
    fn non_finite_gradient_is_reported() {
        let f = ScalarField::with_gradient(1, |_| 0.0, |_| vec![f64::NAN]);
        assert!(matches!(
            f.gradient(&[0.0]),
            Err(GeoqError::NonFinite(_))
        ));
    }
}
