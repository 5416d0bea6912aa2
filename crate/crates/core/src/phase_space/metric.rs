//! The conformal metric `g_ij = h⁻¹ δ_ij`, the representative chosen so that
//! `det g = h^{-2n}` holds in every canonical chart and the kinetic form of
//! the extended Hamiltonian collapses to `h · ½ΣΠΠ` without any auxiliary
//! transformation.

use crate::error::Result;
use crate::phase_space::chart::CanonicalChart;
use crate::phase_space::models::HamiltonianField;
use nalgebra::DMatrix;

#[derive(Debug, Clone)]
pub struct ConformalMetric {
    chart: CanonicalChart,
    hamiltonian: HamiltonianField,
}

/// Metric data at a point: covariant and contravariant tensors plus the
/// determinant of the covariant form.
#[derive(Debug, Clone)]
pub struct MetricEval {
    pub lower: DMatrix<f64>,
    pub upper: DMatrix<f64>,
    pub det: f64,
}

impl ConformalMetric {
    pub fn new(chart: CanonicalChart, hamiltonian: HamiltonianField) -> Self {
        Self { chart, hamiltonian }
    }

    pub fn chart(&self) -> CanonicalChart {
        self.chart
    }

    /// Scalar factors without materializing matrices:
    /// `(h⁻¹, h, h^{-2n})` at `xi`. Errors if h dips below its floor.
    pub fn factors(&self, xi: &[f64]) -> Result<(f64, f64, f64)> {
        let h = self.hamiltonian.eval_checked(xi)?;
        let n = self.chart.dof() as i32;
        Ok((1.0 / h, h, h.powi(-2 * n)))
    }

    pub fn eval(&self, xi: &[f64]) -> Result<MetricEval> {
        let (inv_h, h, det) = self.factors(xi)?;
        let d = self.chart.dim();
        Ok(MetricEval {
            lower: DMatrix::identity(d, d) * inv_h,
            upper: DMatrix::identity(d, d) * h,
            det,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase_space::models::{ModelKind, PhaseModel};
    use nalgebra::DMatrix;

    #[test]
    fn unit_hamiltonian_gives_identity_metric() {
        let model = PhaseModel::builtin(2, ModelKind::Constant { c: 1.0 }).unwrap();
        let m = model.metric().eval(&[0.3, -0.4, 1.0, 0.0]).unwrap();
        let id = DMatrix::<f64>::identity(4, 4);
        assert_eq!((m.lower.clone() - &id).amax(), 0.0);
        assert_eq!((m.upper.clone() - &id).amax(), 0.0);
        assert_eq!(m.det, 1.0);
    }

    #[test]
    fn constant_two_has_quarter_determinant_n1() {
        let model = PhaseModel::builtin(1, ModelKind::Constant { c: 2.0 }).unwrap();
        let m = model.metric().eval(&[0.0, 0.0]).unwrap();
        assert!((m.det - 0.25).abs() < 1e-15);
    }

    #[test]
    fn determinant_condition_holds_for_quartic() {
        let model = PhaseModel::builtin(1, ModelKind::Quartic { c: 1.0, lambda: 0.4 }).unwrap();
        let metric = model.metric();
        let mut state = 0x7f4a7c15_u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..1000 {
            let xi = [6.0 * next() - 3.0, 6.0 * next() - 3.0];
            let h = model.hamiltonian().eval(&xi);
            let m = metric.eval(&xi).unwrap();
            assert!((m.det * h.powi(2) - 1.0).abs() < 1e-12);
            // upper · lower = identity
            let prod = &m.upper * &m.lower;
            let id = DMatrix::<f64>::identity(2, 2);
            assert!((prod - id).amax() < 1e-14);
        }
    }

    #[test]
    fn floor_violation_propagates() {
        let field = crate::phase_space::fields::ScalarField::new(2, |xi| xi[0]);
        let h = HamiltonianField::custom(field, 1.0).unwrap();
        let chart = CanonicalChart::new(1).unwrap();
        let metric = ConformalMetric::new(chart, h);
        assert!(metric.eval(&[0.5, 0.0]).is_err());
    }
}
