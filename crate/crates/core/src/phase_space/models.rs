//! Built-in Hamiltonian fields and the phase-space model bundle.

use crate::error::{GeoqError, Result};
use crate::phase_space::chart::CanonicalChart;
use crate::phase_space::fields::ScalarField;
use crate::phase_space::gauge::GaugePotential;
use crate::phase_space::metric::ConformalMetric;
use serde::{Deserialize, Serialize};

/// Identity of a Hamiltonian field, used by the quantum oracle to decide
/// whether a closed-form or 1D-grid reference spectrum is available.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ModelKind {
    /// h ≡ c
    Constant { c: f64 },
    /// h = c + ½ Σ (q² + p²)
    ShiftedHarmonic { c: f64 },
    /// h = c + ½ Σ (q² + p²) + λ Σ q⁴
    Quartic { c: f64, lambda: f64 },
    /// User-supplied field; no reference spectrum.
    Custom,
}

impl ModelKind {
    pub fn id(&self) -> &'static str {
        match self {
            ModelKind::Constant { .. } => "constant",
            ModelKind::ShiftedHarmonic { .. } => "shifted-harmonic",
            ModelKind::Quartic { .. } => "quartic",
            ModelKind::Custom => "custom",
        }
    }
}

/// A strictly positive Hamiltonian with gradient, the energy function that
/// also sources the conformal metric.
#[derive(Debug, Clone)]
pub struct HamiltonianField {
    kind: ModelKind,
    field: ScalarField,
    h_min: f64,
}

impl HamiltonianField {
    /// h ≡ c.
    pub fn constant(n: usize, c: f64) -> Result<Self> {
        require_positive(c)?;
        let dim = 2 * n;
        Ok(Self {
            kind: ModelKind::Constant { c },
            field: ScalarField::with_gradient(dim, move |_| c, move |_| vec![0.0; dim]),
            h_min: c,
        })
    }

    /// h = c + ½|ξ|².
    pub fn shifted_harmonic(n: usize, c: f64) -> Result<Self> {
        require_positive(c)?;
        let dim = 2 * n;
        Ok(Self {
            kind: ModelKind::ShiftedHarmonic { c },
            field: ScalarField::with_gradient(
                dim,
                move |xi| c + 0.5 * xi.iter().map(|x| x * x).sum::<f64>(),
                |xi| xi.to_vec(),
            ),
            h_min: c,
        })
    }

    /// h = c + ½|ξ|² + λ Σ_μ (q^μ)⁴ with λ ≥ 0.
    pub fn quartic(n: usize, c: f64, lambda: f64) -> Result<Self> {
        require_positive(c)?;
        if lambda < 0.0 {
            return Err(GeoqError::DomainViolation(
                "quartic coupling must be nonnegative".into(),
            ));
        }
        let dim = 2 * n;
        Ok(Self {
            kind: ModelKind::Quartic { c, lambda },
            field: ScalarField::with_gradient(
                dim,
                move |xi| {
                    let quad = 0.5 * xi.iter().map(|x| x * x).sum::<f64>();
                    let quart: f64 = xi[..n].iter().map(|q| q.powi(4)).sum();
                    c + quad + lambda * quart
                },
                move |xi| {
                    let mut g = xi.to_vec();
                    for mu in 0..n {
                        g[mu] += 4.0 * lambda * xi[mu].powi(3);
                    }
                    g
                },
            ),
            h_min: c,
        })
    }

    /// A user field with a declared positivity floor.
    pub fn custom(field: ScalarField, h_min: f64) -> Result<Self> {
        require_positive(h_min)?;
        Ok(Self {
            kind: ModelKind::Custom,
            field,
            h_min,
        })
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn id(&self) -> &'static str {
        self.kind.id()
    }

    pub fn h_min(&self) -> f64 {
        self.h_min
    }

    pub fn field(&self) -> &ScalarField {
        &self.field
    }

    pub fn eval(&self, xi: &[f64]) -> f64 {
        self.field.eval(xi)
    }

    pub fn gradient(&self, xi: &[f64]) -> Result<Vec<f64>> {
        self.field.gradient(xi)
    }

    /// Evaluate, rejecting points where the positivity floor is violated.
    pub fn eval_checked(&self, xi: &[f64]) -> Result<f64> {
        let h = self.eval(xi);
        if !h.is_finite() {
            return Err(GeoqError::NonFinite("hamiltonian evaluation".into()));
        }
        // Small slack for round-off at the declared floor.
        if h < self.h_min * (1.0 - 1e-12) {
            return Err(GeoqError::DomainViolation(format!(
                "h = {h:.6e} below declared floor {:.6e}",
                self.h_min
            )));
        }
        Ok(h)
    }
}

fn require_positive(c: f64) -> Result<()> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(GeoqError::DomainViolation(
            "positivity floor must be a positive finite number".into(),
        ));
    }
    Ok(())
}

/// The model bundle: chart, Hamiltonian, gauge potential, and the conformal
/// metric derived from the Hamiltonian.
#[derive(Debug, Clone)]
pub struct PhaseModel {
    chart: CanonicalChart,
    hamiltonian: HamiltonianField,
    gauge: GaugePotential,
}

impl PhaseModel {
    pub fn new(chart: CanonicalChart, hamiltonian: HamiltonianField, gauge: GaugePotential) -> Result<Self> {
        if hamiltonian.field().dim() != chart.dim() || gauge.dim() != chart.dim() {
            return Err(GeoqError::InvalidDimension(
                "hamiltonian, gauge and chart dimensions disagree".into(),
            ));
        }
        Ok(Self {
            chart,
            hamiltonian,
            gauge,
        })
    }

    /// Built-in model by id with the canonical gauge.
    pub fn builtin(n: usize, kind: ModelKind) -> Result<Self> {
        let chart = CanonicalChart::new(n)?;
        let h = match kind {
            ModelKind::Constant { c } => HamiltonianField::constant(n, c)?,
            ModelKind::ShiftedHarmonic { c } => HamiltonianField::shifted_harmonic(n, c)?,
            ModelKind::Quartic { c, lambda } => HamiltonianField::quartic(n, c, lambda)?,
            ModelKind::Custom => {
                return Err(GeoqError::Precondition(
                    "custom models need an explicit field".into(),
                ))
            }
        };
        Self::new(chart, h, GaugePotential::canonical(n))
    }

    pub fn with_gauge(mut self, gauge: GaugePotential) -> Result<Self> {
        if gauge.dim() != self.chart.dim() {
            return Err(GeoqError::InvalidDimension(
                "gauge dimension disagrees with chart".into(),
            ));
        }
        self.gauge = gauge;
        Ok(self)
    }

    pub fn chart(&self) -> CanonicalChart {
        self.chart
    }

    pub fn dof(&self) -> usize {
        self.chart.dof()
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn hamiltonian(&self) -> &HamiltonianField {
        &self.hamiltonian
    }

    pub fn gauge(&self) -> &GaugePotential {
        &self.gauge
    }

    pub fn metric(&self) -> ConformalMetric {
        ConformalMetric::new(self.chart, self.hamiltonian.clone())
    }
}
