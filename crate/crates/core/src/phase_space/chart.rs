use crate::error::{GeoqError, Result};
use serde::{Deserialize, Serialize};

/// A canonical coordinate chart on a 2n-dimensional phase space.
///
/// Coordinates are ordered `(q^1, …, q^n, p_1, …, p_n)`; flat indices run
/// `0 ≤ i < 2n` with the first `n` slots holding positions and the last `n`
/// holding momenta.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalChart {
    n: usize,
}

impl CanonicalChart {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(GeoqError::InvalidDimension(
                "degrees of freedom must be at least 1".into(),
            ));
        }
        Ok(Self { n })
    }

    /// Degrees of freedom.
    pub fn dof(&self) -> usize {
        self.n
    }

    /// Phase-space dimension 2n.
    pub fn dim(&self) -> usize {
        2 * self.n
    }

    /// Flat index of q^mu (mu is zero-based).
    pub fn q_index(&self, mu: usize) -> usize {
        debug_assert!(mu < self.n);
        mu
    }

    /// Flat index of p_mu (mu is zero-based).
    pub fn p_index(&self, mu: usize) -> usize {
        debug_assert!(mu < self.n);
        self.n + mu
    }

    pub fn check_point(&self, xi: &[f64]) -> Result<()> {
        if xi.len() != self.dim() {
            return Err(GeoqError::InvalidDimension(format!(
                "point has {} components, chart expects {}",
                xi.len(),
                self.dim()
            )));
        }
        if xi.iter().any(|x| !x.is_finite()) {
            return Err(GeoqError::NonFinite("phase-space point".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_zero_dof() {
        assert!(CanonicalChart::new(0).is_err());
    }

    #[test]
    fn index_layout() {
        let chart = CanonicalChart::new(3).unwrap();
        assert_eq!(chart.dim(), 6);
        assert_eq!(chart.q_index(0), 0);
        assert_eq!(chart.p_index(0), 3);
        assert_eq!(chart.p_index(2), 5);
    }
}
