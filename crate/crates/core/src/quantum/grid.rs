use crate::error::{GeoqError, Result};
use serde::{Deserialize, Serialize};

/// Square Dirichlet box `[-R, R]²` with `n` nodes per axis (boundary nodes
/// included; the unknowns are the `(n-2)²` interior nodes).
///
/// The spacing must resolve the magnetic length: `Δ ≤ ℏ^{1/2}/4`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub half_width: f64,
    pub nodes: usize,
}

impl GridSpec {
    pub fn new(half_width: f64, nodes: usize) -> Result<Self> {
        if !(half_width > 0.0) {
            return Err(GeoqError::Precondition(
                "grid half-width must be positive".into(),
            ));
        }
        if nodes < 8 {
            return Err(GeoqError::GridTooSmall(format!(
                "grid needs at least 8 nodes per axis, got {nodes}"
            )));
        }
        Ok(Self { half_width, nodes })
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / (self.nodes - 1) as f64
    }

    pub fn interior(&self) -> usize {
        self.nodes - 2
    }

    pub fn unknowns(&self) -> usize {
        self.interior() * self.interior()
    }

    /// Coordinate of node index `i` (0 = left boundary).
    pub fn coord(&self, i: usize) -> f64 {
        -self.half_width + i as f64 * self.spacing()
    }

    /// Flat index of the interior node `(i, j)` with `1 ≤ i, j ≤ n-2`.
    pub fn interior_index(&self, i: usize, j: usize) -> usize {
        debug_assert!((1..self.nodes - 1).contains(&i));
        debug_assert!((1..self.nodes - 1).contains(&j));
        (i - 1) * self.interior() + (j - 1)
    }

    pub fn check_resolves(&self, hbar: f64) -> Result<()> {
        let required = hbar.sqrt() / 4.0;
        let delta = self.spacing();
        if delta > required * (1.0 + 1e-12) {
            return Err(GeoqError::GridTooSmall(format!(
                "spacing {delta:.4e} exceeds hbar^(1/2)/4 = {required:.4e}; \
                 increase nodes or shrink the box"
            )));
        }
        Ok(())
    }
}
