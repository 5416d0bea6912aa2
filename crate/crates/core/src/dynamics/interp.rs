//! Natural cubic spline interpolation for resampling trajectories onto a
//! common time grid.

use crate::error::{GeoqError, Result};

pub struct CubicSpline {
    xs: Vec<f64>,
    ys: Vec<f64>,
    second: Vec<f64>,
}

impl CubicSpline {
    pub fn fit(xs: &[f64], ys: &[f64]) -> Result<Self> {
        if xs.len() != ys.len() || xs.len() < 3 {
            return Err(GeoqError::Precondition(
                "spline needs at least three knots".into(),
            ));
        }
        if xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(GeoqError::Precondition(
                "spline knots must be strictly increasing".into(),
            ));
        }
        let n = xs.len();
        // Tridiagonal system for the interior second derivatives; natural
        // boundary conditions pin the ends to zero.
        let mut second = vec![0.0; n];
        let mut diag = vec![0.0; n];
        let mut rhs = vec![0.0; n];
        let mut upper = vec![0.0; n];
        for i in 1..n - 1 {
            let h0 = xs[i] - xs[i - 1];
            let h1 = xs[i + 1] - xs[i];
            diag[i] = 2.0 * (h0 + h1);
            upper[i] = h1;
            rhs[i] = 6.0 * ((ys[i + 1] - ys[i]) / h1 - (ys[i] - ys[i - 1]) / h0);
        }
        // Thomas algorithm on rows 1..n-1.
        for i in 2..n - 1 {
            let h0 = xs[i] - xs[i - 1];
            let m = h0 / diag[i - 1];
            diag[i] -= m * upper[i - 1];
            rhs[i] -= m * rhs[i - 1];
        }
        for i in (1..n - 1).rev() {
            let carry = if i + 1 < n - 1 {
                upper[i] * second[i + 1]
            } else {
                0.0
            };
            second[i] = (rhs[i] - carry) / diag[i];
        }
        Ok(Self {
            xs: xs.to_vec(),
            ys: ys.to_vec(),
            second,
        })
    }

    /// Evaluate at `x`; clamps to the knot range.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        let x = x.clamp(self.xs[0], self.xs[n - 1]);
        let idx = match self
            .xs
            .binary_search_by(|probe| probe.partial_cmp(&x).unwrap())
        {
            Ok(i) => return self.ys[i],
            Err(i) => i.clamp(1, n - 1) - 1,
        };
        let h = self.xs[idx + 1] - self.xs[idx];
        let a = (self.xs[idx + 1] - x) / h;
        let b = (x - self.xs[idx]) / h;
        a * self.ys[idx]
            + b * self.ys[idx + 1]
            + ((a * a * a - a) * self.second[idx] + (b * b * b - b) * self.second[idx + 1])
                * h
                * h
                / 6.0
    }
}

/// Resample column `component` of a trajectory onto `target_times`.
pub fn resample(
    times: &[f64],
    values: impl Iterator<Item = f64>,
    target_times: &[f64],
) -> Result<Vec<f64>> {
    let ys: Vec<f64> = values.collect();
    let spline = CubicSpline::fit(times, &ys)?;
    Ok(target_times.iter().map(|&t| spline.eval(t)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_knots() {
        let xs: Vec<f64> = (0..20).map(|i| i as f64 * 0.3).collect();
        let ys: Vec<f64> = xs.iter().map(|x| (1.7 * x).sin()).collect();
        let s = CubicSpline::fit(&xs, &ys).unwrap();
        for (x, y) in xs.iter().zip(ys.iter()) {
            assert!((s.eval(*x) - y).abs() < 1e-14);
        }
    }

    #[test]
    fn interpolates_smooth_function_accurately() {
        let n = 400;
        let xs: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64 * 5.0).collect();
        let ys: Vec<f64> = xs.iter().map(|x| (2.0 * x).sin() * (-0.3 * x).exp()).collect();
        let s = CubicSpline::fit(&xs, &ys).unwrap();
        let mut worst = 0.0f64;
        for k in 0..1000 {
            let x = 0.1 + 4.8 * k as f64 / 999.0;
            let exact = (2.0 * x).sin() * (-0.3 * x).exp();
            worst = worst.max((s.eval(x) - exact).abs());
        }
        assert!(worst < 1e-7, "max interpolation error {worst}");
    }

    #[test]
    fn rejects_non_monotone_knots() {
        assert!(CubicSpline::fit(&[0.0, 1.0, 0.5], &[0.0, 1.0, 2.0]).is_err());
    }
}
