//! Small dense / structured eigenvalue kernels used by the sparse solver and
//! the 1D reference spectra: Sturm-sequence bisection for symmetric
//! tridiagonal matrices and cyclic Jacobi for small dense symmetric ones.

use crate::error::{GeoqError, Result};

/// Number of eigenvalues of the symmetric tridiagonal `(d, e)` strictly
/// below `x`, by counting negative LDLᵀ pivots.
fn sturm_count(d: &[f64], e: &[f64], x: f64) -> usize {
    let n = d.len();
    let mut count = 0;
    let mut pivot = d[0] - x;
    if pivot < 0.0 {
        count += 1;
    }
    for i in 1..n {
        let denom = if pivot.abs() < 1e-300 {
            1e-300_f64.copysign(if pivot == 0.0 { 1.0 } else { pivot })
        } else {
            pivot
        };
        pivot = d[i] - x - e[i - 1] * e[i - 1] / denom;
        if pivot < 0.0 {
            count += 1;
        }
    }
    count
}

/// The `m` smallest eigenvalues of a symmetric tridiagonal matrix with
/// diagonal `d` and off-diagonal `e`, by bisection.
pub fn tridiagonal_smallest(d: &[f64], e: &[f64], m: usize) -> Result<Vec<f64>> {
    let n = d.len();
    if n == 0 || e.len() + 1 != n {
        return Err(GeoqError::Precondition(
            "tridiagonal sizes disagree".into(),
        ));
    }
    if m > n {
        return Err(GeoqError::Precondition(format!(
            "requested {m} eigenvalues of a {n}-dimensional matrix"
        )));
    }
    // Gershgorin bounds.
    let mut lo = f64::MAX;
    let mut hi = f64::MIN;
    for i in 0..n {
        let r = if i == 0 { 0.0 } else { e[i - 1].abs() }
            + if i + 1 < n { e[i].abs() } else { 0.0 };
        lo = lo.min(d[i] - r);
        hi = hi.max(d[i] + r);
    }
    let scale = hi.abs().max(lo.abs()).max(1.0);
    let tol = 1e-14 * scale;
    let mut out = Vec::with_capacity(m);
    for k in 0..m {
        let mut a = lo;
        let mut b = hi;
        // Invariant: count(a) <= k < count(b).
        while b - a > tol {
            let mid = 0.5 * (a + b);
            if sturm_count(d, e, mid) > k {
                b = mid;
            } else {
                a = mid;
            }
        }
        out.push(0.5 * (a + b));
    }
    Ok(out)
}

/// Eigen-decomposition of a small dense symmetric matrix by cyclic Jacobi.
///
/// `a` is row-major `n × n` and is consumed. Returns eigenvalues ascending
/// and the matching eigenvectors as columns of a row-major matrix.
pub fn jacobi_eigen(mut a: Vec<f64>, n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if a.len() != n * n {
        return Err(GeoqError::Precondition("matrix size mismatch".into()));
    }
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let fro: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let stop = 1e-15 * fro.max(1e-300);
    for _sweep in 0..64 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p * n + q] * a[p * n + q];
            }
        }
        if off.sqrt() <= stop {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let tau = (aqq - app) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // Rotate rows/columns p and q.
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].partial_cmp(&a[j * n + j]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| a[i * n + i]).collect();
    let mut vectors = vec![0.0; n * n];
    for (new_col, &old_col) in order.iter().enumerate() {
        for row in 0..n {
            vectors[row * n + new_col] = v[row * n + old_col];
        }
    }
    Ok((values, vectors))
}
