//! Conjugate gradients with diagonal preconditioning for Hermitian
//! positive-definite systems. All reductions are sequential, so repeated
//! solves are bitwise reproducible.

use crate::error::{GeoqError, Result};
use crate::quantum::csr::CsrMatrix;
use num_complex::Complex64;

pub struct CgStats {
    pub iterations: usize,
    pub relative_residual: f64,
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

pub fn solve(
    a: &CsrMatrix,
    b: &[Complex64],
    precond_diag: &[f64],
    tol_rel: f64,
    max_iter: usize,
) -> Result<(Vec<Complex64>, CgStats)> {
    let n = a.dim;
    let b_norm = norm(b);
    if b_norm == 0.0 {
        return Ok((
            vec![Complex64::new(0.0, 0.0); n],
            CgStats {
                iterations: 0,
                relative_residual: 0.0,
            },
        ));
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    let mut r = b.to_vec();
    let mut z: Vec<Complex64> = r
        .iter()
        .zip(precond_diag.iter())
        .map(|(ri, di)| ri / di)
        .collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z).re;
    let mut ap = vec![Complex64::new(0.0, 0.0); n];

    for it in 0..max_iter {
        a.matvec(&p, &mut ap);
        let pap = dot(&p, &ap).re;
        if pap <= 0.0 {
            return Err(GeoqError::LinearSolveFailure(format!(
                "matrix not positive definite (p·Ap = {pap:.3e})"
            )));
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let r_norm = norm(&r);
        if r_norm <= tol_rel * b_norm {
            return Ok((
                x,
                CgStats {
                    iterations: it + 1,
                    relative_residual: r_norm / b_norm,
                },
            ));
        }
        for i in 0..n {
            z[i] = r[i] / precond_diag[i];
        }
        let rz_new = dot(&r, &z).re;
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    Err(GeoqError::LinearSolveFailure(format!(
        "cg stalled after {max_iter} iterations at relative residual {:.3e}",
        norm(&r) / b_norm
    )))
}
