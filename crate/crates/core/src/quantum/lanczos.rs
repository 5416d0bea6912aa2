//! Deterministic Hermitian eigensolver for the small end of the spectrum.
//!
//! The low eigenvalues of the magnetic operators sit in tight ladders
//! (spacing O(ℏ)) at the bottom of a spectrum whose width is set by the
//! grid, so plain Lanczos on the operator itself converges impractically
//! slowly. The solver therefore runs thick-restart Lanczos on the inverse,
//! applied through conjugate gradients with diagonal preconditioning; the
//! inverse maps the wanted ladder to the well-separated top of the spectrum.
//!
//! Determinism: the start vector comes from a fixed-seed generator and every
//! reduction is sequential, so a rerun with the same seed reproduces the
//! output bitwise.

use crate::error::{GeoqError, Result};
use crate::quantum::cg;
use crate::quantum::csr::CsrMatrix;
use crate::quantum::linalg::jacobi_eigen;
use num_complex::Complex64;

#[derive(Debug, Clone, Copy)]
pub struct EigenOptions {
    pub pairs: usize,
    /// Residual target `‖Av − λv‖ ≤ tol` for unit-norm `v`.
    pub tol: f64,
    pub max_basis: usize,
    pub max_restarts: usize,
    pub seed: u64,
    pub cg_tol: f64,
    pub cg_max_iter: usize,
}

impl EigenOptions {
    pub fn new(pairs: usize, seed: u64) -> Self {
        Self {
            pairs,
            tol: 1e-8,
            max_basis: (2 * pairs + 40).max(80),
            max_restarts: 80,
            seed,
            cg_tol: 1e-12,
            cg_max_iter: 200_000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct EigenResult {
    /// Ascending eigenvalues.
    pub eigenvalues: Vec<f64>,
    /// `‖Av − λv‖` per pair (unit-norm vectors).
    pub residuals: Vec<f64>,
    /// Eigenvectors matching `eigenvalues`.
    pub vectors: Vec<Vec<Complex64>>,
    pub converged: Vec<bool>,
    pub fully_converged: bool,
    pub operator_applies: usize,
    pub restarts: usize,
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

fn seeded_vector(dim: usize, seed: u64) -> Vec<Complex64> {
    let mut state = seed ^ 0x5851f42d4c957f2d;
    (0..dim)
        .map(|_| {
            let re = (splitmix64(&mut state) >> 11) as f64 / (1u64 << 53) as f64 - 0.5;
            let im = (splitmix64(&mut state) >> 11) as f64 / (1u64 << 53) as f64 - 0.5;
            Complex64::new(re, im)
        })
        .collect()
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn normalize(a: &mut [Complex64]) -> f64 {
    let n = norm(a);
    if n > 0.0 {
        let inv = 1.0 / n;
        for x in a.iter_mut() {
            *x *= inv;
        }
    }
    n
}

/// Two-pass modified Gram-Schmidt of `w` against `basis[..count]`,
/// accumulating first-pass coefficients into `coeffs`.
fn orthogonalize(
    w: &mut [Complex64],
    basis: &[Vec<Complex64>],
    count: usize,
    coeffs: Option<&mut [f64]>,
) {
    let mut first: Vec<f64> = vec![0.0; count];
    for pass in 0..2 {
        for (i, v) in basis.iter().take(count).enumerate() {
            let c = dot(v, w);
            for (wx, vx) in w.iter_mut().zip(v.iter()) {
                *wx -= c * vx;
            }
            if pass == 0 {
                first[i] = c.re;
            } else {
                first[i] += c.re;
            }
        }
    }
    if let Some(out) = coeffs {
        out[..count].copy_from_slice(&first);
    }
}

/// The `pairs` smallest eigenpairs of a Hermitian positive-definite matrix.
pub fn smallest_eigenpairs(a: &CsrMatrix, opts: &EigenOptions) -> Result<EigenResult> {
    let dim = a.dim;
    if opts.pairs == 0 || opts.pairs + 4 > opts.max_basis {
        return Err(GeoqError::Precondition(format!(
            "basis size {} too small for {} pairs",
            opts.max_basis, opts.pairs
        )));
    }
    if opts.pairs >= dim {
        return Err(GeoqError::Precondition(
            "requested pair count must be far below the matrix dimension".into(),
        ));
    }
    let precond = {
        let mut d = a.diagonal();
        for x in &mut d {
            if *x <= 0.0 {
                *x = 1.0;
            }
        }
        d
    };
    let inverse_apply = |x: &[Complex64], applies: &mut usize| -> Result<Vec<Complex64>> {
        let (y, _stats) = cg::solve(a, x, &precond, opts.cg_tol, opts.cg_max_iter)?;
        *applies += 1;
        Ok(y)
    };

    let max_basis = opts.max_basis.min(dim.saturating_sub(1)).max(opts.pairs + 4);
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(max_basis + 1);
    let mut t = vec![0.0f64; (max_basis + 1) * (max_basis + 1)];
    let t_idx = |i: usize, j: usize| i * (max_basis + 1) + j;

    let mut v0 = seeded_vector(dim, opts.seed);
    normalize(&mut v0);
    basis.push(v0);
    let mut size = 1usize;
    let mut applies = 0usize;
    let mut rng_state = opts.seed ^ 0xa0761d6478bd642f;

    let mut best: Option<EigenResult> = None;

    for restart in 0..=opts.max_restarts {
        // Extend the basis to max_basis columns of the projected matrix.
        while size <= max_basis {
            let mut w = inverse_apply(&basis[size - 1], &mut applies)?;
            let mut coeffs = vec![0.0f64; size];
            orthogonalize(&mut w, &basis, size, Some(&mut coeffs));
            for (i, c) in coeffs.iter().enumerate() {
                t[t_idx(i, size - 1)] = *c;
                t[t_idx(size - 1, i)] = *c;
            }
            let beta = normalize(&mut w);
            if beta <= 1e-13 {
                // Krylov breakdown: insert a fresh direction.
                let mut fresh = seeded_vector(dim, splitmix64(&mut rng_state));
                orthogonalize(&mut fresh, &basis, size, None);
                if normalize(&mut fresh) <= 1e-10 {
                    break;
                }
                w = fresh;
                t[t_idx(size, size - 1)] = 0.0;
                t[t_idx(size - 1, size)] = 0.0;
            } else {
                t[t_idx(size, size - 1)] = beta;
                t[t_idx(size - 1, size)] = beta;
            }
            basis.push(w);
            size += 1;
        }

        let k = size - 1; // complete projected block is k×k
        let mut small = vec![0.0f64; k * k];
        for i in 0..k {
            for j in 0..k {
                small[i * k + j] = t[t_idx(i, j)];
            }
        }
        let (mu, s) = jacobi_eigen(small, k)?;

        // Ritz pairs with the largest inverse-eigenvalues approximate the
        // smallest eigenvalues of A.
        let keep = (opts.pairs + 12).min(k.saturating_sub(1)).max(opts.pairs);
        let selected: Vec<usize> = (0..k).rev().take(keep).collect();

        let mut ritz: Vec<Vec<Complex64>> = Vec::with_capacity(keep);
        for &col in &selected {
            let mut x = vec![Complex64::new(0.0, 0.0); dim];
            for (i, v) in basis.iter().take(k).enumerate() {
                let c = s[i * k + col];
                if c != 0.0 {
                    for (xx, vx) in x.iter_mut().zip(v.iter()) {
                        *xx += vx * c;
                    }
                }
            }
            normalize(&mut x);
            ritz.push(x);
        }

        // True residuals against A for the wanted pairs.
        let mut lambdas = Vec::with_capacity(opts.pairs);
        let mut residuals = Vec::with_capacity(opts.pairs);
        let mut av = vec![Complex64::new(0.0, 0.0); dim];
        for x in ritz.iter().take(opts.pairs) {
            a.matvec(x, &mut av);
            let lambda = dot(x, &av).re;
            let res = av
                .iter()
                .zip(x.iter())
                .map(|(a, b)| (a - b * lambda).norm_sqr())
                .sum::<f64>()
                .sqrt();
            lambdas.push(lambda);
            residuals.push(res);
        }
        let converged: Vec<bool> = residuals.iter().map(|&r| r <= opts.tol).collect();
        let all_ok = converged.iter().all(|&c| c);

        // Package ascending by eigenvalue.
        let mut order: Vec<usize> = (0..opts.pairs).collect();
        order.sort_by(|&i, &j| lambdas[i].partial_cmp(&lambdas[j]).unwrap());
        let result = EigenResult {
            eigenvalues: order.iter().map(|&i| lambdas[i]).collect(),
            residuals: order.iter().map(|&i| residuals[i]).collect(),
            vectors: order.iter().map(|&i| ritz[i].clone()).collect(),
            converged: order.iter().map(|&i| converged[i]).collect(),
            fully_converged: all_ok,
            operator_applies: applies,
            restarts: restart,
        };
        if all_ok {
            return Ok(result);
        }
        let better = match &best {
            None => true,
            Some(b) => {
                result.converged.iter().filter(|&&c| c).count()
                    > b.converged.iter().filter(|&&c| c).count()
            }
        };
        if better {
            best = Some(result);
        }
        if restart == opts.max_restarts {
            break;
        }

        // Thick restart: lock the Ritz block and continue from the residual
        // direction. The locked columns keep only their Ritz values; the
        // couplings to the next direction are recomputed by the projection
        // in the extension loop.
        let v_res = basis[k].clone();
        let locked = ritz.len();
        let mut new_basis = ritz;
        new_basis.push(v_res);
        basis = new_basis;
        t.fill(0.0);
        for (i, &col) in selected.iter().enumerate() {
            t[t_idx(i, i)] = mu[col];
        }
        size = locked + 1;
    }

    // Budget exhausted: return the best partial results, flagged through
    // `converged` / `fully_converged`, so callers can keep what converged.
    Ok(best.expect("at least one restart produced results"))
}
