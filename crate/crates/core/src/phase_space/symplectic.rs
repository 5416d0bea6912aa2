//! The canonical symplectic structure in a fixed chart and the Poisson
//! bracket built on it.
//!
//! Conventions: `omega` is the block matrix `[[0, -I], [I, 0]]` and
//! `omega_bar` its inverse `[[0, I], [-I, 0]]`. The bracket is
//! `{f, g} = ∂_i f ω̄^{ij} ∂_j g`, which makes `{q, p} = +1` and identifies
//! the Hamiltonian flow of `h` with `ξ̇ = ω̄ ∇h` (so `h = ½(q²+p²)` gives
//! `q̇ = p`, `ṗ = -q`).

use crate::error::{GeoqError, Result};
use crate::phase_space::fields::ScalarField;
use nalgebra::DMatrix;

/// The canonical two-form as a dense matrix: `[[0, -I], [I, 0]]`.
pub fn omega_matrix(n: usize) -> Result<DMatrix<f64>> {
    if n == 0 {
        return Err(GeoqError::InvalidDimension(
            "omega requires n >= 1".into(),
        ));
    }
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    for mu in 0..n {
        m[(mu, n + mu)] = -1.0;
        m[(n + mu, mu)] = 1.0;
    }
    Ok(m)
}

/// The inverse structure, `ω·ω̄ = I`; in closed form `[[0, I], [-I, 0]]`.
pub fn omega_bar(n: usize) -> Result<DMatrix<f64>> {
    if n == 0 {
        return Err(GeoqError::InvalidDimension(
            "omega_bar requires n >= 1".into(),
        ));
    }
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    for mu in 0..n {
        m[(mu, n + mu)] = 1.0;
        m[(n + mu, mu)] = -1.0;
    }
    Ok(m)
}

/// `(ω v)_i = ω_ij v^j` without materializing the matrix.
pub fn omega_apply(v: &[f64], out: &mut [f64]) {
    let n = v.len() / 2;
    debug_assert_eq!(v.len(), 2 * n);
    for mu in 0..n {
        out[mu] = -v[n + mu];
        out[n + mu] = v[mu];
    }
}

/// `(ω̄ v)^i = ω̄^{ij} v_j` without materializing the matrix.
pub fn omega_bar_apply(v: &[f64], out: &mut [f64]) {
    let n = v.len() / 2;
    debug_assert_eq!(v.len(), 2 * n);
    for mu in 0..n {
        out[mu] = v[n + mu];
        out[n + mu] = -v[mu];
    }
}

/// Contraction `a_i ω̄^{ij} b_j = Σ_μ (a_qμ b_pμ − a_pμ b_qμ)`.
pub fn omega_bar_contract(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() / 2;
    let mut acc = 0.0;
    for mu in 0..n {
        acc += a[mu] * b[n + mu] - a[n + mu] * b[mu];
    }
    acc
}

/// Poisson bracket `{f, g}(ξ)`.
pub fn poisson_bracket(f: &ScalarField, g: &ScalarField, xi: &[f64]) -> Result<f64> {
    let gf = f.gradient(xi)?;
    let gg = g.gradient(xi)?;
    Ok(omega_bar_contract(&gf, &gg))
}

/// The Hamiltonian vector field `ξ̇ = ω̄ ∇h` evaluated into `out`.
pub fn hamiltonian_vector_field(h: &ScalarField, xi: &[f64], out: &mut [f64]) -> Result<()> {
    let grad = h.gradient(xi)?;
    omega_bar_apply(&grad, out);
    Ok(())
}

/// Jacobi-identity residual `{f,{g,k}} + {g,{k,f}} + {k,{f,g}}` at `xi`.
///
/// Inner brackets are wrapped as scalar fields and differentiated with the
/// same finite-difference machinery, so the residual measures the bracket
/// implementation end to end. `outer_step` is the differencing step applied
/// to the composed bracket fields; it should sit well above the fields' own
/// step, since the inner evaluation carries round-off of order ε/step that
/// the outer difference divides by `outer_step` again (the 4th-order stencil
/// itself is exact on the polynomial test fields).
pub fn jacobi_residual(
    f: &ScalarField,
    g: &ScalarField,
    k: &ScalarField,
    xi: &[f64],
    outer_step: f64,
) -> Result<f64> {
    let dim = f.dim();
    let bracket_field = |a: ScalarField, b: ScalarField| -> ScalarField {
        ScalarField::new(dim, move |x: &[f64]| {
            poisson_bracket(&a, &b, x).expect("bracket evaluation")
        })
        .with_fd_step(outer_step)
    };
    let gk = bracket_field(g.clone(), k.clone());
    let kf = bracket_field(k.clone(), f.clone());
    let fg = bracket_field(f.clone(), g.clone());
    let term1 = poisson_bracket(f, &gk, xi)?;
    let term2 = poisson_bracket(g, &kf, xi)?;
    let term3 = poisson_bracket(k, &fg, xi)?;
    Ok((term1 + term2 + term3).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_n1_matches_block_form() {
        let m = omega_matrix(1).unwrap();
        assert_eq!(m[(0, 0)], 0.0);
        assert_eq!(m[(0, 1)], -1.0);
        assert_eq!(m[(1, 0)], 1.0);
        assert_eq!(m[(1, 1)], 0.0);
    }

    #[test]
    fn omega_n2_block_form() {
        let m = omega_matrix(2).unwrap();
        for mu in 0..2 {
            for nu in 0..2 {
                let delta = if mu == nu { 1.0 } else { 0.0 };
                assert_eq!(m[(mu, 2 + nu)], -delta);
                assert_eq!(m[(2 + mu, nu)], delta);
                assert_eq!(m[(mu, nu)], 0.0);
                assert_eq!(m[(2 + mu, 2 + nu)], 0.0);
            }
        }
    }

    #[test]
    fn omega_antisymmetric_n3() {
        let m = omega_matrix(3).unwrap();
        let s = &m + m.transpose();
        assert_eq!(s.amax(), 0.0);
    }

    #[test]
    fn rejects_n0() {
        assert!(omega_matrix(0).is_err());
        assert!(omega_bar(0).is_err());
    }

    // Independent oracle: solve ω·M = I directly and compare with the
    // closed form returned by omega_bar.
    #[test]
    fn omega_bar_n1_solves_defining_relation() {
        let w = omega_matrix(1).unwrap();
        let id = DMatrix::<f64>::identity(2, 2);
        let solved = w.lu().solve(&id).expect("omega is nondegenerate");
        let closed = omega_bar(1).unwrap();
        assert!((solved - &closed).amax() < 1e-14);
        assert_eq!(closed[(0, 1)], 1.0);
        assert_eq!(closed[(1, 0)], -1.0);
    }

    #[test]
    fn omega_times_omega_bar_is_identity_n2() {
        let w = omega_matrix(2).unwrap();
        let wb = omega_bar(2).unwrap();
        let prod = &w * &wb;
        let id = DMatrix::<f64>::identity(4, 4);
        assert_eq!((prod - id).amax(), 0.0);
    }

    #[test]
    fn omega_bar_equals_minus_omega_n1_to_4() {
        for n in 1..=4 {
            let w = omega_matrix(n).unwrap();
            let wb = omega_bar(n).unwrap();
            assert_eq!((wb + w).amax(), 0.0, "n = {n}");
        }
    }

    #[test]
    fn bracket_of_canonical_pair_is_plus_one() {
        let q = ScalarField::with_gradient(2, |xi| xi[0], |_| vec![1.0, 0.0]);
        let p = ScalarField::with_gradient(2, |xi| xi[1], |_| vec![0.0, 1.0]);
        let xi = [0.37, -2.4];
        assert_eq!(poisson_bracket(&q, &p, &xi).unwrap(), 1.0);
    }

    // Derived oracle: finite-difference bracket of q² with p at (3, 0.7).
    #[test]
    fn bracket_q_squared_with_p() {
        let f = ScalarField::new(2, |xi| xi[0] * xi[0]);
        let g = ScalarField::new(2, |xi| xi[1]);
        let v = poisson_bracket(&f, &g, &[3.0, 0.7]).unwrap();
        assert!((v - 6.0).abs() < 1e-9, "got {v}");
    }

    #[test]
    fn bracket_is_antisymmetric_in_itself() {
        let h = ScalarField::new(2, |xi| 1.0 + 0.5 * (xi[0] * xi[0] + xi[1] * xi[1]));
        let v = poisson_bracket(&h, &h, &[1.1, -0.3]).unwrap();
        assert!(v.abs() < 1e-12);
    }

    #[test]
    fn flow_convention_harmonic() {
        let h = ScalarField::with_gradient(
            2,
            |xi| 0.5 * (xi[0] * xi[0] + xi[1] * xi[1]),
            |xi| xi.to_vec(),
        );
        let xi = [0.4, -1.2];
        let mut vel = [0.0; 2];
        hamiltonian_vector_field(&h, &xi, &mut vel).unwrap();
        // q̇ = p, ṗ = -q
        assert_eq!(vel[0], xi[1]);
        assert_eq!(vel[1], -xi[0]);
    }

    // Seeded random cubic polynomial in 2 variables.
    fn random_cubic(seed: u64) -> ScalarField {
        let mut state = seed;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        };
        let c: Vec<f64> = (0..10).map(|_| next()).collect();
        ScalarField::new(2, move |xi| {
            let (q, p) = (xi[0], xi[1]);
            c[0] + c[1] * q
                + c[2] * p
                + c[3] * q * q
                + c[4] * q * p
                + c[5] * p * p
                + c[6] * q * q * q
                + c[7] * q * q * p
                + c[8] * q * p * p
                + c[9] * p * p * p
        })
        .with_fd_step(1e-5)
    }

    #[test]
    fn jacobi_identity_on_random_cubics() {
        for trial in 0..8u64 {
            let f = random_cubic(0x1111 + trial);
            let g = random_cubic(0x2222 + trial);
            let k = random_cubic(0x3333 + trial);
            let xi = [
                0.9 * ((trial as f64) * 0.7).sin(),
                0.9 * ((trial as f64) * 1.3).cos(),
            ];
            let r = jacobi_residual(&f, &g, &k, &xi, 1e-3).unwrap();
            assert!(r <= 1e-7, "trial {trial}: residual {r}");
        }
    }

    #[test]
    fn bracket_bilinearity_and_leibniz() {
        let f = random_cubic(41);
        let g = random_cubic(42);
        let k = random_cubic(43);
        let xi = [0.4, -0.8];
        // bilinearity in the first slot
        let combo = {
            let (f, g) = (f.clone(), g.clone());
            ScalarField::new(2, move |x: &[f64]| 2.5 * f.eval(x) - 1.5 * g.eval(x))
                .with_fd_step(1e-5)
        };
        let lhs = poisson_bracket(&combo, &k, &xi).unwrap();
        let rhs = 2.5 * poisson_bracket(&f, &k, &xi).unwrap()
            - 1.5 * poisson_bracket(&g, &k, &xi).unwrap();
        assert!((lhs - rhs).abs() < 1e-8, "{lhs} vs {rhs}");
        // antisymmetry
        let ab = poisson_bracket(&f, &g, &xi).unwrap();
        let ba = poisson_bracket(&g, &f, &xi).unwrap();
        assert!((ab + ba).abs() < 1e-12);
        // Leibniz: {fg, k} = f{g,k} + g{f,k}
        let prod = {
            let (f, g) = (f.clone(), g.clone());
            ScalarField::new(2, move |x: &[f64]| f.eval(x) * g.eval(x)).with_fd_step(1e-5)
        };
        let lhs = poisson_bracket(&prod, &k, &xi).unwrap();
        let rhs = f.eval(&xi) * poisson_bracket(&g, &k, &xi).unwrap()
            + g.eval(&xi) * poisson_bracket(&f, &k, &xi).unwrap();
        assert!((lhs - rhs).abs() < 1e-7, "{lhs} vs {rhs}");
    }

    #[test]
    fn non_finite_gradient_reported() {
        let f = ScalarField::new(2, |xi| if xi[0] > 0.0 { f64::INFINITY } else { 0.0 });
        let g = ScalarField::new(2, |xi| xi[1]);
        assert!(poisson_bracket(&f, &g, &[0.0, 0.0]).is_err());
    }
}
