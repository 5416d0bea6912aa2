//! Flux of the canonical two-form through closed surfaces and the
//! integrality diagnostic `∫ ω / 2π ∈ ℤ`.

use crate::error::{GeoqError, Result};

/// One oriented quadrature cell of a parametrized surface patch: a base
/// point, the two tangent vectors of the parametrization scaled by the
/// parameter increments, and a quadrature weight.
#[derive(Debug, Clone)]
pub struct SurfaceCell {
    pub base: Vec<f64>,
    pub tangent_u: Vec<f64>,
    pub tangent_v: Vec<f64>,
    pub weight: f64,
}

#[derive(Debug, Clone)]
pub struct SurfaceMesh {
    dim: usize,
    cells: Vec<SurfaceCell>,
    closed: bool,
    label: String,
}

impl SurfaceMesh {
    pub fn from_cells(
        dim: usize,
        cells: Vec<SurfaceCell>,
        closed: bool,
        label: impl Into<String>,
    ) -> Self {
        Self {
            dim,
            cells,
            closed,
            label: label.into(),
        }
    }

    /// Fundamental domain of a flat torus of side `side` in the (q^1, p_1)
    /// plane, oriented so the canonical two-form integrates to +side².
    pub fn flat_torus(n: usize, side: f64, subdiv: usize) -> Self {
        let dim = 2 * n;
        let step = side / subdiv as f64;
        let mut cells = Vec::with_capacity(subdiv * subdiv);
        for i in 0..subdiv {
            for j in 0..subdiv {
                let mut base = vec![0.0; dim];
                base[0] = (i as f64 + 0.5) * step;
                base[n] = (j as f64 + 0.5) * step;
                // Tangent order (∂_p, ∂_q) gives ω(t_u, t_v) = +step².
                let mut tu = vec![0.0; dim];
                tu[n] = step;
                let mut tv = vec![0.0; dim];
                tv[0] = step;
                cells.push(SurfaceCell {
                    base,
                    tangent_u: tu,
                    tangent_v: tv,
                    weight: 1.0,
                });
            }
        }
        Self::from_cells(dim, cells, true, "flat-torus")
    }

    /// A round 2-sphere mapped into phase space through its first two (or
    /// three, when available) coordinates. Closed, with exact tangents from
    /// the parametrization.
    pub fn sphere_immersion(n: usize, center: &[f64], radius: f64, subdiv: usize) -> Self {
        let dim = 2 * n;
        assert_eq!(center.len(), dim);
        let nu = subdiv;
        let nv = 2 * subdiv;
        let du = std::f64::consts::PI / nu as f64;
        let dv = 2.0 * std::f64::consts::PI / nv as f64;
        let mut cells = Vec::with_capacity(nu * nv);
        // Embedding components: x -> coord 0, y -> coord n, z -> coord 1 when
        // n >= 2, otherwise the sphere is an (exact) immersion into the plane.
        let z_slot = if n >= 2 { Some(1) } else { None };
        for i in 0..nu {
            let u = (i as f64 + 0.5) * du;
            for j in 0..nv {
                let v = (j as f64 + 0.5) * dv;
                let mut base = center.to_vec();
                base[0] += radius * u.sin() * v.cos();
                base[n] += radius * u.sin() * v.sin();
                let mut tu = vec![0.0; dim];
                tu[0] = radius * u.cos() * v.cos() * du;
                tu[n] = radius * u.cos() * v.sin() * du;
                let mut tv = vec![0.0; dim];
                tv[0] = -radius * u.sin() * v.sin() * dv;
                tv[n] = radius * u.sin() * v.cos() * dv;
                if let Some(z) = z_slot {
                    base[z] += radius * u.cos();
                    tu[z] = -radius * u.sin() * du;
                }
                cells.push(SurfaceCell {
                    base,
                    tangent_u: tu,
                    tangent_v: tv,
                    weight: 1.0,
                });
            }
        }
        Self::from_cells(dim, cells, true, "sphere-immersion")
    }

    /// A closed mesh with no cells (zero area).
    pub fn degenerate(n: usize) -> Self {
        Self::from_cells(2 * n, Vec::new(), true, "degenerate")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn cells(&self) -> &[SurfaceCell] {
        &self.cells
    }
}

#[derive(Debug, Clone, Copy)]
pub struct FluxResult {
    /// `∫ ω / 2π`.
    pub flux_over_2pi: f64,
    /// Distance to the nearest integer.
    pub integrality_residual: f64,
}

/// Flux of ω through a closed surface, per-cell evaluation of ω on the
/// oriented tangent pair.
pub fn kostant_flux(mesh: &SurfaceMesh) -> Result<FluxResult> {
    if !mesh.is_closed() {
        return Err(GeoqError::OpenSurface);
    }
    let n = mesh.dim() / 2;
    let mut total = 0.0;
    for cell in mesh.cells() {
        // ω(u, v) = Σ_μ (u_{p_μ} v_{q_μ} − u_{q_μ} v_{p_μ})
        let mut w = 0.0;
        for mu in 0..n {
            w += cell.tangent_u[n + mu] * cell.tangent_v[mu]
                - cell.tangent_u[mu] * cell.tangent_v[n + mu];
        }
        total += w * cell.weight;
    }
    let flux_over_2pi = total / (2.0 * std::f64::consts::PI);
    Ok(FluxResult {
        flux_over_2pi,
        integrality_residual: (flux_over_2pi - flux_over_2pi.round()).abs(),
    })
}

/// Flux under mesh-refinement doubling until two consecutive levels agree to
/// `tol`; guards curved immersions where single-level quadrature is inexact.
pub fn kostant_flux_converged(
    build: impl Fn(usize) -> SurfaceMesh,
    initial_subdiv: usize,
    tol: f64,
    max_doublings: usize,
) -> Result<FluxResult> {
    let mut subdiv = initial_subdiv.max(2);
    let mut prev = kostant_flux(&build(subdiv))?;
    for _ in 0..max_doublings {
        subdiv *= 2;
        let next = kostant_flux(&build(subdiv))?;
        if (next.flux_over_2pi - prev.flux_over_2pi).abs() < tol {
            return Ok(next);
        }
        prev = next;
    }
    Err(GeoqError::Precondition(format!(
        "flux quadrature did not settle below {tol:.1e} within {max_doublings} refinements"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_flux_is_area_over_2pi() {
        // side² = 4π gives flux/2π = 2 (analytic area integral).
        let side = (4.0 * std::f64::consts::PI).sqrt();
        let mesh = SurfaceMesh::flat_torus(1, side, 16);
        let flux = kostant_flux(&mesh).unwrap();
        assert!((flux.flux_over_2pi - 2.0).abs() < 1e-12);
        assert!(flux.integrality_residual < 1e-12);
    }

    #[test]
    fn sphere_in_plane_has_zero_flux() {
        let mesh = SurfaceMesh::sphere_immersion(1, &[0.3, -0.2], 1.7, 24);
        let flux = kostant_flux(&mesh).unwrap();
        assert!(flux.flux_over_2pi.abs() < 1e-10, "{}", flux.flux_over_2pi);
    }

    #[test]
    fn sphere_in_r4_has_zero_flux() {
        let mesh = SurfaceMesh::sphere_immersion(2, &[0.0, 0.5, 1.0, -0.5], 2.0, 24);
        let flux = kostant_flux(&mesh).unwrap();
        assert!(flux.flux_over_2pi.abs() < 1e-10, "{}", flux.flux_over_2pi);
    }

    #[test]
    fn degenerate_mesh_has_zero_flux() {
        let flux = kostant_flux(&SurfaceMesh::degenerate(1)).unwrap();
        assert_eq!(flux.flux_over_2pi, 0.0);
    }

    #[test]
    fn open_surface_rejected() {
        let mesh = SurfaceMesh::from_cells(2, Vec::new(), false, "open");
        assert!(matches!(kostant_flux(&mesh), Err(GeoqError::OpenSurface)));
    }

    #[test]
    fn refinement_settles_for_sphere() {
        let flux = kostant_flux_converged(
            |s| SurfaceMesh::sphere_immersion(1, &[0.0, 0.0], 1.0, s),
            4,
            1e-8,
            12,
        )
        .unwrap();
        assert!(flux.flux_over_2pi.abs() < 1e-10);
    }
}
