//! Kinematical validation battery: gauge curls, commutator residuals,
//! polarization diagnostics, the Jacobi identity and flux integrality.

use crate::config::ScenarioConfig;
use crate::manifest::RunManifest;
use crate::output::config_hash;
use crate::runs::RunError;
use geoq::phase_space::{
    gauge_check, jacobi_residual, kostant_flux, omega_bar, omega_matrix, GaugePotential,
    ModelKind, PhaseModel, ScalarField, SurfaceMesh,
};
use geoq::prequantum::{
    ccr_residual, harmonic_prequantum_step, polarization_residual, Boundary, SectionGrid,
};
use num_complex::Complex64;
use serde::Serialize;
use std::path::Path;

#[derive(Serialize)]
struct CheckRecord {
    name: String,
    value: f64,
    threshold: f64,
    /// "below" when the value must stay under the threshold, "above" when it
    /// must exceed it.
    sense: String,
    pass: bool,
}

#[derive(Serialize)]
struct ChecksFile<'a> {
    config_hash: &'a str,
    checks: &'a [CheckRecord],
}

fn sample_points(dim: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut state = seed | 1;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64 * 4.0 - 2.0
    };
    (0..count)
        .map(|_| (0..dim).map(|_| next()).collect())
        .collect()
}

fn random_cubic(seed: u64) -> ScalarField {
    let mut state = seed | 1;
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

pub fn run_checks(cfg: &ScenarioConfig, out_dir: &Path, quiet: bool) -> Result<RunManifest, RunError> {
    let hash = config_hash(cfg);
    let mut manifest = RunManifest::start(hash.clone());
    std::fs::create_dir_all(out_dir).map_err(RunError::Io)?;
    let mut records: Vec<CheckRecord> = Vec::new();
    let seed = cfg.seed;

    let below = |records: &mut Vec<CheckRecord>, name: &str, value: f64, threshold: f64| {
        records.push(CheckRecord {
            name: name.into(),
            value,
            threshold,
            sense: "below".into(),
            pass: value <= threshold,
        });
    };
    let above = |records: &mut Vec<CheckRecord>, name: &str, value: f64, threshold: f64| {
        records.push(CheckRecord {
            name: name.into(),
            value,
            threshold,
            sense: "above".into(),
            pass: value >= threshold,
        });
    };

    // Structure matrices: antisymmetry and the defining relation, n = 1..4.
    for n in 1..=4usize {
        let w = omega_matrix(n).unwrap();
        let wb = omega_bar(n).unwrap();
        let anti = (&w + w.transpose()).amax();
        let prod = &w * &wb;
        let mut defining = 0.0f64;
        for i in 0..2 * n {
            for j in 0..2 * n {
                let delta = if i == j { 1.0 } else { 0.0 };
                defining = defining.max((prod[(i, j)] - delta).abs());
            }
        }
        below(&mut records, &format!("omega-antisymmetry n={n}"), anti, 0.0);
        below(&mut records, &format!("omega-defining-relation n={n}"), defining, 0.0);
    }

    // Gauge curls.
    let points = sample_points(2, 100, seed ^ 0x11);
    for (label, theta) in [
        ("canonical", GaugePotential::canonical(1)),
        ("symmetric", GaugePotential::symmetric(1)),
    ] {
        let check = gauge_check(&theta, &points, 1e-8).map_err(RunError::Integration)?;
        below(&mut records, &format!("gauge-curl {label}"), check.max_residual, 1e-8);
    }
    // Total derivative leaves the curl unchanged.
    let chi = ScalarField::with_gradient(2, |xi| xi[0] * xi[1], |xi| vec![xi[1], xi[0]]);
    let transformed = GaugePotential::canonical(1).transform(&chi);
    let check = gauge_check(&transformed, &points, 1e-8).map_err(RunError::Integration)?;
    below(&mut records, "gauge-curl canonical+dchi", check.max_residual, 1e-8);
    // A broken gauge must be detected, with residual near 1.
    let broken = GaugePotential::custom(2, "broken", |xi, out| {
        out[0] = 0.0;
        out[1] = -2.0 * xi[0];
    });
    let check = gauge_check(&broken, &points, 1e-8).map_err(RunError::Integration)?;
    above(&mut records, "gauge-curl broken-theta detected", check.max_residual, 0.9);

    // Metric determinant identity on the quartic model.
    let quartic = PhaseModel::builtin(1, ModelKind::Quartic { c: 1.0, lambda: 0.4 }).unwrap();
    let metric = quartic.metric();
    let mut worst = 0.0f64;
    for xi in sample_points(2, 1000, seed ^ 0x22) {
        let h = quartic.hamiltonian().eval(&xi);
        let m = metric.eval(&xi).map_err(RunError::Integration)?;
        worst = worst.max((m.det * h * h - 1.0).abs());
    }
    below(&mut records, "metric-determinant-identity", worst, 1e-12);

    // Canonical-commutator residual and its 4th-order convergence.
    let hbar = cfg.hbar.first().copied().unwrap_or(0.1);
    let ccr_box = (-3.6, 3.6, -3.6, 3.6);
    let section = |n: usize| {
        SectionGrid::gaussian(ccr_box, n, n, Boundary::ZeroPad, (0.0, 0.0), (1.0, 1.0)).unwrap()
    };
    let r64 = ccr_residual(&section(64), hbar).map_err(RunError::Integration)?;
    let r128 = ccr_residual(&section(128), hbar).map_err(RunError::Integration)?;
    below(&mut records, "ccr-residual 128^2", r128, 1e-6);
    let ratio = r64 / r128;
    above(&mut records, "ccr-convergence-ratio (>= 16·0.7)", ratio, 16.0 * 0.7);
    below(&mut records, "ccr-convergence-ratio (<= 16·1.3)", ratio, 16.0 * 1.3);

    // Polarization residuals: exact zero on profiles, the Gaussian moment,
    // and loss of polarization under one prequantum evolution step. These
    // run on periodic grids, where a p-independent section wraps seamlessly.
    let polarized = SectionGrid::polarized(
        (-8.0, 8.0, -8.0, 8.0),
        128,
        128,
        Boundary::Periodic,
        |q| Complex64::new((-q * q / 2.0).exp(), 0.0),
    )
    .unwrap();
    let rp = polarization_residual(&polarized).map_err(RunError::Integration)?;
    below(&mut records, "polarization-residual polarized-section", rp, 1e-12);
    let gaussian = SectionGrid::gaussian(
        (-8.0, 8.0, -8.0, 8.0),
        256,
        256,
        Boundary::Periodic,
        (0.0, 0.0),
        (1.0, 1.0),
    )
    .unwrap();
    let rg = polarization_residual(&gaussian).map_err(RunError::Integration)?;
    let exact = 1.0 / (2.0f64).sqrt();
    below(&mut records, "polarization-residual gaussian vs moment", (rg - exact).abs(), 1e-4);
    let stepped = harmonic_prequantum_step(&polarized, hbar, 0.05);
    let rs = polarization_residual(&stepped).map_err(RunError::Integration)?;
    above(&mut records, "polarization broken by evolution", rs, 1e-2);

    // Jacobi identity on random cubic triples.
    let mut worst_jacobi = 0.0f64;
    for trial in 0..6u64 {
        let f = random_cubic(seed ^ (0x100 + trial));
        let g = random_cubic(seed ^ (0x200 + trial));
        let k = random_cubic(seed ^ (0x300 + trial));
        let pt = &sample_points(2, 1, seed ^ (0x400 + trial))[0];
        let scaled: Vec<f64> = pt.iter().map(|x| 0.45 * x).collect();
        let r = jacobi_residual(&f, &g, &k, &scaled, 1e-3).map_err(RunError::Integration)?;
        worst_jacobi = worst_jacobi.max(r);
    }
    below(&mut records, "jacobi-identity residual", worst_jacobi, 1e-7);

    // Flux integrality: the torus with side² = 4π carries two flux quanta;
    // closed immersed surfaces carry none.
    let side = (4.0 * std::f64::consts::PI).sqrt();
    let torus = kostant_flux(&SurfaceMesh::flat_torus(1, side, 16)).map_err(RunError::Integration)?;
    below(&mut records, "torus-flux equals 2", (torus.flux_over_2pi - 2.0).abs(), 1e-8);
    below(&mut records, "torus-flux integrality", torus.integrality_residual, 1e-8);
    let sphere = kostant_flux(&SurfaceMesh::sphere_immersion(1, &[0.2, -0.4], 1.3, 32))
        .map_err(RunError::Integration)?;
    below(&mut records, "closed-surface-flux vanishes", sphere.flux_over_2pi.abs(), 1e-10);
    let degenerate = kostant_flux(&SurfaceMesh::degenerate(1)).map_err(RunError::Integration)?;
    below(&mut records, "degenerate-mesh flux", degenerate.flux_over_2pi.abs(), 0.0);

    for r in &records {
        manifest.add_check(
            r.name.clone(),
            r.pass,
            format!("value {:.3e} ({} {:.3e})", r.value, r.sense, r.threshold),
        );
    }
    let path = out_dir.join("checks.json");
    crate::output::write_json(
        &path,
        &ChecksFile {
            config_hash: &hash,
            checks: &records,
        },
    )
    .map_err(RunError::Io)?;
    manifest.add_output(path);
    manifest.finalize();
    manifest.write(out_dir).map_err(RunError::Io)?;
    if !quiet {
        for c in &manifest.checks {
            println!("[{}] {} - {}", if c.pass { "pass" } else { "FAIL" }, c.name, c.detail);
        }
        println!("checks: {}", manifest.status);
    }
    Ok(manifest)
}
