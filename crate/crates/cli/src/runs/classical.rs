//! The classical scan: per-ℏ extended trajectories against the shared
//! reference flow, deviation metrics and the scaling report.

use crate::config::ScenarioConfig;
use crate::manifest::RunManifest;
use crate::output::{config_hash, CsvWriter};
use crate::runs::RunError;
use geoq::dynamics::{
    deviation_metrics, from_guiding, integrate_extended, reference_flow, report_from_points,
    scan_momenta, ScalingPoint, TrajectoryRecord,
};
use rayon::prelude::*;
use serde::Serialize;
use std::path::{Path, PathBuf};

#[derive(Serialize)]
struct ScalingFile<'a> {
    config_hash: &'a str,
    scenario: &'a str,
    report: &'a geoq::dynamics::ScalingReport,
}

pub fn run_classical_scan(
    cfg: &ScenarioConfig,
    out_dir: &Path,
    quiet: bool,
) -> Result<RunManifest, RunError> {
    let hash = config_hash(cfg);
    let mut manifest = RunManifest::start(hash.clone());
    std::fs::create_dir_all(out_dir).map_err(RunError::Io)?;

    let model = cfg.phase_model_with_gauge()?;
    let int_cfg = cfg.integrator_config();
    let center0 = cfg.center();
    let t_final = cfg.t_final;

    let reference = reference_flow(&center0, t_final, &model, &int_cfg)
        .map_err(RunError::Integration)?;

    struct PointOutcome {
        hbar: f64,
        result: Result<(ScalingPoint, PathBuf), geoq::GeoqError>,
    }

    let outcomes: Vec<PointOutcome> = cfg
        .hbar
        .par_iter()
        .enumerate()
        .map(|(idx, &hbar)| {
            let run = || -> Result<(ScalingPoint, PathBuf), geoq::GeoqError> {
                let mut momenta = scan_momenta(&model, &center0);
                let scale = cfg.j0.sqrt();
                for m in &mut momenta {
                    *m *= scale;
                }
                let state0 = from_guiding(&center0, &momenta, &model, hbar);
                let traj = integrate_extended(&state0, t_final, &model, hbar, &int_cfg)?;
                let metrics = deviation_metrics(&traj, &reference)?;
                let path = out_dir.join(format!("trajectory_{idx:02}.csv"));
                write_trajectory_csv(&path, &hash, &traj)
                    .map_err(|e| geoq::GeoqError::Precondition(format!("io: {e}")))?;
                Ok((
                    ScalingPoint {
                        hbar,
                        metrics,
                        energy_drift: traj.stats.energy_drift,
                        stats: traj.stats,
                    },
                    path,
                ))
            };
            PointOutcome {
                hbar,
                result: run(),
            }
        })
        .collect();

    let mut points = Vec::new();
    let mut any_failed = false;
    for outcome in outcomes {
        match outcome.result {
            Ok((point, path)) => {
                manifest.add_check(
                    format!("integrate hbar={}", outcome.hbar),
                    true,
                    format!(
                        "energy drift {:.3e} (steps {}, refinements {})",
                        point.energy_drift, point.stats.steps, point.stats.refinements
                    ),
                );
                manifest.add_output(path);
                points.push(point);
            }
            Err(err) => {
                any_failed = true;
                manifest.add_check(format!("integrate hbar={}", outcome.hbar), false, err.to_string());
            }
        }
    }

    // Per-point metrics table.
    let metrics_path = out_dir.join("metrics.csv");
    let mut w = CsvWriter::create(
        metrics_path.clone(),
        &hash,
        &[
            "hbar",
            "sup_xi_vs_ref",
            "sup_center_vs_ref",
            "sup_xi_vs_center",
            "action_drift",
            "center_drift",
            "energy_drift",
            "steps",
            "refinements",
        ],
    )
    .map_err(RunError::Io)?;
    let mut sorted = points.clone();
    sorted.sort_by(|a, b| b.hbar.partial_cmp(&a.hbar).unwrap());
    for p in &sorted {
        w.row(&[
            p.hbar,
            p.metrics.sup_xi_vs_ref,
            p.metrics.sup_center_vs_ref,
            p.metrics.sup_xi_vs_center,
            p.metrics.action_drift,
            p.metrics.center_drift,
            p.energy_drift,
            p.stats.steps as f64,
            p.stats.refinements as f64,
        ])
        .map_err(RunError::Io)?;
    }
    manifest.add_output(w.finish().map_err(RunError::Io)?);

    // Scaling report whenever the grid is rich enough for fits.
    if points.len() >= 3 {
        match report_from_points(points.clone()) {
            Ok(report) => {
                let path = out_dir.join("scaling.json");
                crate::output::write_json(
                    &path,
                    &ScalingFile {
                        config_hash: &hash,
                        scenario: &cfg.scenario,
                        report: &report,
                    },
                )
                .map_err(RunError::Io)?;
                manifest.add_output(path);
                if !report.fit_xi_vs_center.degenerate {
                    manifest.add_check(
                        "scaling-fit",
                        report.fit_xi_vs_center.residual_rms < 0.1,
                        format!(
                            "sup|xi-X| exponent {:.3}, residual {:.3}",
                            report.fit_xi_vs_center.exponent, report.fit_xi_vs_center.residual_rms
                        ),
                    );
                }
            }
            Err(err) => {
                manifest.add_check("scaling-fit", false, err.to_string());
            }
        }
    }

    // Homogeneous models freeze the guiding center.
    if matches!(
        cfg.model_kind(),
        geoq::phase_space::ModelKind::Constant { .. }
    ) {
        for p in &sorted {
            manifest.add_check(
                format!("freeze-center hbar={}", p.hbar),
                p.metrics.center_drift <= 1e-6,
                format!("center drift {:.3e}", p.metrics.center_drift),
            );
        }
    }

    manifest.finalize();
    manifest.write(out_dir).map_err(RunError::Io)?;
    if !quiet {
        for c in &manifest.checks {
            println!("[{}] {} - {}", if c.pass { "pass" } else { "FAIL" }, c.name, c.detail);
        }
        println!("classical scan `{}`: {}", cfg.scenario, manifest.status);
    }
    if any_failed {
        return Err(RunError::PartialIntegration(manifest));
    }
    Ok(manifest)
}

fn write_trajectory_csv(
    path: &Path,
    hash: &str,
    traj: &TrajectoryRecord,
) -> std::io::Result<()> {
    let dim = traj.states[0].dim();
    let mut columns: Vec<String> = vec!["t".into()];
    for i in 1..=dim {
        columns.push(format!("xi{i}"));
    }
    for i in 1..=dim {
        columns.push(format!("X{i}"));
    }
    columns.push("J".into());
    columns.push("H".into());
    columns.push("energy_drift".into());
    let col_refs: Vec<&str> = columns.iter().map(|s| s.as_str()).collect();
    let mut w = CsvWriter::create(path.to_path_buf(), hash, &col_refs)?;
    let h0 = traj.energy[0];
    for i in 0..traj.len() {
        let mut row = Vec::with_capacity(2 * dim + 4);
        row.push(traj.times[i]);
        row.extend_from_slice(&traj.states[i].xi);
        row.extend_from_slice(&traj.guiding[i].center);
        row.push(traj.guiding[i].action);
        row.push(traj.energy[i]);
        row.push((traj.energy[i] - h0).abs() / h0.abs().max(1.0));
        w.row(&row)?;
    }
    w.finish()?;
    Ok(())
}
