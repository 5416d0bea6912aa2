//! The quantum spectrum run: operator assembly, low-lying eigenpairs, band
//! report and the comparison against the effective prediction.

use crate::config::ScenarioConfig;
use crate::manifest::RunManifest;
use crate::output::{config_hash, CsvWriter};
use crate::runs::RunError;
use geoq::phase_space::ModelKind;
use geoq::quantum::{
    band_analysis, build_hamiltonian, compare_bands, effective_prediction, lowest_spectrum,
    oracle_h_spectrum, BandReport, SpectrumResult,
};
use serde::Serialize;
use std::path::Path;

/// Width of the reported lowest-band table.
pub const BAND_TABLE_STATES: usize = 10;
/// Comparison tolerances: levels, splittings, gap.
pub const LEVEL_TOL: f64 = 0.25;
pub const SPLITTING_TOL: f64 = 0.25;
pub const GAP_TOL: f64 = 0.25;

#[derive(Serialize)]
struct BandsFile<'a> {
    config_hash: &'a str,
    scenario: &'a str,
    hbar: f64,
    report: &'a BandReport,
}

#[derive(Serialize)]
struct ComparisonFile<'a> {
    config_hash: &'a str,
    scenario: &'a str,
    hbar: f64,
    oracle: &'a geoq::quantum::OracleSpectrum,
    predicted_lowest_band: &'a [f64],
    predicted_gap: f64,
    comparison: &'a geoq::quantum::BandComparison,
}

/// Eigenpair budget: enough to reach the bottom of the second band.
///
/// Confining mechanical models fill band 0 with ≈ 2·E₀/ℏ ladder states
/// below the bottom of band 1; the flat model fills it with ≈ (2R)²/(2πℏ)
/// near-degenerate bulk states plus edge states, and the third band is
/// wanted there.
pub fn eigenpair_budget(cfg: &ScenarioConfig, hbar: f64, oracle0: f64) -> usize {
    if cfg.eigenpairs > 0 {
        return cfg.eigenpairs;
    }
    let m = match cfg.model_kind() {
        ModelKind::Constant { .. } => {
            let r = cfg.grid.map(|g| g.half_width).unwrap_or(1.0);
            let per_band = (2.0 * r) * (2.0 * r) / (2.0 * std::f64::consts::PI * hbar);
            (3.2 * per_band).ceil() as usize + 8
        }
        // Ordering corrections push the second band up by O(hbar) relative
        // to (3/2)·E0, so the ladder below it is longer than the leading
        // estimate 2·E0/hbar.
        _ => (2.4 * oracle0 / hbar).ceil() as usize + 8,
    };
    m.clamp(16, 140)
}

pub fn run_quantum_spectrum(
    cfg: &ScenarioConfig,
    out_dir: &Path,
    quiet: bool,
) -> Result<RunManifest, RunError> {
    if cfg.n != 1 {
        return Err(RunError::Config(crate::config::ConfigError::Invalid(
            format!(
                "quantum runs are restricted to n = 1 (got n = {}); higher n is out of scope",
                cfg.n
            ),
        )));
    }
    let hash = config_hash(cfg);
    let mut manifest = RunManifest::start(hash.clone());
    std::fs::create_dir_all(out_dir).map_err(RunError::Io)?;

    let model = cfg.phase_model()?;
    let grid = cfg.grid_spec()?;
    let mut solver_failed = false;

    for (idx, &hbar) in cfg.hbar.iter().enumerate() {
        let oracle = oracle_h_spectrum(&model, hbar, BAND_TABLE_STATES)
            .map_err(RunError::Integration)?;
        let pairs = eigenpair_budget(cfg, hbar, oracle.values[0]);
        let op = build_hamiltonian(grid, &model, hbar, cfg.gauge)
            .map_err(RunError::Integration)?;
        let sym = op.matrix.hermitian_residual();
        manifest.add_check(
            format!("operator-hermitian hbar={hbar}"),
            sym <= 1e-12,
            format!("max |A - A*| = {sym:.2e}, nnz = {}", op.matrix.nnz()),
        );

        let spectrum = match lowest_spectrum(&op, pairs, cfg.seed) {
            Ok(s) => s,
            Err(err) => {
                solver_failed = true;
                manifest.add_check(format!("eigensolve hbar={hbar}"), false, err.to_string());
                continue;
            }
        };
        if !spectrum.fully_converged {
            solver_failed = true;
            let converged = spectrum.converged.iter().filter(|&&c| c).count();
            manifest.add_check(
                format!("eigensolve hbar={hbar}"),
                false,
                format!("only {converged}/{pairs} pairs converged; partial results flagged"),
            );
        } else {
            let max_res = spectrum
                .residuals
                .iter()
                .cloned()
                .fold(0.0f64, f64::max);
            manifest.add_check(
                format!("eigensolve hbar={hbar}"),
                max_res <= 1e-8,
                format!(
                    "{pairs} pairs, max residual {max_res:.2e}, {} inverse applies",
                    spectrum.operator_applies
                ),
            );
        }

        let report = band_analysis(&spectrum, &model).map_err(RunError::Integration)?;

        // Eigenvalue table.
        let eig_path = out_dir.join(format!("eigenvalues_{idx:02}.csv"));
        let mut w = CsvWriter::create(
            eig_path.clone(),
            &hash,
            &[
                "index",
                "eigenvalue",
                "residual",
                "fast_index",
                "band",
                "boundary_amplitude",
            ],
        )
        .map_err(RunError::Io)?;
        for i in 0..spectrum.eigenvalues.len() {
            w.row(&[
                i as f64,
                spectrum.eigenvalues[i],
                spectrum.residuals[i],
                report.fast_index[i],
                report.labels[i] as f64,
                spectrum.boundary_decay[i],
            ])
            .map_err(RunError::Io)?;
        }
        manifest.add_output(w.finish().map_err(RunError::Io)?);

        // Band report and prediction comparison.
        let bands_path = out_dir.join(format!("bands_{idx:02}.json"));
        crate::output::write_json(
            &bands_path,
            &BandsFile {
                config_hash: &hash,
                scenario: &cfg.scenario,
                hbar,
                report: &report,
            },
        )
        .map_err(RunError::Io)?;
        manifest.add_output(bands_path);

        let predicted = effective_prediction(&oracle, 0);
        let predicted_gap = oracle.values[0];
        let mut table_report = report.clone();
        truncate_lowest_band(&mut table_report, BAND_TABLE_STATES);
        let comparison = compare_bands(
            &table_report,
            &predicted,
            Some(predicted_gap),
            LEVEL_TOL,
            SPLITTING_TOL,
            GAP_TOL,
        )
        .map_err(RunError::Integration)?;
        let cmp_path = out_dir.join(format!("comparison_{idx:02}.json"));
        crate::output::write_json(
            &cmp_path,
            &ComparisonFile {
                config_hash: &hash,
                scenario: &cfg.scenario,
                hbar,
                oracle: &oracle,
                predicted_lowest_band: &predicted,
                predicted_gap,
                comparison: &comparison,
            },
        )
        .map_err(RunError::Io)?;
        manifest.add_output(cmp_path);

        scenario_checks(cfg, hbar, &spectrum, &table_report, &mut manifest);

        if !quiet {
            println!(
                "hbar={hbar}: {} pairs, lowest {:.6}, gap {:?}",
                spectrum.eigenvalues.len(),
                spectrum.eigenvalues[0],
                table_report.inter_band_gap
            );
        }
    }

    manifest.finalize();
    manifest.write(out_dir).map_err(RunError::Io)?;
    if !quiet {
        for c in &manifest.checks {
            println!("[{}] {} - {}", if c.pass { "pass" } else { "FAIL" }, c.name, c.detail);
        }
        println!("quantum spectrum `{}`: {}", cfg.scenario, manifest.status);
    }
    if solver_failed {
        return Err(RunError::Eigensolver(manifest));
    }
    Ok(manifest)
}

/// Keep only the first `count` states of the lowest band so splitting and
/// level tables have a fixed width.
fn truncate_lowest_band(report: &mut BandReport, count: usize) {
    if let Some(band) = report.bands.iter_mut().find(|b| b.k == 0) {
        band.indices.truncate(count);
        band.eigenvalues.truncate(count);
        report.lowest_band_splittings = band
            .eigenvalues
            .windows(2)
            .map(|w| w[1] - w[0])
            .collect();
        if let Some(gap) = report.inter_band_gap {
            let max_split = report
                .lowest_band_splittings
                .iter()
                .cloned()
                .fold(f64::MIN, f64::max);
            report.gap_to_max_splitting = if max_split > 0.0 {
                Some(gap / max_split)
            } else {
                None
            };
        }
    }
}

fn scenario_checks(
    cfg: &ScenarioConfig,
    hbar: f64,
    spectrum: &SpectrumResult,
    report: &BandReport,
    manifest: &mut RunManifest,
) {
    match cfg.model_kind() {
        ModelKind::Constant { c } => {
            // Flat Landau levels (k + ½)·c, hbar-independent, from the
            // cleanly classified minimum of each band.
            for k in 0..3usize {
                let target = (k as f64 + 0.5) * c;
                let min = clean_band_minimum(spectrum, report, k);
                match min {
                    Some(value) => {
                        let rel = (value - target).abs() / target;
                        manifest.add_check(
                            format!("landau-band k={k} hbar={hbar}"),
                            rel <= 0.01,
                            format!("band minimum {value:.6} vs {target} (rel {rel:.4})"),
                        );
                    }
                    None => manifest.add_check(
                        format!("landau-band k={k} hbar={hbar}"),
                        false,
                        "band not captured".to_string(),
                    ),
                }
            }
        }
        _ => {
            if let Some(gap) = report.inter_band_gap {
                let max_split = report
                    .lowest_band_splittings
                    .iter()
                    .cloned()
                    .fold(f64::MIN, f64::max);
                if max_split > 0.0 {
                    let ratio = gap / max_split;
                    // Band separation: gap/splitting compatible with the
                    // 1/hbar scale.
                    let floor = 0.5 / hbar * 0.7;
                    manifest.add_check(
                        format!("band-separation hbar={hbar}"),
                        ratio >= floor,
                        format!("gap/splitting = {ratio:.1}, floor {floor:.1}"),
                    );
                }
            }
        }
    }
}

/// Minimum eigenvalue among states cleanly classified into fast level `k`
/// (fast index within 0.25 of k + ½); mixed states near accidental
/// cross-band degeneracies are excluded.
pub fn clean_band_minimum(
    spectrum: &SpectrumResult,
    report: &BandReport,
    k: usize,
) -> Option<f64> {
    let target = k as f64 + 0.5;
    let mut min = f64::INFINITY;
    for i in 0..spectrum.eigenvalues.len() {
        if (report.fast_index[i] - target).abs() <= 0.25 {
            min = min.min(spectrum.eigenvalues[i]);
        }
    }
    if min.is_finite() {
        Some(min)
    } else {
        None
    }
}
