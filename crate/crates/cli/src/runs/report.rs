//! Render a human-readable report from a run directory.

use crate::manifest::RunManifest;
use crate::runs::RunError;
use std::fmt::Write as _;
use std::path::Path;

pub fn run_report(dir: &Path, quiet: bool) -> Result<String, RunError> {
    let manifest_path = dir.join("manifest.json");
    let text = std::fs::read_to_string(&manifest_path).map_err(RunError::Io)?;
    let manifest: RunManifest =
        serde_json::from_str(&text).map_err(|e| RunError::Io(std::io::Error::other(e)))?;

    let mut out = String::new();
    writeln!(out, "# Run report").unwrap();
    writeln!(out).unwrap();
    writeln!(out, "- config hash: `{}`", manifest.config_hash).unwrap();
    writeln!(out, "- artifact version: {}", manifest.artifact_version).unwrap();
    writeln!(out, "- status: **{}**", manifest.status).unwrap();
    writeln!(
        out,
        "- wall time: {} ms",
        manifest.finished_unix_ms.saturating_sub(manifest.started_unix_ms)
    )
    .unwrap();
    writeln!(out).unwrap();
    writeln!(out, "## Checks").unwrap();
    writeln!(out).unwrap();
    for c in &manifest.checks {
        writeln!(
            out,
            "- [{}] {} — {}",
            if c.pass { "pass" } else { "FAIL" },
            c.name,
            c.detail
        )
        .unwrap();
    }
    writeln!(out).unwrap();
    writeln!(out, "## Outputs").unwrap();
    writeln!(out).unwrap();
    for p in &manifest.outputs {
        writeln!(out, "- `{}`", p.display()).unwrap();
    }

    let report_path = dir.join("report.md");
    std::fs::write(&report_path, &out).map_err(RunError::Io)?;
    if !quiet {
        print!("{out}");
        println!("(written to {})", report_path.display());
    }
    Ok(out)
}
