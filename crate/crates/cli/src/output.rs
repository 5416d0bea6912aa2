//! Deterministic output files: CSV with 17-significant-digit floats and a
//! config-hash comment line, JSON summaries via serde. Numeric outputs carry
//! no timestamps, so a rerun with the same config and seed is byte-identical.

use sha2::{Digest, Sha256};
use std::io::Write;
use std::path::{Path, PathBuf};

/// Hash of the canonical JSON form of the config.
pub fn config_hash<T: serde::Serialize>(cfg: &T) -> String {
    let canonical = serde_json::to_vec(cfg).expect("config serializes");
    let mut hasher = Sha256::new();
    hasher.update(&canonical);
    let digest = hasher.finalize();
    digest.iter().take(16).map(|b| format!("{b:02x}")).collect()
}

/// 17 significant digits, locale-independent.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub struct CsvWriter {
    path: PathBuf,
    buf: Vec<u8>,
}

impl CsvWriter {
    pub fn create(path: PathBuf, hash: &str, columns: &[&str]) -> std::io::Result<Self> {
        let mut buf = Vec::new();
        writeln!(buf, "# config_hash={hash}")?;
        writeln!(buf, "{}", columns.join(","))?;
        Ok(Self { path, buf })
    }

    pub fn row(&mut self, values: &[f64]) -> std::io::Result<()> {
        let line: Vec<String> = values.iter().map(|&v| fmt_float(v)).collect();
        writeln!(self.buf, "{}", line.join(","))
    }

    pub fn row_mixed(&mut self, head: &[String], values: &[f64]) -> std::io::Result<()> {
        let mut cells = head.to_vec();
        cells.extend(values.iter().map(|&v| fmt_float(v)));
        writeln!(self.buf, "{}", cells.join(","))
    }

    pub fn finish(self) -> std::io::Result<PathBuf> {
        std::fs::write(&self.path, &self.buf)?;
        Ok(self.path)
    }
}

pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> std::io::Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_is_stable_and_content_sensitive() {
        let a = serde_json::json!({"x": 1, "y": [1.0, 2.0]});
        let b = serde_json::json!({"x": 1, "y": [1.0, 2.5]});
        assert_eq!(config_hash(&a), config_hash(&a));
        assert_ne!(config_hash(&a), config_hash(&b));
    }

    #[test]
    fn float_format_has_17_significant_digits() {
        let s = fmt_float(std::f64::consts::PI);
        assert!(s.starts_with("3.1415926535897931"), "{s}");
        // round-trips exactly
        let back: f64 = s.parse().unwrap();
        assert_eq!(back, std::f64::consts::PI);
    }
}
