//! Deterministic report assembly and number formatting.
//!
//! Text reports print numbers to 6 decimals; CSV files carry 15 significant
//! digits with LF line endings. No timestamps or environment-dependent data
//! appear anywhere, so identical inputs render byte-identical output.

use sha2::{Digest, Sha256};
use std::io::Write;
use std::path::Path;

/// Fixed 6-decimal rendering for text reports.
pub fn fmt6(v: f64) -> String {
    format!("{v:.6}")
}

/// 15-significant-digit rendering for CSV cells.
pub fn fmt_sig15(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else {
        format!("{v:.14e}")
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

/// Line-oriented report builder with the standard header.
pub struct Report {
    lines: Vec<String>,
}

impl Report {
    pub fn new(command_echo: &str, input_digest: Option<&str>) -> Self {
        let mut lines = Vec::new();
        lines.push(format!("# ageclass {}", env!("CARGO_PKG_VERSION")));
        lines.push(format!("# command: {command_echo}"));
        lines.push(format!(
            "# input-sha256: {}",
            input_digest.unwrap_or("none")
        ));
        Self { lines }
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    pub fn kv(&mut self, key: &str, value: impl std::fmt::Display) {
        self.lines.push(format!("{key}: {value}"));
    }

    pub fn render(&self) -> String {
        let mut out = self.lines.join("\n");
        out.push('\n');
        out
    }
}

/// Writes a CSV file with a header row and LF line endings.
pub fn write_csv(
    path: &Path,
    header: &[&str],
    rows: &[Vec<String>],
) -> std::io::Result<()> {
    let mut buf = String::new();
    buf.push_str(&header.join(","));
    buf.push('\n');
    for row in rows {
        buf.push_str(&row.join(","));
        buf.push('\n');
    }
    let mut file = std::fs::File::create(path)?;
    file.write_all(buf.as_bytes())
}
