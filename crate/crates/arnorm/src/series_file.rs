//! Series files: one decimal number per line. Blank lines and everything
//! after a `#` are ignored.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{CliError, Result};

pub fn parse_series(text: &str) -> Result<Vec<f64>> {
    let mut values = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let value: f64 = content.parse().map_err(|_| {
            CliError::Usage(format!("line {}: cannot parse {content:?} as a number", lineno + 1))
        })?;
        if !value.is_finite() {
            return Err(CliError::Usage(format!("line {}: non-finite value {content}", lineno + 1)));
        }
        values.push(value);
    }
    Ok(values)
}

pub fn read_series(path: &Path) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_series(&text)
}

/// Header lines (each prefixed with `# `) followed by the values in
/// shortest round-trip decimal form.
pub fn format_series(header: &[String], values: &[f64]) -> String {
    let mut out = String::new();
    for line in header {
        let _ = writeln!(out, "# {line}");
    }
    for v in values {
        let _ = writeln!(out, "{v}");
    }
    out
}
