//! CSV output of power experiments.

use serde::Serialize;

use crate::error::{CliError, Result};

/// One row per `(n, H, statistic, alpha)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerRow {
    pub n: usize,
    pub h: String,
    pub statistic: String,
    pub alpha: f64,
    pub empirical_power: f64,
    pub stderr: f64,
    pub asymptotic_power: f64,
    pub asymptotic_stderr: f64,
    pub critical_value: f64,
    pub n_reps: usize,
    pub seed: u64,
    /// `false` when `H` has no Lipschitz density, i.e. the local-power limit
    /// is not guaranteed to apply.
    pub lipschitz_density: bool,
}

/// `#`-prefixed header lines followed by the CSV table.
pub fn format_csv(header: &[String], rows: &[PowerRow]) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer
            .serialize(row)
            .map_err(|e| CliError::Usage(format!("csv: {e}")))?;
    }
    let body = writer
        .into_inner()
        .map_err(|e| CliError::Usage(format!("csv: {e}")))?;
    let mut out = String::new();
    for line in header {
        out.push_str("# ");
        out.push_str(line);
        out.push('\n');
    }
    out.push_str(&String::from_utf8(body).expect("csv output is utf-8"));
    Ok(out)
}

/// Parses CSV produced by [`format_csv`], skipping header comments.
pub fn parse_csv(text: &str) -> Result<Vec<csv::StringRecord>> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    reader
        .records()
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| CliError::Usage(format!("csv: {e}")))
}
