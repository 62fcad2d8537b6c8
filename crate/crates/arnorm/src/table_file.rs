//! Flat-file form of a [`LimitLawTable`]:
//!
//! ```text
//! # arnorm-limit-table
//! # version=0.1.0 kind=kolmogorov grid_size=512 n_reps=100000 seed=42 shift=none
//! # quantile alpha=0.1 value=...
//! 0.4171...
//! ...
//! ```
//!
//! The second line carries the parameters; further `#` lines are
//! informational. Samples are written one per line in shortest round-trip
//! decimal form, so parsing restores them bit for bit.

use std::fmt::Write as _;
use std::path::Path;

use arnorm_core::{quantile, LimitLawTable, StatKind};

use crate::error::{CliError, Result};
use crate::VERSION;

pub const MAGIC: &str = "# arnorm-limit-table";

/// Levels listed in the quantile summary.
pub const SUMMARY_ALPHAS: [f64; 3] = [0.10, 0.05, 0.01];

pub fn format_table(table: &LimitLawTable) -> Result<String> {
    let mut out = String::new();
    let _ = writeln!(out, "{MAGIC}");
    let _ = writeln!(
        out,
        "# version={VERSION} kind={} grid_size={} n_reps={} seed={} shift={}",
        table.kind(),
        table.grid_size(),
        table.n_reps(),
        table.seed(),
        table.shift().unwrap_or("none")
    );
    for alpha in SUMMARY_ALPHAS {
        let _ = writeln!(out, "# quantile alpha={alpha} value={}", quantile(table, alpha)?);
    }
    for s in table.samples() {
        let _ = writeln!(out, "{s}");
    }
    Ok(out)
}

/// Parameters from a table header.
#[derive(Debug, Clone, PartialEq)]
pub struct TableHeader {
    pub version: String,
    pub kind: StatKind,
    pub grid_size: usize,
    pub n_reps: usize,
    pub seed: u64,
    pub shift: Option<String>,
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Usage(format!("invalid limit table: {}", msg.into()))
}

pub fn parse_header(line: &str) -> Result<TableHeader> {
    let body = line.strip_prefix('#').ok_or_else(|| bad("missing parameter line"))?;
    let mut version = None;
    let mut kind = None;
    let mut grid_size = None;
    let mut n_reps = None;
    let mut seed = None;
    let mut shift = None;
    for token in body.split_whitespace() {
        let (key, value) = token
            .split_once('=')
            .ok_or_else(|| bad(format!("malformed header token {token:?}")))?;
        let num_err = |_| bad(format!("bad value for {key}: {value:?}"));
        match key {
            "version" => version = Some(value.to_string()),
            "kind" => {
                kind = Some(StatKind::from_name(value).ok_or_else(|| bad(format!("unknown kind {value:?}")))?)
            }
            "grid_size" => grid_size = Some(value.parse().map_err(num_err)?),
            "n_reps" => n_reps = Some(value.parse().map_err(num_err)?),
            "seed" => seed = Some(value.parse().map_err(num_err)?),
            "shift" => shift = Some(if value == "none" { None } else { Some(value.to_string()) }),
            other => return Err(bad(format!("unknown header key {other:?}"))),
        }
    }
    let missing = |k: &str| bad(format!("header lacks {k}"));
    Ok(TableHeader {
        version: version.ok_or_else(|| missing("version"))?,
        kind: kind.ok_or_else(|| missing("kind"))?,
        grid_size: grid_size.ok_or_else(|| missing("grid_size"))?,
        n_reps: n_reps.ok_or_else(|| missing("n_reps"))?,
        seed: seed.ok_or_else(|| missing("seed"))?,
        shift: shift.ok_or_else(|| missing("shift"))?,
    })
}

pub fn parse_table(text: &str) -> Result<LimitLawTable> {
    let mut lines = text.lines();
    if lines.next().map(str::trim_end) != Some(MAGIC) {
        return Err(bad("missing magic line"));
    }
    let header = parse_header(lines.next().ok_or_else(|| bad("missing parameter line"))?)?;
    let mut samples = Vec::with_capacity(header.n_reps);
    for line in lines {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        samples.push(line.parse::<f64>().map_err(|_| bad(format!("bad sample {line:?}")))?);
    }
    if samples.len() != header.n_reps {
        return Err(bad(format!(
            "header says n_reps={} but the file holds {} samples",
            header.n_reps,
            samples.len()
        )));
    }
    Ok(LimitLawTable::from_parts(
        header.kind,
        header.shift,
        samples,
        header.grid_size,
        header.seed,
    )?)
}

pub fn read_table(path: &Path) -> Result<LimitLawTable> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_table(&text)
}

pub fn write_table(path: &Path, table: &LimitLawTable) -> Result<()> {
    std::fs::write(path, format_table(table)?).map_err(|e| CliError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> LimitLawTable {
        LimitLawTable::from_parts(
            StatKind::OmegaSquare,
            Some("laplace:4@sigma0=1".into()),
            vec![0.1, 1.0 / 3.0, 2.0f64.sqrt(), 1e-17, 0.30000000000000004],
            64,
            u64::MAX,
        )
        .unwrap()
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let t = table();
        let text = format_table(&t).unwrap();
        let back = parse_table(&text).unwrap();
        assert_eq!(back, t);
        for (a, b) in back.samples().iter().zip(t.samples()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
        assert_eq!(format_table(&back).unwrap(), text);
    }

    #[test]
    fn rejects_corrupt_files() {
        let text = format_table(&table()).unwrap();
        assert!(parse_table(&text.replacen("n_reps=5", "n_reps=6", 1)).is_err());
        assert!(parse_table(&text.replacen(MAGIC, "# something", 1)).is_err());
        assert!(parse_table(&text.replacen("kind=omega2", "kind=ad", 1)).is_err());
        assert!(parse_table(&format!("{text}oops\n")).is_err());
    }
}
