//! Power experiment configuration (TOML).
//!
//! ```toml
//! n = 2000                       # or a list
//! h = ["gauss-scale:3.0", "laplace:4"]   # "none" runs a size experiment
//! alpha = 0.05                   # or a list
//! statistics = ["kolmogorov", "omega2"]
//! coeffs = [0.5]
//! mean = 0.0
//! sigma0 = 1.0
//! reps = 2000
//! seed = 42
//! grid = 512
//! limit_reps = 20000
//! # burn_in = 1100
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> OneOrMany<T> {
    pub fn to_vec(&self) -> Vec<T> {
        match self {
            OneOrMany::One(x) => vec![x.clone()],
            OneOrMany::Many(xs) => xs.clone(),
        }
    }
}

fn default_alpha() -> OneOrMany<f64> {
    OneOrMany::One(0.05)
}

fn default_statistics() -> Vec<String> {
    vec!["kolmogorov".into(), "omega2".into()]
}

fn default_sigma0() -> f64 {
    1.0
}

fn default_reps() -> usize {
    1000
}

fn default_grid() -> usize {
    arnorm_core::limit_law::DEFAULT_GRID
}

fn default_limit_reps() -> usize {
    20_000
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct PowerConfig {
    pub n: OneOrMany<usize>,
    pub h: OneOrMany<String>,
    #[serde(default = "default_alpha")]
    pub alpha: OneOrMany<f64>,
    #[serde(default = "default_statistics")]
    pub statistics: Vec<String>,
    #[serde(default)]
    pub coeffs: Vec<f64>,
    #[serde(default)]
    pub mean: f64,
    #[serde(default = "default_sigma0")]
    pub sigma0: f64,
    #[serde(default = "default_reps")]
    pub reps: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_grid")]
    pub grid: usize,
    #[serde(default = "default_limit_reps")]
    pub limit_reps: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub burn_in: Option<usize>,
}

impl PowerConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| CliError::Usage(format!("invalid power config: {e}")))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    /// Fully resolved config, suitable for embedding in an output header.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }
}
