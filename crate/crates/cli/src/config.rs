//! File-based configuration (`--config`) and flag/file overlay rules.
//!
//! Every field is optional; a flag given on the command line always wins
//! over the file value, which in turn wins over the built-in default.

use std::path::PathBuf;

use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub alpha: Option<f64>,
    pub alpha_min: Option<f64>,
    pub alpha_max: Option<f64>,
    pub alpha_steps: Option<usize>,
    pub reference: Option<String>,
    pub nu: Option<f64>,
    pub measure: Option<String>,
    pub kind: Option<String>,
    pub family: Option<String>,
    pub eps: Option<f64>,
    pub p_grid: Option<usize>,
    pub lambda: Option<f64>,
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub paper_literal: Option<bool>,
}

impl FileConfig {
    pub fn load(path: Option<&PathBuf>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(FileConfig::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("bad config {}: {e}", path.display())))
    }
}

/// The alpha-grid flags shared by every curve-producing command.
#[derive(Debug, Clone, clap::Args)]
pub struct GridArgs {
    /// Evaluate a single tail level instead of a grid.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Lower end of the alpha grid (default 0.001).
    #[arg(long)]
    pub alpha_min: Option<f64>,
    /// Upper end of the alpha grid (default 0.10).
    #[arg(long)]
    pub alpha_max: Option<f64>,
    /// Number of grid points (default 400).
    #[arg(long)]
    pub alpha_steps: Option<usize>,
}

impl GridArgs {
    /// Ascending evaluation grid after overlaying the file config.
    pub fn resolve(&self, cfg: &FileConfig) -> Result<Vec<f64>, CliError> {
        if let Some(a) = self.alpha.or(cfg.alpha) {
            if !(0.0 < a && a < 1.0) {
                return Err(CliError::Config(format!("alpha {a} outside (0,1)")));
            }
            return Ok(vec![a]);
        }
        let lo = self.alpha_min.or(cfg.alpha_min).unwrap_or(0.001);
        let hi = self.alpha_max.or(cfg.alpha_max).unwrap_or(0.10);
        let n = self.alpha_steps.or(cfg.alpha_steps).unwrap_or(400);
        if !(0.0 < lo && lo < hi && hi < 1.0) {
            return Err(CliError::Config(format!(
                "alpha grid ({lo}, {hi}) must satisfy 0 < min < max < 1"
            )));
        }
        if n < 2 {
            return Err(CliError::Config(format!("alpha_steps {n} must be >= 2")));
        }
        Ok((0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect())
    }
}

/// Resolves an optional flag value against the config-file string field,
/// parsing the latter with the clap value parser so spellings agree.
pub fn overlay_enum<T: clap::ValueEnum + Copy>(
    flag: Option<T>,
    file: Option<&String>,
    default: T,
) -> Result<T, CliError> {
    if let Some(v) = flag {
        return Ok(v);
    }
    match file {
        Some(s) => {
            T::from_str(s, true).map_err(|e| CliError::Config(format!("bad config value '{s}': {e}")))
        }
        None => Ok(default),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_defaults() {
        let g = GridArgs {
            alpha: None,
            alpha_min: None,
            alpha_max: None,
            alpha_steps: None,
        };
        let v = g.resolve(&FileConfig::default()).unwrap();
        assert_eq!(v.len(), 400);
        assert!((v[0] - 0.001).abs() < 1e-15);
        assert!((v[399] - 0.10).abs() < 1e-15);
    }

    #[test]
    fn single_alpha_beats_grid() {
        let g = GridArgs {
            alpha: Some(0.01),
            alpha_min: Some(0.02),
            alpha_max: Some(0.04),
            alpha_steps: Some(7),
        };
        assert_eq!(g.resolve(&FileConfig::default()).unwrap(), vec![0.01]);
    }

    #[test]
    fn flag_overrides_file() {
        let cfg = FileConfig {
            alpha: Some(0.05),
            ..Default::default()
        };
        let g = GridArgs {
            alpha: Some(0.01),
            alpha_min: None,
            alpha_max: None,
            alpha_steps: None,
        };
        assert_eq!(g.resolve(&cfg).unwrap(), vec![0.01]);
        let g = GridArgs {
            alpha: None,
            alpha_min: None,
            alpha_max: None,
            alpha_steps: None,
        };
        assert_eq!(g.resolve(&cfg).unwrap(), vec![0.05]);
    }
}
