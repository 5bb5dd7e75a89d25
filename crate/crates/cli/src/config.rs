//! Experiment configuration: TOML file, command-line overrides, defaults.

use std::path::{Path, PathBuf};

use clap::Args;
use serde::{Deserialize, Serialize};

use bdf_girg::sampler::{DEFAULT_ALPHA, DEFAULT_BETA, DEFAULT_C};
use bdf_girg::two_round::{DEFAULT_DELTA, DEFAULT_L};
use bdf_girg::{parse, BdfExpr, GirgParams};

use crate::CliError;

/// Flags shared by every command. Anything given here wins over `--config`.
#[derive(Debug, Clone, Default, Args)]
pub struct SharedArgs {
    /// Boolean distance function, e.g. "min(x1,x2)".
    #[arg(long)]
    pub bdf: Option<String>,
    /// Number of vertices (default 1024).
    #[arg(long)]
    pub n: Option<usize>,
    /// Power-law exponent, in (2, 3) (default 2.5).
    #[arg(long)]
    pub beta: Option<f64>,
    /// Decay exponent, above 1 (default 1.5).
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Connection constant, in (0, 1] (default 0.5).
    #[arg(long)]
    pub c: Option<f64>,
    /// Base seed (default 0).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory (default out).
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Side fraction for cuts and the two-round growth slack.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Cell occupancy parameter of the two-round partition.
    #[arg(long)]
    pub l: Option<f64>,
    /// TOML file with any of the fields of the resolved config.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Replace existing output files instead of failing.
    #[arg(long)]
    pub force: bool,
}

/// Command-specific options that may also come from the config file.
#[derive(Debug, Clone, Default)]
pub struct ExtraArgs {
    pub n_grid: Option<Vec<usize>>,
    pub seeds: Option<usize>,
    pub samples: Option<usize>,
    pub radii: Option<Vec<f64>>,
    pub epsilons: Option<Vec<f64>>,
    pub input: Option<PathBuf>,
}

/// Contents of a `--config` file; every field is optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub bdf: Option<String>,
    pub n: Option<usize>,
    pub beta: Option<f64>,
    pub alpha: Option<f64>,
    pub c: Option<f64>,
    pub seed: Option<u64>,
    pub out_dir: Option<PathBuf>,
    pub delta: Option<f64>,
    pub l: Option<f64>,
    pub n_grid: Option<Vec<usize>>,
    pub seeds: Option<usize>,
    pub samples: Option<usize>,
    pub radii: Option<Vec<f64>>,
    pub epsilons: Option<Vec<f64>>,
    pub input: Option<PathBuf>,
}

/// The fully resolved configuration, persisted next to every output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub command: String,
    pub bdf: String,
    pub n: usize,
    pub beta: f64,
    pub alpha: f64,
    pub c: f64,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub delta: f64,
    pub l: f64,
    pub n_grid: Vec<usize>,
    pub seeds: usize,
    pub samples: usize,
    pub radii: Vec<f64>,
    pub epsilons: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
}

pub const DEFAULT_BDF: &str = "min(x1,x2)";
pub const DEFAULT_N: usize = 1024;

impl ExperimentConfig {
    pub fn resolve(command: &str, shared: &SharedArgs, extra: ExtraArgs) -> Result<Self, CliError> {
        let file = match &shared.config {
            Some(path) => load(path)?,
            None => ConfigFile::default(),
        };
        let cfg = ExperimentConfig {
            command: command.to_string(),
            bdf: shared.bdf.clone().or(file.bdf).unwrap_or_else(|| DEFAULT_BDF.into()),
            n: shared.n.or(file.n).unwrap_or(DEFAULT_N),
            beta: shared.beta.or(file.beta).unwrap_or(DEFAULT_BETA),
            alpha: shared.alpha.or(file.alpha).unwrap_or(DEFAULT_ALPHA),
            c: shared.c.or(file.c).unwrap_or(DEFAULT_C),
            seed: shared.seed.or(file.seed).unwrap_or(0),
            out_dir: shared.out_dir.clone().or(file.out_dir).unwrap_or_else(|| "out".into()),
            delta: shared.delta.or(file.delta).unwrap_or(DEFAULT_DELTA),
            l: shared.l.or(file.l).unwrap_or(DEFAULT_L),
            n_grid: extra.n_grid.or(file.n_grid).unwrap_or_else(|| vec![1024, 2048, 4096]),
            seeds: extra.seeds.or(file.seeds).unwrap_or(1),
            samples: extra.samples.or(file.samples).unwrap_or(1_000_000),
            radii: extra
                .radii
                .or(file.radii)
                .unwrap_or_else(|| (1..=12).map(|k| 2f64.powi(-k)).collect()),
            epsilons: extra
                .epsilons
                .or(file.epsilons)
                .unwrap_or_else(|| vec![0.25, 0.1, 0.01, 0.001]),
            input: extra.input.or(file.input),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        self.expr()?;
        self.params()?;
        let v = |msg: String| Err(CliError::Validation(msg));
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return v(format!("delta = {} must lie in (0, 1)", self.delta));
        }
        if !(self.l > 0.0 && self.l <= 1.0) {
            return v(format!("l = {} must lie in (0, 1]", self.l));
        }
        if self.n_grid.is_empty() || self.n_grid.contains(&0) {
            return v("n-grid must be a non-empty list of positive sizes".into());
        }
        for &n in &self.n_grid {
            GirgParams::new(n, self.beta, self.alpha, self.c, self.seed)?;
        }
        if self.seeds == 0 {
            return v("seeds must be at least 1".into());
        }
        if self.radii.iter().any(|r| !(*r > 0.0 && r.is_finite())) {
            return v("radii must be positive".into());
        }
        if self.epsilons.iter().any(|e| !(*e > 0.0 && *e <= 0.25)) {
            return v("epsilons must lie in (0, 1/4]".into());
        }
        Ok(())
    }

    pub fn expr(&self) -> Result<BdfExpr, CliError> {
        parse(&self.bdf).map_err(|e| CliError::Validation(format!("--bdf {:?}: {e}", self.bdf)))
    }

    pub fn params(&self) -> Result<GirgParams, CliError> {
        Ok(GirgParams::new(self.n, self.beta, self.alpha, self.c, self.seed)?)
    }

    pub fn params_for(&self, n: usize, seed: u64) -> Result<GirgParams, CliError> {
        Ok(GirgParams::new(n, self.beta, self.alpha, self.c, seed)?)
    }

    /// `seed, seed + 1, ..` (`seeds` values).
    pub fn seed_list(&self) -> Vec<u64> {
        (0..self.seeds as u64).map(|i| self.seed.wrapping_add(i)).collect()
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }
}

fn load(path: &Path) -> Result<ConfigFile, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.toml");
        std::fs::write(&path, "n = 500\nseed = 4\nbdf = \"max(x1,x2)\"\n").unwrap();
        let shared = SharedArgs {
            n: Some(64),
            config: Some(path),
            ..Default::default()
        };
        let cfg = ExperimentConfig::resolve("generate", &shared, ExtraArgs::default()).unwrap();
        assert_eq!((cfg.n, cfg.seed, cfg.bdf.as_str()), (64, 4, "max(x1,x2)"));
        let back: ExperimentConfig = toml::from_str(&cfg.to_toml()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn unknown_keys_and_bad_values_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.toml");
        std::fs::write(&path, "colour = 3\n").unwrap();
        let shared = SharedArgs {
            config: Some(path),
            ..Default::default()
        };
        assert!(matches!(
            ExperimentConfig::resolve("generate", &shared, ExtraArgs::default()),
            Err(CliError::Validation(_))
        ));
        let shared = SharedArgs {
            beta: Some(3.5),
            ..Default::default()
        };
        assert!(matches!(
            ExperimentConfig::resolve("generate", &shared, ExtraArgs::default()),
            Err(CliError::Validation(_))
        ));
    }
}
