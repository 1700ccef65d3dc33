//! Experiment configuration, read from JSON.

use std::path::{Path, PathBuf};

use gapminmax_core::models::{ApsSpec, DiracSpec, Grading};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ModelConfig {
    Dirac {
        nu: f64,
        #[serde(default = "default_kappa")]
        kappa: i32,
        n: usize,
        r_max: f64,
        /// Defaults to quadratic for `nu > 0.7`.
        #[serde(default)]
        grading: Option<Grading>,
    },
    Aps {
        modes: Vec<f64>,
        #[serde(default = "default_length")]
        length_l: f64,
        n: usize,
    },
    Random {
        n_plus: usize,
        n_minus: usize,
        gap_target: f64,
        /// One operator per seed; an empty list is a vacuous campaign.
        seeds: Vec<u64>,
    },
    MatrixFile {
        path: PathBuf,
    },
}

fn default_kappa() -> i32 {
    -1
}

fn default_length() -> f64 {
    1.0
}

fn default_k_max() -> usize {
    1
}

fn default_tol() -> f64 {
    gapminmax_core::minmax::DEFAULT_TOL
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: ModelConfig,
    #[serde(default = "default_k_max")]
    pub k_max: usize,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
    /// Seeds sampling in the verification suites.
    #[serde(default)]
    pub seed: u64,
    /// Grid sizes replacing `n` for the dirac and aps models.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grids: Option<Vec<usize>>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::parse(&e))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads a config file. A relative matrix-file path is taken relative to
    /// the directory of the config.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::read(path, e))?;
        let mut cfg = Self::from_json(&text)?;
        if let ModelConfig::MatrixFile { path: m } = &mut cfg.model {
            if m.is_relative() {
                if let Some(dir) = path.parent() {
                    *m = dir.join(&*m);
                }
            }
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidConfig("tol must be positive".into()));
        }
        if self.k_max == 0 {
            return Err(Error::InvalidConfig("k_max must be at least 1".into()));
        }
        if let Some(g) = &self.grids {
            if g.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidConfig("grids must be strictly increasing".into()));
            }
        }
        Ok(())
    }

    /// Grid sizes for the discretized models: `grids` if given, else `n`.
    pub fn grid_sizes(&self) -> Vec<usize> {
        match (&self.model, &self.grids) {
            (ModelConfig::Dirac { .. } | ModelConfig::Aps { .. }, Some(g)) => g.clone(),
            (ModelConfig::Dirac { n, .. } | ModelConfig::Aps { n, .. }, None) => vec![*n],
            _ => Vec::new(),
        }
    }

    pub fn dirac_spec(&self, n: usize) -> Option<DiracSpec> {
        match &self.model {
            ModelConfig::Dirac { nu, kappa, r_max, grading, .. } => {
                let g = grading.unwrap_or(Grading::default_for(*nu));
                Some(DiracSpec::new(*nu, *kappa, n, *r_max).with_grading(g))
            }
            _ => None,
        }
    }

    pub fn aps_spec(&self, n: usize) -> Option<ApsSpec> {
        match &self.model {
            ModelConfig::Aps { modes, length_l, .. } => Some(ApsSpec { modes: modes.clone(), length_l: *length_l, n }),
            _ => None,
        }
    }
}
