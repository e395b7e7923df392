//! Experiment configuration, CSV/JSON emission and the verification
//! suite behind the `speclog` command-line tool.

mod commands;
mod csvfmt;
pub mod verify;

pub use commands::{cmd_asymptotics, cmd_bounds, cmd_cutoff, cmd_solve};
pub use csvfmt::fmt_f64;
pub use verify::{
    cmd_verify, normalized_report_json, run_verification, run_verification_with, VerificationReport,
};

use crate::bounds::{BoundsError, DomainGeometry};
use crate::coremath::{CoreError, SpectralParams};
use crate::solver::{GalerkinBasis, QuadratureConfig, SolverError, SymbolKind};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("i/o failure at {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("configuration error: {0}")]
    Config(String),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub(crate) fn io_err(path: &std::path::Path, source: std::io::Error) -> HarnessError {
    HarnessError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Which multiplier `cmd solve` assembles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum SymbolChoice {
    #[default]
    FractionalLog,
    Fractional,
}

/// Flat experiment configuration, read from a single JSON document.
///
/// Zero values in the quadrature block mean "derive from the basis"; the
/// seed feeds the randomized property suites only and never the
/// closed-form checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n: u32,
    pub s: f64,
    #[serde(default)]
    pub volume: Option<f64>,
    #[serde(default)]
    pub box_lengths: Option<Vec<f64>>,
    pub basis_size: u32,
    pub k_max: u32,
    #[serde(default)]
    pub symbol: SymbolChoice,
    #[serde(default)]
    pub fractional_order: Option<f64>,
    #[serde(default)]
    pub cutoff_radius: f64,
    #[serde(default)]
    pub points_per_axis: u32,
    #[serde(default = "default_tail_order")]
    pub tail_order: u32,
    #[serde(default)]
    pub singularity_guard: f64,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub seed: u64,
}

fn default_tail_order() -> u32 {
    6
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("speclog-out")
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            n: 1,
            s: 0.5,
            volume: None,
            box_lengths: Some(vec![std::f64::consts::PI]),
            basis_size: 200,
            k_max: 100,
            symbol: SymbolChoice::default(),
            fractional_order: None,
            cutoff_radius: 0.0,
            points_per_axis: 0,
            tail_order: default_tail_order(),
            singularity_guard: 0.0,
            output_dir: default_output_dir(),
            seed: 0,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json_file(path: &std::path::Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
        let cfg: ExperimentConfig = serde_json::from_str(&text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn params(&self) -> Result<SpectralParams, HarnessError> {
        Ok(SpectralParams::new(self.n, self.s)?)
    }

    pub fn geometry(&self) -> Result<DomainGeometry, HarnessError> {
        match (&self.box_lengths, self.volume) {
            (Some(lengths), maybe_volume) => {
                let geom = DomainGeometry::from_box(lengths)?;
                if let Some(volume) = maybe_volume {
                    if (volume - geom.volume()).abs() > 1e-12 * geom.volume() {
                        return Err(HarnessError::Config(format!(
                            "volume {volume} does not match the box side product {}",
                            geom.volume()
                        )));
                    }
                }
                if geom.dimension() != self.n {
                    return Err(HarnessError::Config(format!(
                        "box has {} sides but n = {}",
                        geom.dimension(),
                        self.n
                    )));
                }
                Ok(geom)
            }
            (None, Some(volume)) => Ok(DomainGeometry::with_volume(self.n, volume)?),
            (None, None) => Err(HarnessError::Config(
                "either box_lengths or volume is required".into(),
            )),
        }
    }

    pub fn basis(&self) -> Result<GalerkinBasis, HarnessError> {
        Ok(GalerkinBasis::new(&self.geometry()?, self.basis_size)?)
    }

    /// Quadrature for the given basis: explicit fields override the
    /// derived defaults field by field.
    pub fn quadrature(&self, basis: &GalerkinBasis) -> QuadratureConfig {
        let auto = QuadratureConfig::auto_for(basis);
        QuadratureConfig {
            cutoff_radius: if self.cutoff_radius > 0.0 {
                self.cutoff_radius
            } else {
                auto.cutoff_radius
            },
            points_per_axis: if self.points_per_axis > 0 {
                self.points_per_axis
            } else {
                auto.points_per_axis
            },
            tail_order: self.tail_order,
            singularity_guard: if self.singularity_guard > 0.0 {
                self.singularity_guard
            } else {
                auto.singularity_guard
            },
        }
    }

    pub fn symbol_kind(&self) -> Result<SymbolKind, HarnessError> {
        match self.symbol {
            SymbolChoice::FractionalLog => Ok(SymbolKind::FractionalLog),
            SymbolChoice::Fractional => {
                let order = self.fractional_order.unwrap_or(self.s);
                Ok(SymbolKind::fractional(order)?)
            }
        }
    }

    /// Structural checks shared by every command; runs before any work.
    pub fn validate(&self) -> Result<(), HarnessError> {
        self.params()?;
        self.geometry()?;
        if self.basis_size < 2 {
            return Err(HarnessError::Config("basis_size must be at least 2".into()));
        }
        if self.k_max == 0 {
            return Err(HarnessError::Config("k_max must be at least 1".into()));
        }
        if self.k_max > self.basis_size / 2 {
            return Err(HarnessError::Config(format!(
                "k_max = {} exceeds the resolved range basis_size/2 = {}",
                self.k_max,
                self.basis_size / 2
            )));
        }
        Ok(())
    }

    /// Create the output directory and echo the configuration (seed
    /// included) next to the tables, so every output directory records its
    /// provenance.
    pub(crate) fn prepare_output(&self) -> Result<(), HarnessError> {
        std::fs::create_dir_all(&self.output_dir).map_err(|e| io_err(&self.output_dir, e))?;
        let echo = self.output_dir.join("run_config.json");
        let text = serde_json::to_string_pretty(self)? + "\n";
        std::fs::write(&echo, text).map_err(|e| io_err(&echo, e))
    }
}
