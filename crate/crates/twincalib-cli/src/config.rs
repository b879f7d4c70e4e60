//! Config file handling: a TOML file with optional sections that overlay
//! built-in defaults, plus an effective-config snapshot written next to
//! every run's outputs so results can be reproduced bit-for-bit.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use twincalib::dataset::GenConfig;
use twincalib::experiment::ExperimentConfig;
use twincalib::netsim::{NetworkLayout, SimConfig, SimParams};
use twincalib::objective::PreferenceVector;
use twincalib::optim::Method;
use twincalib::space::{DimensionSpec, SearchSpace};

#[derive(Debug)]
pub struct ConfigError {
    pub context: String,
    pub message: String,
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "config error in {}: {}", self.context, self.message)
    }
}

impl std::error::Error for ConfigError {}

fn cfg_err(context: impl Into<String>, message: impl std::fmt::Display) -> ConfigError {
    ConfigError {
        context: context.into(),
        message: message.to_string(),
    }
}

/// Experiment section as written in the file: methods by name, preferences
/// as weight lists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentSection {
    pub methods: Vec<String>,
    pub preferences: Vec<Vec<f64>>,
    pub alpha: f64,
    pub epsilon_floor: f64,
    pub seeds: Vec<u64>,
    pub iterations: usize,
    pub convergence_tol: f64,
    pub pso: twincalib::optim::PsoConfig,
    pub bo: twincalib::optim::BoConfig,
}

impl Default for ExperimentSection {
    fn default() -> Self {
        let d = ExperimentConfig::default();
        Self {
            methods: d.methods.iter().map(|m| m.name().to_owned()).collect(),
            preferences: d
                .preferences
                .iter()
                .map(|p| p.weights().to_vec())
                .collect(),
            alpha: d.alpha,
            epsilon_floor: d.epsilon_floor,
            seeds: d.seeds,
            iterations: d.iterations,
            convergence_tol: d.convergence_tol,
            pso: d.pso,
            bo: d.bo,
        }
    }
}

impl ExperimentSection {
    pub fn resolve(&self, context: &str) -> Result<ExperimentConfig, ConfigError> {
        let methods = self
            .methods
            .iter()
            .map(|name| {
                name.parse::<Method>()
                    .map_err(|e| cfg_err(format!("{context}: experiment.methods"), e))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let preferences = self
            .preferences
            .iter()
            .enumerate()
            .map(|(i, weights)| {
                PreferenceVector::new(weights.clone()).map_err(|e| {
                    cfg_err(format!("{context}: experiment.preferences[{i}]"), e)
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let cfg = ExperimentConfig {
            methods,
            preferences,
            alpha: self.alpha,
            epsilon_floor: self.epsilon_floor,
            seeds: self.seeds.clone(),
            iterations: self.iterations,
            convergence_tol: self.convergence_tol,
            pso: self.pso,
            bo: self.bo,
        };
        cfg.validate()
            .map_err(|e| cfg_err(format!("{context}: experiment"), e))?;
        Ok(cfg)
    }
}

/// Run-level settings that make snapshots self-contained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default)]
pub struct RunSection {
    pub seed: u64,
    pub data: Option<PathBuf>,
    pub parallel: Option<usize>,
    /// Forward-model environment seed override. When absent, calibration
    /// uses the dataset metadata's seed.
    pub sim_seed: Option<u64>,
}

/// The whole config file. Every section is optional and overlays defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct CliConfig {
    pub space: SpaceSection,
    pub layout: NetworkLayout,
    pub sim: SimConfig,
    pub experiment: ExperimentSection,
    pub gen: GenConfig,
    pub run: RunSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SpaceSection {
    pub dims: Vec<DimensionSpec>,
}

impl Default for SpaceSection {
    fn default() -> Self {
        Self {
            dims: SimParams::search_space().dims().to_vec(),
        }
    }
}

impl CliConfig {
    pub fn load(path: Option<&Path>) -> Result<CliConfig, ConfigError> {
        let Some(path) = path else {
            return Ok(CliConfig::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| cfg_err(path.display().to_string(), e))?;
        toml::from_str(&text).map_err(|e| cfg_err(path.display().to_string(), e))
    }

    pub fn space(&self, context: &str) -> Result<SearchSpace, ConfigError> {
        SearchSpace::new(self.space.dims.clone())
            .map_err(|e| cfg_err(format!("{context}: space.dims"), e))
    }

    pub fn validate(&self, context: &str) -> Result<(), ConfigError> {
        self.space(context)?;
        self.layout
            .validate()
            .map_err(|e| cfg_err(format!("{context}: layout"), e))?;
        self.sim
            .validate()
            .map_err(|e| cfg_err(format!("{context}: sim"), e))?;
        self.experiment.resolve(context)?;
        self.gen
            .validate()
            .map_err(|e| cfg_err(format!("{context}: gen"), e))?;
        Ok(())
    }

    /// Serialize the fully merged config. Snapshots round-trip through
    /// [`CliConfig::load`] and reproduce the run bit-for-bit.
    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    /// Snapshot path for an output file: `out.csv` -> `out.config.toml`;
    /// for an output directory: `<dir>/config.toml`.
    pub fn snapshot_path(out: &Path, out_is_dir: bool) -> PathBuf {
        if out_is_dir {
            out.join("config.toml")
        } else {
            out.with_extension("config.toml")
        }
    }

    pub fn write_snapshot(&self, out: &Path, out_is_dir: bool) -> std::io::Result<PathBuf> {
        let path = Self::snapshot_path(out, out_is_dir);
        std::fs::write(&path, self.to_toml())?;
        Ok(path)
    }
}
