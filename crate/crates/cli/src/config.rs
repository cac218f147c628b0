//! Experiment configuration files.

use std::path::{Path, PathBuf};

use nimfa_core::analysis::{DiagnosticsConfig, Estimator, SweepConfig, SweepMetric};
use nimfa_core::process::ProcessSpecJson;
use nimfa_core::{preset_catalyst, preset_degree, preset_sir, IcSpec, ProcessSpec, SbmParams, SolverOptions, TimeGrid};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "preset", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProcessConfig {
    Sir { beta: f64, gamma: f64 },
    Catalyst,
    Degree,
    /// Inline rate tables.
    Custom { spec: ProcessSpecJson },
}

impl ProcessConfig {
    pub fn build(&self) -> Result<ProcessSpec, CliError> {
        Ok(match self {
            ProcessConfig::Sir { beta, gamma } => preset_sir(*beta, *gamma)?,
            ProcessConfig::Catalyst => preset_catalyst(),
            ProcessConfig::Degree => preset_degree(),
            ProcessConfig::Custom { spec } => ProcessSpec::from_json_repr(spec)?,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TimeConfig {
    pub t_end: f64,
    pub n_points: usize,
}

impl Default for TimeConfig {
    fn default() -> Self {
        TimeConfig { t_end: 1.0, n_points: 41 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Replication {
    pub n_graphs: usize,
    pub n_replicates: usize,
}

impl Default for Replication {
    fn default() -> Self {
        Replication { n_graphs: 10, n_replicates: 100 }
    }
}

/// Design grid of the `sweep` command; everything else comes from the
/// top level of the configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub n_values: Vec<usize>,
    pub alpha: f64,
    #[serde(default = "default_fractions")]
    pub fractions: Vec<f64>,
    #[serde(default = "default_weights")]
    pub weights: Vec<Vec<f64>>,
    #[serde(default)]
    pub metric: Option<SweepMetric>,
}

fn default_fractions() -> Vec<f64> {
    vec![1.0]
}

fn default_weights() -> Vec<Vec<f64>> {
    vec![vec![1.0]]
}

fn default_bootstrap() -> usize {
    1000
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<SbmParams>,
    pub process: ProcessConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ic: Option<IcSpec>,
    #[serde(default)]
    pub time: TimeConfig,
    #[serde(default)]
    pub replication: Replication,
    #[serde(default)]
    pub estimator: Estimator,
    #[serde(default = "default_bootstrap")]
    pub bootstrap: usize,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parallelism: Option<usize>,
    #[serde(default)]
    pub solver: SolverOptions,
    #[serde(default)]
    pub diagnostics: DiagnosticsConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
}

impl ExperimentConfig {
    /// Parses a configuration; errors carry the line and column.
    pub fn from_json(text: &str, origin: &str) -> Result<Self, CliError> {
        serde_json::from_str(text)
            .map_err(|e| CliError::Config(format!("{origin}: line {} column {}: {e}", e.line(), e.column())))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text, &path.display().to_string())
    }

    /// Canonical JSON of the effective configuration (compact, keys
    /// sorted); its hash goes into every manifest.
    pub fn canonical_json(&self) -> String {
        let value = serde_json::to_value(self).expect("configuration serializes");
        serde_json::to_string(&value).expect("configuration serializes")
    }

    pub fn graph(&self) -> Result<&SbmParams, CliError> {
        self.graph.as_ref().ok_or_else(|| CliError::Config("missing field `graph`".into()))
    }

    pub fn ic(&self) -> Result<&IcSpec, CliError> {
        self.ic.as_ref().ok_or_else(|| CliError::Config("missing field `ic`".into()))
    }

    pub fn grid(&self) -> Result<TimeGrid, CliError> {
        Ok(TimeGrid::uniform(self.time.t_end, self.time.n_points)?)
    }

    pub fn sweep_config(&self) -> Result<SweepConfig, CliError> {
        let section = self.sweep.as_ref().ok_or_else(|| CliError::Config("missing field `sweep`".into()))?;
        Ok(SweepConfig {
            n_values: section.n_values.clone(),
            alpha: section.alpha,
            t_end: self.time.t_end,
            n_points: self.time.n_points,
            fractions: section.fractions.clone(),
            weights: section.weights.clone(),
            metric: section.metric.unwrap_or(SweepMetric::ApproximationError { estimator: self.estimator }),
            ic: self.ic()?.clone(),
            n_graphs: self.replication.n_graphs,
            n_replicates: self.replication.n_replicates,
            seed: self.master_seed,
            bootstrap: self.bootstrap,
            solver: self.solver,
            parallelism: Default::default(),
        })
    }
}
