//! Declarative experiment configuration. A config file plus the seed
//! reproduces a run end to end; every field can be overridden on the
//! command line.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use ontoproj_core::kge::{EarlyStop, ModelTag, Norm, TrainConfig};
use ontoproj_core::ontology::SplitPattern;
use ontoproj_core::projection::{default_patterns, parse_pattern_file, Method};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub ontology: PathBuf,
    pub output_dir: PathBuf,
    pub seed: u64,
    pub projection: ProjectionConfig,
    pub split: SplitConfig,
    pub train: TrainSection,
    #[serde(default)]
    pub evaluation: EvaluationConfig,
    #[serde(default)]
    pub grid: Option<GridSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProjectionConfig {
    pub method: String,
    #[serde(default = "default_true")]
    pub inverse_edges: bool,
    #[serde(default)]
    pub conflate_quantifiers: bool,
    #[serde(default)]
    pub pattern_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitConfig {
    pub pattern: String,
    pub fraction: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainSection {
    #[serde(default = "default_model")]
    pub model: String,
    #[serde(default = "default_norm")]
    pub norm: String,
    pub dimension: usize,
    pub margin: f64,
    #[serde(default)]
    pub l2: f64,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub epochs: usize,
    #[serde(default = "default_negatives")]
    pub negatives_per_positive: usize,
    #[serde(default)]
    pub corrupt_heads: bool,
    #[serde(default)]
    pub filtered_negatives: bool,
    #[serde(default = "default_true")]
    pub early_stop: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvaluationConfig {
    #[serde(default = "default_mode")]
    pub mode: String,
    #[serde(default)]
    pub optimistic_ties: bool,
}

impl Default for EvaluationConfig {
    fn default() -> Self {
        EvaluationConfig { mode: default_mode(), optimistic_ties: false }
    }
}

/// Cartesian hyperparameter grid. Defaults follow the sweep used in the
/// experiments: sizes 64/128/256, margins 0/0.2/0.4, L2 0/1e-4/5e-4,
/// batches 4096/8192/16384 and rates 0.1/0.01/0.001.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    #[serde(default = "grid_dimensions")]
    pub dimension: Vec<usize>,
    #[serde(default = "grid_margins")]
    pub margin: Vec<f64>,
    #[serde(default = "grid_l2")]
    pub l2: Vec<f64>,
    #[serde(default = "grid_batch_sizes")]
    pub batch_size: Vec<usize>,
    #[serde(default = "grid_learning_rates")]
    pub learning_rate: Vec<f64>,
    #[serde(default = "default_validation_fraction")]
    pub validation_fraction: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            dimension: grid_dimensions(),
            margin: grid_margins(),
            l2: grid_l2(),
            batch_size: grid_batch_sizes(),
            learning_rate: grid_learning_rates(),
            validation_fraction: default_validation_fraction(),
        }
    }
}

impl GridSpec {
    pub fn combination_count(&self) -> usize {
        self.dimension.len()
            * self.margin.len()
            * self.l2.len()
            * self.batch_size.len()
            * self.learning_rate.len()
    }

    /// All combinations in axis order (dimension outermost).
    pub fn combinations(&self) -> Vec<GridPoint> {
        let mut points = Vec::with_capacity(self.combination_count());
        for &dimension in &self.dimension {
            for &margin in &self.margin {
                for &l2 in &self.l2 {
                    for &batch_size in &self.batch_size {
                        for &learning_rate in &self.learning_rate {
                            points.push(GridPoint {
                                dimension,
                                margin,
                                l2,
                                batch_size,
                                learning_rate,
                            });
                        }
                    }
                }
            }
        }
        points
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub dimension: usize,
    pub margin: f64,
    pub l2: f64,
    pub batch_size: usize,
    pub learning_rate: f64,
}

fn default_true() -> bool {
    true
}

fn default_model() -> String {
    "transe".into()
}

fn default_norm() -> String {
    "l2".into()
}

fn default_negatives() -> usize {
    1
}

fn default_mode() -> String {
    "a".into()
}

fn grid_dimensions() -> Vec<usize> {
    vec![64, 128, 256]
}

fn grid_margins() -> Vec<f64> {
    vec![0.0, 0.2, 0.4]
}

fn grid_l2() -> Vec<f64> {
    vec![0.0, 1e-4, 5e-4]
}

fn grid_batch_sizes() -> Vec<usize> {
    vec![4096, 8192, 16384]
}

fn grid_learning_rates() -> Vec<f64> {
    vec![0.1, 0.01, 0.001]
}

fn default_validation_fraction() -> f64 {
    0.1
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        let config: ExperimentConfig = toml::from_str(&text)
            .with_context(|| format!("cannot parse config {}", path.display()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        self.split_pattern()?;
        self.method()?;
        self.train_config()?;
        self.evaluation.mode.parse::<ontoproj_core::eval::EvalMode>().map_err(|e| {
            anyhow::anyhow!(e)
        })?;
        if !(self.split.fraction > 0.0 && self.split.fraction < 1.0) {
            bail!("split.fraction must be in (0, 1)");
        }
        Ok(())
    }

    pub fn split_pattern(&self) -> Result<SplitPattern> {
        SplitPattern::from_str(&self.split.pattern).map_err(|e| anyhow::anyhow!(e))
    }

    pub fn method(&self) -> Result<Method> {
        build_method(
            &self.projection.method,
            self.projection.pattern_file.as_deref(),
            self.projection.inverse_edges,
            self.projection.conflate_quantifiers,
        )
    }

    pub fn train_config(&self) -> Result<TrainConfig> {
        Ok(TrainConfig {
            model: ModelTag::from_str(&self.train.model).map_err(|e| anyhow::anyhow!(e))?,
            norm: Norm::from_str(&self.train.norm).map_err(|e| anyhow::anyhow!(e))?,
            dimension: self.train.dimension,
            margin: self.train.margin,
            l2: self.train.l2,
            batch_size: self.train.batch_size,
            learning_rate: self.train.learning_rate,
            epochs: self.train.epochs,
            seed: self.seed,
            negatives_per_positive: self.train.negatives_per_positive,
            corrupt_heads: self.train.corrupt_heads,
            filtered_negatives: self.train.filtered_negatives,
            early_stop: self.train.early_stop.then(EarlyStop::default),
        })
    }

    /// Canonical rendering written next to the run artifacts.
    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }
}

pub fn build_method(
    name: &str,
    pattern_file: Option<&Path>,
    inverse_edges: bool,
    conflate_quantifiers: bool,
) -> Result<Method> {
    match name {
        "taxonomy" => Ok(Method::Taxonomy),
        "owl2vecstar" => Ok(Method::Owl2VecStar { inverse_edges }),
        "rdf" => Ok(Method::Rdf),
        "patterns" => {
            let patterns = match pattern_file {
                Some(path) => {
                    let text = std::fs::read_to_string(path).with_context(|| {
                        format!("cannot read pattern file {}", path.display())
                    })?;
                    parse_pattern_file(&text)?
                }
                None => default_patterns(),
            };
            Ok(Method::Patterns { patterns, conflate_quantifiers })
        }
        other => bail!("unknown projection method `{other}`"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
ontology = "onto.ofn"
output_dir = "out"
seed = 7

[projection]
method = "owl2vecstar"

[split]
pattern = "sub"
fraction = 0.1

[train]
dimension = 32
margin = 0.2
batch_size = 64
learning_rate = 0.01
epochs = 10
"#;

    #[test]
    fn minimal_config_parses_with_defaults() {
        let config: ExperimentConfig = toml::from_str(MINIMAL).unwrap();
        config.validate().unwrap();
        assert!(config.projection.inverse_edges);
        assert_eq!(config.evaluation.mode, "a");
        let tc = config.train_config().unwrap();
        assert_eq!(tc.seed, 7);
        assert_eq!(tc.negatives_per_positive, 1);
    }

    #[test]
    fn default_grid_enumerates_the_full_sweep() {
        let grid = GridSpec::default();
        assert_eq!(grid.combination_count(), 243);
        assert_eq!(grid.combinations().len(), 243);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let bad = format!("{MINIMAL}\n[nonsense]\nx = 1\n");
        assert!(toml::from_str::<ExperimentConfig>(&bad).is_err());
    }

    #[test]
    fn config_round_trips_through_toml() {
        let config: ExperimentConfig = toml::from_str(MINIMAL).unwrap();
        let text = config.to_toml();
        let reparsed: ExperimentConfig = toml::from_str(&text).unwrap();
        assert_eq!(text, reparsed.to_toml());
    }
}
