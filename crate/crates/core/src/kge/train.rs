//! Mini-batch SGD on the margin ranking loss.
//!
//! Deterministic given the seed: the edge order is shuffled with a seeded
//! generator, negatives come from the same stream, batch gradients are
//! accumulated in index order and applied once per batch (mean over the
//! batch pairs), and entity rows are renormalized to unit L2 norm after
//! every epoch.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use thiserror::Error;

use crate::graph::{NegativeSampler, RelationalGraph, SamplingError};

use super::{
    pair_gradients, pair_loss, param_values_mut, EmbeddingModel, Gradients, ModelTag, Norm,
    ScoreError,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EarlyStop {
    /// Number of epochs the loss must stay flat.
    pub window: usize,
    /// Relative change below which the loss counts as flat.
    pub relative_tolerance: f64,
}

impl Default for EarlyStop {
    fn default() -> Self {
        EarlyStop { window: 50, relative_tolerance: 1e-5 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub model: ModelTag,
    pub norm: Norm,
    pub dimension: usize,
    pub margin: f64,
    pub l2: f64,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub epochs: usize,
    pub seed: u64,
    pub negatives_per_positive: usize,
    pub corrupt_heads: bool,
    pub filtered_negatives: bool,
    pub early_stop: Option<EarlyStop>,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            model: ModelTag::TransE,
            norm: Norm::L2,
            dimension: 64,
            margin: 0.4,
            l2: 0.0,
            batch_size: 4096,
            learning_rate: 0.01,
            epochs: 1000,
            seed: 0,
            negatives_per_positive: 1,
            corrupt_heads: false,
            filtered_negatives: false,
            early_stop: Some(EarlyStop::default()),
        }
    }
}

#[derive(Debug, Error)]
pub enum TrainError {
    #[error("cannot train on an empty graph")]
    EmptyGraph,
    #[error("invalid training configuration: {0}")]
    BadConfig(String),
    #[error("loss became non-finite at epoch {epoch}; lower the learning rate")]
    Diverged { epoch: usize },
    #[error(transparent)]
    Sampling(#[from] SamplingError),
    #[error(transparent)]
    Score(#[from] ScoreError),
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub model: EmbeddingModel,
    /// Mean pair loss per epoch.
    pub loss_curve: Vec<f64>,
    pub epochs_run: usize,
}

pub fn train(graph: &RelationalGraph, cfg: &TrainConfig) -> Result<TrainOutcome, TrainError> {
    if graph.edges.is_empty() {
        return Err(TrainError::EmptyGraph);
    }
    if cfg.dimension == 0 {
        return Err(TrainError::BadConfig("dimension must be positive".into()));
    }
    if cfg.batch_size == 0 {
        return Err(TrainError::BadConfig("batch size must be positive".into()));
    }
    if cfg.learning_rate <= 0.0 {
        return Err(TrainError::BadConfig("learning rate must be positive".into()));
    }
    if cfg.margin < 0.0 {
        return Err(TrainError::BadConfig("margin must be non-negative".into()));
    }
    if cfg.negatives_per_positive == 0 {
        return Err(TrainError::BadConfig("need at least one negative per positive".into()));
    }

    let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);
    let mut model = EmbeddingModel::init(
        cfg.model,
        cfg.norm,
        cfg.dimension,
        graph.nodes.len(),
        graph.labels.len(),
        graph.vocab_hash(),
        &mut rng,
    );
    model.renormalize_entities();
    let sampler =
        NegativeSampler { corrupt_head: cfg.corrupt_heads, filtered: cfg.filtered_negatives };

    let mut edges = graph.edges.clone();
    let mut loss_curve = Vec::with_capacity(cfg.epochs);
    let mut epochs_run = 0;

    for epoch in 0..cfg.epochs {
        edges.shuffle(&mut rng);
        let mut epoch_loss = 0.0;
        let mut pair_count = 0usize;

        for batch in edges.chunks(cfg.batch_size) {
            let mut batch_grads = Gradients::new();
            let mut batch_pairs = 0usize;
            for &pos in batch {
                for _ in 0..cfg.negatives_per_positive {
                    let neg = sampler.sample(pos, graph, &mut rng)?;
                    epoch_loss += pair_loss(&model, pos, neg, cfg.margin, cfg.l2)?;
                    for (param, grad) in pair_gradients(&model, pos, neg, cfg.margin, cfg.l2)? {
                        let entry = batch_grads
                            .entry(param)
                            .or_insert_with(|| vec![0.0; grad.len()]);
                        for (acc, g) in entry.iter_mut().zip(&grad) {
                            *acc += g;
                        }
                    }
                    batch_pairs += 1;
                }
            }
            pair_count += batch_pairs;
            let step = cfg.learning_rate / batch_pairs as f64;
            for (param, grad) in batch_grads {
                let values = param_values_mut(&mut model, param);
                for (v, g) in values.iter_mut().zip(grad) {
                    *v -= step * g;
                }
            }
        }

        let mean_loss = epoch_loss / pair_count as f64;
        if !mean_loss.is_finite() {
            return Err(TrainError::Diverged { epoch });
        }
        model.renormalize_entities();
        loss_curve.push(mean_loss);
        epochs_run = epoch + 1;

        if let Some(stop) = &cfg.early_stop {
            if epoch >= stop.window {
                let previous = loss_curve[epoch - stop.window];
                let change = (mean_loss - previous).abs();
                if change / previous.abs().max(1e-12) < stop.relative_tolerance {
                    break;
                }
            }
        }
    }

    Ok(TrainOutcome { model, loss_curve, epochs_run })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projection::Edge;

    /// Two-level taxonomy: 7 mid classes under a root, 6 leaves per mid.
    fn toy_taxonomy() -> RelationalGraph {
        let mut edges = Vec::new();
        for m in 0..7 {
            edges.push(Edge::new(format!(":M{m}"), "subclassof", ":Root"));
            for l in 0..6 {
                edges.push(Edge::new(format!(":L{m}_{l}"), "subclassof", format!(":M{m}")));
            }
        }
        RelationalGraph::from_edges(edges.iter())
    }

    fn small_config() -> TrainConfig {
        TrainConfig {
            dimension: 16,
            epochs: 200,
            batch_size: 16,
            learning_rate: 0.05,
            margin: 0.4,
            early_stop: None,
            ..TrainConfig::default()
        }
    }

    #[test]
    fn positives_separate_from_negatives() {
        let graph = toy_taxonomy();
        let outcome = train(&graph, &small_config()).unwrap();
        let model = outcome.model;

        let mut rng = ChaCha12Rng::seed_from_u64(1234);
        let sampler = NegativeSampler::default();
        let mut pos_sum = 0.0;
        let mut neg_sum = 0.0;
        for &edge in &graph.edges {
            pos_sum += model.score_edge(edge).unwrap();
            let neg = sampler.sample(edge, &graph, &mut rng).unwrap();
            neg_sum += model.score_edge(neg).unwrap();
        }
        let n = graph.edges.len() as f64;
        assert!(
            pos_sum / n < neg_sum / n,
            "positives ({}) should score below negatives ({})",
            pos_sum / n,
            neg_sum / n
        );
    }

    #[test]
    fn training_is_deterministic() {
        let graph = toy_taxonomy();
        let cfg = TrainConfig { epochs: 20, ..small_config() };
        let a = train(&graph, &cfg).unwrap();
        let b = train(&graph, &cfg).unwrap();
        assert_eq!(a.loss_curve, b.loss_curve);
        assert_eq!(a.model.entities.data(), b.model.entities.data());

        let other = train(&graph, &TrainConfig { seed: 7, ..cfg }).unwrap();
        assert_ne!(a.model.entities.data(), other.model.entities.data());
    }

    #[test]
    fn entity_rows_stay_normalized() {
        let graph = toy_taxonomy();
        let cfg = TrainConfig { epochs: 5, ..small_config() };
        let outcome = train(&graph, &cfg).unwrap();
        for i in 0..outcome.model.n_entities() {
            let norm: f64 =
                outcome.model.entities.row(i).iter().map(|v| v * v).sum::<f64>().sqrt();
            assert!((norm - 1.0).abs() < 1e-6, "row {i} norm {norm}");
        }
    }

    #[test]
    fn early_stop_on_flat_loss() {
        // Two nodes leave a single possible negative, so once the margin is
        // satisfied the loss sits at exactly zero and the plateau triggers.
        let graph =
            RelationalGraph::from_edges([Edge::new(":A", "r", ":B")].iter());
        let cfg = TrainConfig {
            epochs: 1000,
            dimension: 8,
            batch_size: 4,
            learning_rate: 0.1,
            margin: 0.0,
            early_stop: Some(EarlyStop { window: 10, relative_tolerance: 1e-5 }),
            ..TrainConfig::default()
        };
        let outcome = train(&graph, &cfg).unwrap();
        assert!(outcome.epochs_run < 200, "stopped after {} epochs", outcome.epochs_run);
        assert_eq!(*outcome.loss_curve.last().unwrap(), 0.0);
    }

    #[test]
    fn transr_trains_too() {
        let graph = toy_taxonomy();
        let cfg = TrainConfig {
            model: ModelTag::TransR,
            epochs: 10,
            ..small_config()
        };
        let outcome = train(&graph, &cfg).unwrap();
        assert!(outcome.model.relation_matrices.is_some());
        assert!(outcome.loss_curve.iter().all(|l| l.is_finite()));
    }

    #[test]
    fn empty_graph_is_rejected() {
        let graph = RelationalGraph::default();
        assert!(matches!(train(&graph, &small_config()), Err(TrainError::EmptyGraph)));
    }

    #[test]
    fn divergence_aborts_with_a_diagnostic() {
        let graph = toy_taxonomy();
        let cfg = TrainConfig {
            learning_rate: 1e12,
            l2: 1.0,
            margin: 10.0,
            epochs: 50,
            ..small_config()
        };
        assert!(matches!(train(&graph, &cfg), Err(TrainError::Diverged { .. })));
    }
}
