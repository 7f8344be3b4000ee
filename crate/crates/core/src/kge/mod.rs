//! Translational knowledge-graph embeddings.
//!
//! TransE scores an edge `(h, r, t)` by the distance `‖h + r − t‖`; TransR
//! first maps the entity vectors into the relation's space with a
//! per-relation matrix, `‖h·M_r + r − t·M_r‖`. Lower distance means more
//! plausible. Training minimizes the margin loss
//! `max(0, d_pos − d_neg + γ)` with negatives drawn by tail corruption.

mod checkpoint;
mod train;

pub use checkpoint::{load_model, save_model, verify_pairing, CheckpointError};
pub use train::{train, EarlyStop, TrainConfig, TrainError, TrainOutcome};

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use thiserror::Error;

/// Row-major dense matrix of `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_data(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    /// Row vector times this matrix: `(v M)_j = Σ_i v_i M_ij`.
    pub fn vec_mul(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.cols];
        for (vi, row) in v.iter().zip(self.data.chunks_exact(self.cols)) {
            if *vi == 0.0 {
                continue;
            }
            for (o, m) in out.iter_mut().zip(row) {
                *o += vi * m;
            }
        }
        out
    }

    /// This matrix times a column vector: `(M u)_i = Σ_j M_ij u_j`.
    pub fn mul_vec(&self, u: &[f64]) -> Vec<f64> {
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(u).map(|(m, u)| m * u).sum())
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelTag {
    TransE,
    TransR,
}

impl fmt::Display for ModelTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelTag::TransE => "transe",
            ModelTag::TransR => "transr",
        })
    }
}

impl std::str::FromStr for ModelTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "transe" => Ok(ModelTag::TransE),
            "transr" => Ok(ModelTag::TransR),
            other => Err(format!("unknown model `{other}` (expected transe or transr)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Norm {
    L1,
    L2,
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Norm::L1 => "l1",
            Norm::L2 => "l2",
        })
    }
}

impl std::str::FromStr for Norm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "l1" => Ok(Norm::L1),
            "l2" => Ok(Norm::L2),
            other => Err(format!("unknown norm `{other}` (expected l1 or l2)")),
        }
    }
}

/// Entity and relation embeddings, plus per-relation projection matrices
/// for TransR.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingModel {
    pub tag: ModelTag,
    pub norm: Norm,
    pub dim: usize,
    pub entities: Matrix,
    pub relations: Matrix,
    pub relation_matrices: Option<Vec<Matrix>>,
    /// Hash of the graph vocabularies this model was trained against.
    pub vocab_hash: u64,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ScoreError {
    #[error("entity index {index} out of range ({count} entities)")]
    EntityOutOfRange { index: u32, count: usize },
    #[error("relation index {index} out of range ({count} relations)")]
    RelationOutOfRange { index: u32, count: usize },
}

impl EmbeddingModel {
    /// Uniform initialization in `[−6/√n, 6/√n]`; TransR matrices start at
    /// the identity so its early behavior matches TransE.
    pub fn init(
        tag: ModelTag,
        norm: Norm,
        dim: usize,
        n_entities: usize,
        n_relations: usize,
        vocab_hash: u64,
        rng: &mut impl Rng,
    ) -> Self {
        let bound = 6.0 / (dim as f64).sqrt();
        let mut fill = |m: &mut Matrix| {
            for v in m.data_mut() {
                *v = rng.random_range(-bound..bound);
            }
        };
        let mut entities = Matrix::zeros(n_entities, dim);
        let mut relations = Matrix::zeros(n_relations, dim);
        fill(&mut entities);
        fill(&mut relations);
        let relation_matrices = match tag {
            ModelTag::TransE => None,
            ModelTag::TransR => Some(vec![Matrix::identity(dim); n_relations]),
        };
        EmbeddingModel { tag, norm, dim, entities, relations, relation_matrices, vocab_hash }
    }

    pub fn n_entities(&self) -> usize {
        self.entities.rows()
    }

    pub fn n_relations(&self) -> usize {
        self.relations.rows()
    }

    /// Scales every entity row to unit L2 norm (zero rows are left alone).
    pub fn renormalize_entities(&mut self) {
        for i in 0..self.entities.rows() {
            let row = self.entities.row_mut(i);
            let norm = row.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm > 0.0 {
                for v in row {
                    *v /= norm;
                }
            }
        }
    }

    fn check(&self, edge: (u32, u32, u32)) -> Result<(), ScoreError> {
        for index in [edge.0, edge.2] {
            if index as usize >= self.n_entities() {
                return Err(ScoreError::EntityOutOfRange {
                    index,
                    count: self.n_entities(),
                });
            }
        }
        if edge.1 as usize >= self.n_relations() {
            return Err(ScoreError::RelationOutOfRange {
                index: edge.1,
                count: self.n_relations(),
            });
        }
        Ok(())
    }

    /// The translation residual `h' + r − t'` with entities mapped through
    /// `M_r` for TransR.
    fn residual(&self, edge: (u32, u32, u32)) -> Vec<f64> {
        let (h, r, t) = edge;
        let head = self.entities.row(h as usize);
        let rel = self.relations.row(r as usize);
        let tail = self.entities.row(t as usize);
        match &self.relation_matrices {
            None => head
                .iter()
                .zip(rel)
                .zip(tail)
                .map(|((h, r), t)| h + r - t)
                .collect(),
            Some(matrices) => {
                let m = &matrices[r as usize];
                let head = m.vec_mul(head);
                let tail = m.vec_mul(tail);
                head.iter()
                    .zip(rel)
                    .zip(&tail)
                    .map(|((h, r), t)| h + r - t)
                    .collect()
            }
        }
    }

    /// Distance score of an edge; lower is more plausible.
    pub fn score_edge(&self, edge: (u32, u32, u32)) -> Result<f64, ScoreError> {
        self.check(edge)?;
        let u = self.residual(edge);
        Ok(match self.norm {
            Norm::L1 => u.iter().map(|v| v.abs()).sum(),
            Norm::L2 => u.iter().map(|v| v * v).sum::<f64>().sqrt(),
        })
    }
}

/// Margin ranking loss: `max(0, d_pos − d_neg + γ)`.
pub fn margin_loss(d_pos: f64, d_neg: f64, gamma: f64) -> f64 {
    (d_pos - d_neg + gamma).max(0.0)
}

/// A trainable parameter slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Param {
    Entity(u32),
    Relation(u32),
    RelationMatrix(u32),
}

/// Sparse gradients, flattened per parameter.
pub type Gradients = BTreeMap<Param, Vec<f64>>;

/// Loss for a positive/negative pair including the L2 penalty on the
/// touched parameters.
pub fn pair_loss(
    model: &EmbeddingModel,
    pos: (u32, u32, u32),
    neg: (u32, u32, u32),
    gamma: f64,
    l2: f64,
) -> Result<f64, ScoreError> {
    let d_pos = model.score_edge(pos)?;
    let d_neg = model.score_edge(neg)?;
    let mut loss = margin_loss(d_pos, d_neg, gamma);
    if l2 > 0.0 {
        for param in touched_params(model, pos, neg) {
            loss += l2 * param_values(model, param).iter().map(|v| v * v).sum::<f64>();
        }
    }
    Ok(loss)
}

/// Analytic gradients of [`pair_loss`] with respect to every touched
/// parameter.
pub fn pair_gradients(
    model: &EmbeddingModel,
    pos: (u32, u32, u32),
    neg: (u32, u32, u32),
    gamma: f64,
    l2: f64,
) -> Result<Gradients, ScoreError> {
    let d_pos = model.score_edge(pos)?;
    let d_neg = model.score_edge(neg)?;
    let mut grads = Gradients::new();
    let active = d_pos - d_neg + gamma > 0.0;
    if active {
        accumulate_distance_gradients(model, pos, 1.0, &mut grads);
        accumulate_distance_gradients(model, neg, -1.0, &mut grads);
    }
    if l2 > 0.0 {
        for param in touched_params(model, pos, neg) {
            let values = param_values(model, param);
            let entry = grads
                .entry(param)
                .or_insert_with(|| vec![0.0; values.len()]);
            for (g, v) in entry.iter_mut().zip(values) {
                *g += 2.0 * l2 * v;
            }
        }
    }
    Ok(grads)
}

/// The distinct parameters an update for this pair touches.
pub fn touched_params(
    model: &EmbeddingModel,
    pos: (u32, u32, u32),
    neg: (u32, u32, u32),
) -> Vec<Param> {
    let mut params = vec![
        Param::Entity(pos.0),
        Param::Entity(pos.2),
        Param::Relation(pos.1),
        Param::Entity(neg.0),
        Param::Entity(neg.2),
        Param::Relation(neg.1),
    ];
    if model.relation_matrices.is_some() {
        params.push(Param::RelationMatrix(pos.1));
        params.push(Param::RelationMatrix(neg.1));
    }
    params.sort_unstable();
    params.dedup();
    params
}

pub(crate) fn param_values(model: &EmbeddingModel, param: Param) -> &[f64] {
    match param {
        Param::Entity(i) => model.entities.row(i as usize),
        Param::Relation(i) => model.relations.row(i as usize),
        Param::RelationMatrix(i) => model
            .relation_matrices
            .as_ref()
            .expect("TransR parameter on a TransE model")[i as usize]
            .data(),
    }
}

pub(crate) fn param_values_mut(model: &mut EmbeddingModel, param: Param) -> &mut [f64] {
    match param {
        Param::Entity(i) => model.entities.row_mut(i as usize),
        Param::Relation(i) => model.relations.row_mut(i as usize),
        Param::RelationMatrix(i) => model
            .relation_matrices
            .as_mut()
            .expect("TransR parameter on a TransE model")[i as usize]
            .data_mut(),
    }
}

/// Adds `sign × ∂d(edge)/∂θ` for every parameter of the edge.
fn accumulate_distance_gradients(
    model: &EmbeddingModel,
    edge: (u32, u32, u32),
    sign: f64,
    grads: &mut Gradients,
) {
    let (h, r, t) = edge;
    let u = model.residual(edge);
    // ∂d/∂u: u/‖u‖ for L2, sign(u) for L1; zero at the non-smooth points.
    let du: Vec<f64> = match model.norm {
        Norm::L1 => u.iter().map(|v| v.signum() * (*v != 0.0) as u8 as f64).collect(),
        Norm::L2 => {
            let d = u.iter().map(|v| v * v).sum::<f64>().sqrt();
            if d == 0.0 {
                vec![0.0; u.len()]
            } else {
                u.iter().map(|v| v / d).collect()
            }
        }
    };
    let dim = model.dim;
    let add = |grads: &mut Gradients, param: Param, len: usize, values: &[f64], scale: f64| {
        let entry = grads.entry(param).or_insert_with(|| vec![0.0; len]);
        for (g, v) in entry.iter_mut().zip(values) {
            *g += scale * v;
        }
    };

    match &model.relation_matrices {
        None => {
            add(grads, Param::Entity(h), dim, &du, sign);
            add(grads, Param::Relation(r), dim, &du, sign);
            add(grads, Param::Entity(t), dim, &du, -sign);
        }
        Some(matrices) => {
            let m = &matrices[r as usize];
            // ∂d/∂h_i = Σ_j M_ij (∂d/∂u_j)
            let dh = m.mul_vec(&du);
            add(grads, Param::Entity(h), dim, &dh, sign);
            add(grads, Param::Relation(r), dim, &du, sign);
            add(grads, Param::Entity(t), dim, &dh, -sign);
            // ∂d/∂M_ij = (h_i − t_i) (∂d/∂u_j)
            let head = model.entities.row(h as usize);
            let tail = model.entities.row(t as usize);
            let mut dm = vec![0.0; dim * dim];
            for i in 0..dim {
                let hi_ti = head[i] - tail[i];
                if hi_ti == 0.0 {
                    continue;
                }
                for j in 0..dim {
                    dm[i * dim + j] = hi_ti * du[j];
                }
            }
            add(grads, Param::RelationMatrix(r), dim * dim, &dm, sign);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn model_with(entities: Vec<Vec<f64>>, relations: Vec<Vec<f64>>, norm: Norm) -> EmbeddingModel {
        let dim = entities[0].len();
        let e_rows = entities.len();
        let r_rows = relations.len();
        EmbeddingModel {
            tag: ModelTag::TransE,
            norm,
            dim,
            entities: Matrix::from_data(e_rows, dim, entities.concat()),
            relations: Matrix::from_data(r_rows, dim, relations.concat()),
            relation_matrices: None,
            vocab_hash: 0,
        }
    }

    #[test]
    fn zero_vectors_score_zero() {
        let m = model_with(vec![vec![0.0, 0.0]; 2], vec![vec![0.0, 0.0]], Norm::L2);
        assert_eq!(m.score_edge((0, 0, 1)).unwrap(), 0.0);
    }

    #[test]
    fn exact_translation_scores_zero() {
        let m = model_with(
            vec![vec![1.0, 0.0], vec![1.0, 1.0]],
            vec![vec![0.0, 1.0]],
            Norm::L2,
        );
        assert_eq!(m.score_edge((0, 0, 1)).unwrap(), 0.0);
    }

    #[test]
    fn l1_distance_is_sum_of_absolute_residuals() {
        let m = model_with(
            vec![vec![1.0, 0.0], vec![0.0, 0.0]],
            vec![vec![0.0, 1.0]],
            Norm::L1,
        );
        assert_eq!(m.score_edge((0, 0, 1)).unwrap(), 2.0);
    }

    #[test]
    fn margin_loss_matches_definition() {
        assert_eq!(margin_loss(0.5, 1.0, 0.4), 0.0);
        assert!((margin_loss(0.5, 1.0, 0.6) - 0.1).abs() < 1e-15);
        assert_eq!(margin_loss(1.0, 1.0, 0.0), 0.0);
    }

    #[test]
    fn transr_with_identity_matrices_matches_transe() {
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        let transe = EmbeddingModel::init(ModelTag::TransE, Norm::L2, 8, 5, 3, 0, &mut rng);
        let mut transr = transe.clone();
        transr.tag = ModelTag::TransR;
        transr.relation_matrices = Some(vec![Matrix::identity(8); 3]);
        for h in 0..5u32 {
            for r in 0..3u32 {
                for t in 0..5u32 {
                    assert_eq!(
                        transe.score_edge((h, r, t)).unwrap(),
                        transr.score_edge((h, r, t)).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn score_is_direction_sensitive() {
        let mut rng = ChaCha12Rng::seed_from_u64(12);
        let m = EmbeddingModel::init(ModelTag::TransE, Norm::L2, 16, 4, 2, 0, &mut rng);
        assert_ne!(m.score_edge((0, 0, 1)).unwrap(), m.score_edge((1, 0, 0)).unwrap());
    }

    #[test]
    fn out_of_range_indices_are_rejected() {
        let m = model_with(vec![vec![0.0]; 2], vec![vec![0.0]], Norm::L2);
        assert!(matches!(
            m.score_edge((5, 0, 1)),
            Err(ScoreError::EntityOutOfRange { .. })
        ));
        assert!(matches!(
            m.score_edge((0, 3, 1)),
            Err(ScoreError::RelationOutOfRange { .. })
        ));
    }

    #[test]
    fn renormalization_produces_unit_rows() {
        let mut rng = ChaCha12Rng::seed_from_u64(13);
        let mut m = EmbeddingModel::init(ModelTag::TransE, Norm::L2, 32, 10, 2, 0, &mut rng);
        m.renormalize_entities();
        for i in 0..10 {
            let norm: f64 = m.entities.row(i).iter().map(|v| v * v).sum::<f64>().sqrt();
            assert!((norm - 1.0).abs() < 1e-6);
        }
    }
}
