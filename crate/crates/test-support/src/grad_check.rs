//! Central finite-difference oracle for the pair-loss gradients.

use ontoproj_core::kge::{pair_gradients, pair_loss, EmbeddingModel, ModelTag, Norm, Param};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

pub const STEP: f64 = 1e-5;
pub const MAX_REL_ERROR: f64 = 1e-4;

const DIM: usize = 6;
const ENTITIES: usize = 5;
const RELATIONS: usize = 3;

pub fn random_model(tag: ModelTag, norm: Norm, rng: &mut ChaCha12Rng) -> EmbeddingModel {
    let mut model = EmbeddingModel::init(tag, norm, DIM, ENTITIES, RELATIONS, 0, rng);
    if let Some(matrices) = &mut model.relation_matrices {
        for m in matrices {
            for v in m.data_mut() {
                *v = rng.random_range(-1.0..1.0);
            }
        }
    }
    model
}

fn residual(model: &EmbeddingModel, edge: (u32, u32, u32)) -> Vec<f64> {
    let head = model.entities.row(edge.0 as usize);
    let rel = model.relations.row(edge.1 as usize);
    let tail = model.entities.row(edge.2 as usize);
    match &model.relation_matrices {
        None => head.iter().zip(rel).zip(tail).map(|((h, r), t)| h + r - t).collect(),
        Some(ms) => {
            let m = &ms[edge.1 as usize];
            let h = m.vec_mul(head);
            let t = m.vec_mul(tail);
            h.iter().zip(rel).zip(&t).map(|((h, r), t)| h + r - t).collect()
        }
    }
}

/// The loss is not differentiable on the hinge boundary or at a norm
/// kink; sampling skips those points.
fn differentiable_at(
    model: &EmbeddingModel,
    pos: (u32, u32, u32),
    neg: (u32, u32, u32),
    gamma: f64,
) -> bool {
    let d_pos = model.score_edge(pos).unwrap();
    let d_neg = model.score_edge(neg).unwrap();
    if (d_pos - d_neg + gamma).abs() < 1e-3 {
        return false;
    }
    for edge in [pos, neg] {
        let u = residual(model, edge);
        match model.norm {
            Norm::L1 => {
                if u.iter().any(|v| v.abs() < 1e-3) {
                    return false;
                }
            }
            Norm::L2 => {
                if u.iter().map(|v| v * v).sum::<f64>().sqrt() < 1e-3 {
                    return false;
                }
            }
        }
    }
    true
}

pub fn perturb(model: &mut EmbeddingModel, param: Param, coord: usize, delta: f64) {
    let values: &mut [f64] = match param {
        Param::Entity(i) => model.entities.row_mut(i as usize),
        Param::Relation(i) => model.relations.row_mut(i as usize),
        Param::RelationMatrix(i) => {
            model.relation_matrices.as_mut().unwrap()[i as usize].data_mut()
        }
    };
    values[coord] += delta;
}

/// Maximum relative error over all touched coordinates at one point.
pub fn check_point(
    model: &EmbeddingModel,
    pos: (u32, u32, u32),
    neg: (u32, u32, u32),
    gamma: f64,
    l2: f64,
) -> f64 {
    let grads = pair_gradients(model, pos, neg, gamma, l2).unwrap();
    let mut worst: f64 = 0.0;
    for (param, analytic) in &grads {
        for (coord, &a) in analytic.iter().enumerate() {
            let mut plus = model.clone();
            perturb(&mut plus, *param, coord, STEP);
            let mut minus = model.clone();
            perturb(&mut minus, *param, coord, -STEP);
            let f_plus = pair_loss(&plus, pos, neg, gamma, l2).unwrap();
            let f_minus = pair_loss(&minus, pos, neg, gamma, l2).unwrap();
            let numeric = (f_plus - f_minus) / (2.0 * STEP);
            let rel = (a - numeric).abs() / a.abs().max(numeric.abs()).max(1e-3);
            worst = worst.max(rel);
        }
    }
    worst
}

/// Checks `points` random differentiable parameter points and returns the
/// worst relative error observed.
pub fn run_checks(tag: ModelTag, norm: Norm, points: usize, l2: f64, seed: u64) -> f64 {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut checked = 0usize;
    let mut worst: f64 = 0.0;
    while checked < points {
        let model = random_model(tag, norm, &mut rng);
        let h = rng.random_range(0..ENTITIES as u32);
        let r = rng.random_range(0..RELATIONS as u32);
        let t = rng.random_range(0..ENTITIES as u32);
        let t_neg = rng.random_range(0..ENTITIES as u32);
        if t == t_neg {
            continue;
        }
        let gamma = rng.random_range(0.0..0.5);
        let pos = (h, r, t);
        let neg = (h, r, t_neg);
        if !differentiable_at(&model, pos, neg, gamma) {
            continue;
        }
        worst = worst.max(check_point(&model, pos, neg, gamma, l2));
        checked += 1;
    }
    worst
}
