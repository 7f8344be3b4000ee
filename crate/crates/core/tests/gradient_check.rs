//! Analytic gradients checked against central finite differences.
//!
//! For random parameter points (TransE and TransR, both norms) the
//! analytic gradient of the pair loss must match the numeric one with a
//! relative error below 1e-4 per coordinate. Points too close to the
//! hinge boundary or to a norm kink are regenerated, since the loss is
//! not differentiable there.

use ontoproj_core::kge::{pair_gradients, Matrix, ModelTag, Norm};
use ontoproj_test_support::grad_check::{random_model, run_checks, MAX_REL_ERROR};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

fn assert_matches(tag: ModelTag, norm: Norm, points: usize, l2: f64, seed: u64) {
    let worst = run_checks(tag, norm, points, l2, seed);
    assert!(
        worst < MAX_REL_ERROR,
        "{tag:?}/{norm:?}: max relative error {worst:.3e} exceeds {MAX_REL_ERROR:.0e}"
    );
}

#[test]
fn transe_l2_gradients_match_finite_differences() {
    assert_matches(ModelTag::TransE, Norm::L2, 250, 0.0, 0x9d01);
}

#[test]
fn transe_l1_gradients_match_finite_differences() {
    assert_matches(ModelTag::TransE, Norm::L1, 250, 0.0, 0x9d02);
}

#[test]
fn transr_l2_gradients_match_finite_differences_including_matrices() {
    assert_matches(ModelTag::TransR, Norm::L2, 250, 0.0, 0x9d03);
}

#[test]
fn transr_l1_gradients_match_finite_differences() {
    assert_matches(ModelTag::TransR, Norm::L1, 250, 0.0, 0x9d04);
}

#[test]
fn regularized_gradients_match_finite_differences() {
    assert_matches(ModelTag::TransE, Norm::L2, 100, 5e-4, 0x9d05);
    assert_matches(ModelTag::TransR, Norm::L2, 100, 5e-4, 0x9d06);
}

#[test]
fn inactive_hinge_without_regularization_has_zero_gradient() {
    let mut rng = ChaCha12Rng::seed_from_u64(0x9d07);
    let mut found = false;
    for _ in 0..200 {
        let model = random_model(ModelTag::TransE, Norm::L2, &mut rng);
        let pos = (0u32, 0u32, 1u32);
        let neg = (0u32, 0u32, 2u32);
        let d_pos = model.score_edge(pos).unwrap();
        let d_neg = model.score_edge(neg).unwrap();
        if d_pos - d_neg < -0.1 {
            let grads = pair_gradients(&model, pos, neg, 0.0, 0.0).unwrap();
            assert!(grads.is_empty(), "inactive hinge produced gradients");
            found = true;
            break;
        }
    }
    assert!(found, "no inactive-hinge sample found");
}

#[test]
fn transr_identity_matrices_reduce_to_transe_gradients() {
    let mut rng = ChaCha12Rng::seed_from_u64(0x9d08);
    let transe = random_model(ModelTag::TransE, Norm::L2, &mut rng);
    let dim = transe.dim;
    let mut transr = transe.clone();
    transr.tag = ModelTag::TransR;
    transr.relation_matrices = Some(vec![Matrix::identity(dim); transe.n_relations()]);
    let pos = (0u32, 1u32, 2u32);
    let neg = (0u32, 1u32, 3u32);
    let ge = pair_gradients(&transe, pos, neg, 0.3, 0.0).unwrap();
    let gr = pair_gradients(&transr, pos, neg, 0.3, 0.0).unwrap();
    for (param, grad) in &ge {
        assert_eq!(&gr[param], grad);
    }
}
