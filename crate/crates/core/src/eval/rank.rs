//! Ranking a target axiom among candidates and computing the aggregate
//! link-prediction metrics.

use std::collections::BTreeSet;

use crate::graph::RelationalGraph;
use crate::kge::EmbeddingModel;
use crate::ontology::{
    serialize_axiom, Axiom, ClassExpression, ClassId, RoleId, Signature,
};
use crate::projection::{project_axiom, Method};
use crate::reasoner::ClosureFacts;

use super::report::{EvaluationReport, MetricSet, QueryOutcome, TieMode};
use super::{mean_edge_score, EvalError};

/// Case A ranks a `C ⊑ ∃R.D` query among `∃`-candidates only; Case B adds
/// the `∀` twin of every candidate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalMode {
    A,
    B,
}

impl std::fmt::Display for EvalMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            EvalMode::A => "A",
            EvalMode::B => "B",
        })
    }
}

impl std::str::FromStr for EvalMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "a" | "A" => Ok(EvalMode::A),
            "b" | "B" => Ok(EvalMode::B),
            other => Err(format!("unknown evaluation mode `{other}` (expected A or B)")),
        }
    }
}

/// Ranks the target among the candidates; returns `(raw, filtered)` ranks.
///
/// With pessimistic ties, rank = 1 + |better| + |tied others|. Candidates
/// the method cannot score rank behind every scored one. The filtered rank
/// ignores candidates in the filter set (the target itself is never
/// filtered).
pub fn rank_axiom(
    model: &EmbeddingModel,
    graph: &RelationalGraph,
    method: &Method,
    target: &Axiom,
    candidates: &[Axiom],
    filter_set: &BTreeSet<Axiom>,
    ties: TieMode,
) -> Result<(usize, usize), EvalError> {
    if candidates.is_empty() {
        return Err(EvalError::EmptyCandidates);
    }
    if !candidates.contains(target) {
        return Err(EvalError::TargetNotInCandidates);
    }
    let scores: Vec<Option<f64>> = candidates
        .iter()
        .map(|candidate| candidate_score(model, graph, method, candidate))
        .collect::<Result<_, _>>()?;
    let target_at = candidates.iter().position(|c| c == target).unwrap();
    let target_score = scores[target_at].ok_or_else(|| EvalError::Unscorable {
        axiom: serialize_axiom(target),
        reason: "target axiom cannot be scored by this method".into(),
    })?;

    let rank_among = |skip_filtered: bool| -> usize {
        let mut better = 0usize;
        let mut tied = 0usize;
        for (i, (candidate, score)) in candidates.iter().zip(&scores).enumerate() {
            if i == target_at {
                continue;
            }
            if skip_filtered && filter_set.contains(candidate) {
                continue;
            }
            match score {
                Some(s) if *s < target_score => better += 1,
                Some(s) if *s == target_score => tied += 1,
                _ => {}
            }
        }
        match ties {
            TieMode::Pessimistic => 1 + better + tied,
            TieMode::Optimistic => 1 + better,
        }
    };
    Ok((rank_among(false), rank_among(true)))
}

/// `None` marks a candidate the method cannot project or score; it ranks
/// behind every scored candidate.
fn candidate_score(
    model: &EmbeddingModel,
    graph: &RelationalGraph,
    method: &Method,
    candidate: &Axiom,
) -> Result<Option<f64>, EvalError> {
    let edges = match project_axiom(method, candidate) {
        Ok(edges) => edges,
        Err(_) => return Ok(None),
    };
    match mean_edge_score(model, graph, candidate, &edges) {
        Ok(score) => Ok(Some(score)),
        Err(EvalError::UnknownIdentifier(_)) | Err(EvalError::Unscorable { .. }) => Ok(None),
        Err(other) => Err(other),
    }
}

/// The shape of a test axiom.
enum QueryShape<'a> {
    Sub { sub: &'a ClassId },
    Ex { sub: &'a ClassId, role: &'a RoleId },
}

fn query_shape(axiom: &Axiom) -> Result<QueryShape<'_>, EvalError> {
    match axiom {
        Axiom::SubClassOf { sub: ClassExpression::Named(c), sup: ClassExpression::Named(_) } => {
            Ok(QueryShape::Sub { sub: c })
        }
        Axiom::SubClassOf {
            sub: ClassExpression::Named(c),
            sup: ClassExpression::Exists(r, filler),
        } if matches!(filler.as_ref(), ClassExpression::Named(_)) => {
            Ok(QueryShape::Ex { sub: c, role: r })
        }
        other => Err(EvalError::InvalidTestAxiom(serialize_axiom(other))),
    }
}

/// Evaluates a test set of `C ⊑ D` / `C ⊑ ∃R.D` axioms.
///
/// For every test axiom the candidate set varies the superclass side over
/// all named classes of the signature (mode B additionally varies the
/// quantifier). Raw and filtered metrics are reported; the filter removes
/// candidates entailed by the given closure. Queries whose target the
/// method cannot score are excluded from the metrics and listed in the
/// report.
#[allow(clippy::too_many_arguments)]
pub fn evaluate(
    model: &EmbeddingModel,
    graph: &RelationalGraph,
    method: &Method,
    test_set: &[Axiom],
    mode: EvalMode,
    signature: &Signature,
    closure: &ClosureFacts,
    ties: TieMode,
) -> Result<EvaluationReport, EvalError> {
    if test_set.is_empty() {
        return Err(EvalError::EmptyTestSet);
    }
    let mut queries = Vec::new();
    let mut excluded = Vec::new();

    for target in test_set {
        let shape = query_shape(target)?;
        let (candidates, filter) = candidate_pool(&shape, mode, signature, closure);
        match rank_axiom(model, graph, method, target, &candidates, &filter, ties) {
            Ok((raw_rank, filtered_rank)) => {
                let filtered_out =
                    filter.iter().filter(|f| *f != target && candidates.contains(f)).count();
                queries.push(QueryOutcome {
                    axiom: target.clone(),
                    raw_rank,
                    raw_candidates: candidates.len(),
                    filtered_rank,
                    filtered_candidates: candidates.len() - filtered_out,
                });
            }
            Err(
                err @ (EvalError::Unscorable { .. }
                | EvalError::UnknownIdentifier(_)
                | EvalError::Projection(_)),
            ) => {
                excluded.push((target.clone(), err.to_string()));
            }
            Err(other) => return Err(other),
        }
    }

    let raw = MetricSet::from_ranks(queries.iter().map(|q| (q.raw_rank, q.raw_candidates)));
    let filtered = MetricSet::from_ranks(
        queries.iter().map(|q| (q.filtered_rank, q.filtered_candidates)),
    );
    Ok(EvaluationReport {
        method: method.kind(),
        mode,
        ties,
        queries,
        excluded,
        raw,
        filtered,
    })
}

/// All candidate axioms for a query, plus the subset that is entailed
/// (present in the closure) and therefore filtered.
fn candidate_pool(
    shape: &QueryShape<'_>,
    mode: EvalMode,
    signature: &Signature,
    closure: &ClosureFacts,
) -> (Vec<Axiom>, BTreeSet<Axiom>) {
    let mut candidates = Vec::with_capacity(signature.classes.len() * 2);
    let mut filter = BTreeSet::new();
    match shape {
        QueryShape::Sub { sub } => {
            for class in &signature.classes {
                let axiom = Axiom::subclass(
                    ClassExpression::Named((*sub).clone()),
                    ClassExpression::Named(class.clone()),
                );
                if closure.contains_sub(sub, class) {
                    filter.insert(axiom.clone());
                }
                candidates.push(axiom);
            }
        }
        QueryShape::Ex { sub, role } => {
            for class in &signature.classes {
                let axiom = Axiom::subclass(
                    ClassExpression::Named((*sub).clone()),
                    ClassExpression::exists(role.as_str(), ClassExpression::Named(class.clone())),
                );
                if closure.contains_ex(sub, role, class) {
                    filter.insert(axiom.clone());
                }
                candidates.push(axiom);
            }
            if mode == EvalMode::B {
                // Universal candidates; never in an EL closure, so never
                // filtered.
                for class in &signature.classes {
                    candidates.push(Axiom::subclass(
                        ClassExpression::Named((*sub).clone()),
                        ClassExpression::forall(
                            role.as_str(),
                            ClassExpression::Named(class.clone()),
                        ),
                    ));
                }
            }
        }
    }
    (candidates, filter)
}
