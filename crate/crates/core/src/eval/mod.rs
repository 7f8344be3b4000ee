//! Axiom scoring by inverse projection, ranking, and evaluation reports.
//!
//! A query axiom is projected onto its edge set, each edge is scored by
//! the embedding model, and the axiom score is the arithmetic mean of the
//! edge scores (lower is better). Non-injective methods give several
//! axioms the same edge set and therefore exactly the same score; those
//! ties are recorded.

mod rank;
mod report;

pub use rank::{evaluate, rank_axiom, EvalMode};
pub use report::{EvaluationReport, MetricSet, QueryOutcome, ReportViolation, TieMode};

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::graph::RelationalGraph;
use crate::kge::{EmbeddingModel, ScoreError};
use crate::ontology::{serialize_axiom, Axiom};
use crate::projection::{invert_projection, project_axiom, Edge, Method, ProjectionError};

#[derive(Debug, Clone, Error)]
pub enum EvalError {
    #[error(transparent)]
    Projection(#[from] ProjectionError),
    #[error("identifier `{0}` is not in the graph vocabulary")]
    UnknownIdentifier(String),
    #[error("cannot score `{axiom}`: {reason}")]
    Unscorable { axiom: String, reason: String },
    #[error(transparent)]
    Score(#[from] ScoreError),
    #[error("candidate list is empty")]
    EmptyCandidates,
    #[error("target axiom is not among the candidates")]
    TargetNotInCandidates,
    #[error("test set is empty")]
    EmptyTestSet,
    #[error("test axiom `{0}` is not of shape C ⊑ D or C ⊑ ∃R.D")]
    InvalidTestAxiom(String),
}

/// A scored axiom with its projected edges and same-score companions.
#[derive(Debug, Clone)]
pub struct AxiomScore {
    pub axiom: Axiom,
    pub edges: BTreeSet<Edge>,
    /// Arithmetic mean of the edge distances; lower is more plausible.
    pub score: f64,
    /// Other axioms whose projection is the same edge set.
    pub tied: BTreeSet<Axiom>,
}

/// Projects and scores one axiom against a trained model.
pub fn score_axiom(
    model: &EmbeddingModel,
    graph: &RelationalGraph,
    method: &Method,
    axiom: &Axiom,
) -> Result<AxiomScore, EvalError> {
    let edges = project_axiom(method, axiom)?;
    let score = mean_edge_score(model, graph, axiom, &edges)?;
    let tied = match invert_projection(method, &edges) {
        Ok(mut axioms) => {
            axioms.remove(axiom);
            axioms
        }
        Err(_) => BTreeSet::new(),
    };
    Ok(AxiomScore { axiom: axiom.clone(), edges, score, tied })
}

pub(crate) fn mean_edge_score(
    model: &EmbeddingModel,
    graph: &RelationalGraph,
    axiom: &Axiom,
    edges: &BTreeSet<Edge>,
) -> Result<f64, EvalError> {
    let resolved = resolve_query_edges(graph, axiom, edges)?;
    debug_assert!(!resolved.is_empty());
    let mut best = f64::INFINITY;
    for assignment in resolved {
        let mut sum = 0.0;
        for edge in &assignment {
            sum += model.score_edge(*edge)?;
        }
        let mean = sum / assignment.len() as f64;
        if mean < best {
            best = mean;
        }
    }
    Ok(best)
}

/// One fully index-resolved reading of a query's edge set.
type ResolvedEdges = Vec<(u32, u32, u32)>;

/// Resolves identifier edges to index triples. Grounded identifiers must
/// exist in the vocabulary. Blank nodes (rdf query subgraphs) are bound to
/// graph nodes that play the same structural role; every consistent
/// assignment is returned and the caller keeps the best-scoring one.
fn resolve_query_edges(
    graph: &RelationalGraph,
    axiom: &Axiom,
    edges: &BTreeSet<Edge>,
) -> Result<Vec<ResolvedEdges>, EvalError> {
    let has_blanks = edges
        .iter()
        .any(|e| Edge::is_blank_node(&e.head) || Edge::is_blank_node(&e.tail));
    if !has_blanks {
        let resolved = edges
            .iter()
            .map(|edge| graph.resolve(edge).ok_or_else(|| unknown_identifier(graph, edge)))
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(vec![resolved]);
    }
    bind_blanks(graph, axiom, edges)
}

fn unknown_identifier(graph: &RelationalGraph, edge: &Edge) -> EvalError {
    for id in [&edge.head, &edge.tail] {
        if !Edge::is_blank_node(id) && graph.nodes.get(id).is_none() {
            return EvalError::UnknownIdentifier(id.clone());
        }
    }
    EvalError::UnknownIdentifier(edge.label.clone())
}

const MAX_BLANK_ASSIGNMENTS: usize = 1024;

/// Candidate bindings for every blank node of a query subgraph.
///
/// Blanks are processed in allocation order. For each one, anchor edges
/// (edges connecting it to a named node or an already-bound blank) vote on
/// candidates: each anchor proposes the graph nodes with a matching edge,
/// and proposals are intersected as long as the intersection stays
/// non-empty. A novel axiom's own edges are absent from the graph, so
/// anchors that match nothing are skipped rather than failing the query.
fn bind_blanks(
    graph: &RelationalGraph,
    axiom: &Axiom,
    edges: &BTreeSet<Edge>,
) -> Result<Vec<ResolvedEdges>, EvalError> {
    let unscorable = |reason: &str| EvalError::Unscorable {
        axiom: serialize_axiom(axiom),
        reason: reason.to_owned(),
    };

    let mut blanks: BTreeSet<&str> = BTreeSet::new();
    for edge in edges {
        if Edge::is_blank_node(&edge.head) {
            blanks.insert(&edge.head);
        }
        if Edge::is_blank_node(&edge.tail) {
            blanks.insert(&edge.tail);
        }
    }

    // Grounded endpoints must resolve regardless of the bindings.
    for edge in edges {
        if !Edge::is_blank_node(&edge.head) && graph.nodes.get(&edge.head).is_none() {
            return Err(EvalError::UnknownIdentifier(edge.head.clone()));
        }
        if !Edge::is_blank_node(&edge.tail) && graph.nodes.get(&edge.tail).is_none() {
            return Err(EvalError::UnknownIdentifier(edge.tail.clone()));
        }
        if graph.labels.get(&edge.label).is_none() {
            return Err(EvalError::UnknownIdentifier(edge.label.clone()));
        }
    }

    let mut assignments: Vec<BTreeMap<&str, u32>> = vec![BTreeMap::new()];
    for blank in &blanks {
        let mut extended = Vec::new();
        for assignment in &assignments {
            let mut candidates: Option<BTreeSet<u32>> = None;
            for edge in edges {
                let proposal = anchor_candidates(graph, edge, blank, assignment);
                let Some(proposal) = proposal else { continue };
                if proposal.is_empty() {
                    continue;
                }
                candidates = Some(match candidates {
                    None => proposal,
                    Some(current) => {
                        let narrowed: BTreeSet<u32> =
                            current.intersection(&proposal).copied().collect();
                        if narrowed.is_empty() {
                            current
                        } else {
                            narrowed
                        }
                    }
                });
            }
            let Some(candidates) = candidates else {
                return Err(unscorable(&format!(
                    "blank node {blank} has no structural anchor in the graph"
                )));
            };
            for candidate in candidates {
                let mut next = assignment.clone();
                next.insert(blank, candidate);
                extended.push(next);
                if extended.len() > MAX_BLANK_ASSIGNMENTS {
                    return Err(unscorable("too many candidate blank-node bindings"));
                }
            }
        }
        assignments = extended;
        if assignments.is_empty() {
            return Err(unscorable(&format!("no graph node can stand in for {blank}")));
        }
    }

    let resolved = assignments
        .into_iter()
        .map(|assignment| {
            edges
                .iter()
                .map(|edge| {
                    let h = node_index(graph, &edge.head, &assignment);
                    let l = graph.labels.get(&edge.label).unwrap();
                    let t = node_index(graph, &edge.tail, &assignment);
                    (h, l, t)
                })
                .collect()
        })
        .collect();
    Ok(resolved)
}

fn node_index(graph: &RelationalGraph, id: &str, assignment: &BTreeMap<&str, u32>) -> u32 {
    if Edge::is_blank_node(id) {
        assignment[id]
    } else {
        graph.nodes.get(id).unwrap()
    }
}

/// Graph nodes that could play `blank`'s role in this edge; `None` when
/// the edge does not anchor the blank (other endpoint unresolved).
fn anchor_candidates(
    graph: &RelationalGraph,
    edge: &Edge,
    blank: &str,
    bound: &BTreeMap<&str, u32>,
) -> Option<BTreeSet<u32>> {
    let label = graph.labels.get(&edge.label)?;
    let resolve_other = |id: &str| -> Option<u32> {
        if Edge::is_blank_node(id) {
            bound.get(id).copied()
        } else {
            graph.nodes.get(id)
        }
    };
    if edge.head == blank {
        let tail = resolve_other(&edge.tail)?;
        Some(
            graph
                .edges
                .iter()
                .filter(|&&(_, l, t)| l == label && t == tail)
                .map(|&(h, _, _)| h)
                .collect(),
        )
    } else if edge.tail == blank {
        let head = resolve_other(&edge.head)?;
        Some(
            graph
                .edges
                .iter()
                .filter(|&&(h, l, _)| l == label && h == head)
                .map(|&(_, _, t)| t)
                .collect(),
        )
    } else {
        None
    }
}
