//! Evaluation report: per-query ranks, aggregate metrics, the internal
//! consistency validator, and TSV / table rendering.

use thiserror::Error;

use crate::ontology::{serialize_axiom, Axiom};
use crate::projection::MethodKind;

use super::rank::EvalMode;

/// How tied scores count against the target. Pessimistic ranking places
/// the target behind every candidate with the same score, which makes the
/// rank-doubling arithmetic of non-injective methods exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TieMode {
    Pessimistic,
    Optimistic,
}

impl std::fmt::Display for TieMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            TieMode::Pessimistic => "pessimistic",
            TieMode::Optimistic => "optimistic",
        })
    }
}

/// MR, Hits@k (percent) and rank-based AUC (percent).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricSet {
    pub mr: f64,
    pub hits1: f64,
    pub hits10: f64,
    pub hits100: f64,
    pub auc: f64,
}

impl MetricSet {
    /// Aggregates `(rank, candidate_count)` pairs. AUC is the mean of
    /// `(N − rank) / (N − 1)` per query, scaled to percent.
    pub fn from_ranks(ranks: impl Iterator<Item = (usize, usize)> + Clone) -> MetricSet {
        let n = ranks.clone().count();
        if n == 0 {
            return MetricSet { mr: 0.0, hits1: 0.0, hits10: 0.0, hits100: 0.0, auc: 0.0 };
        }
        let total = n as f64;
        let mut rank_sum = 0.0;
        let mut hits = [0usize; 3];
        let mut auc_sum = 0.0;
        for (rank, candidates) in ranks {
            rank_sum += rank as f64;
            for (slot, k) in hits.iter_mut().zip([1usize, 10, 100]) {
                if rank <= k {
                    *slot += 1;
                }
            }
            auc_sum += if candidates <= 1 {
                1.0
            } else {
                (candidates - rank) as f64 / (candidates - 1) as f64
            };
        }
        MetricSet {
            mr: rank_sum / total,
            hits1: 100.0 * hits[0] as f64 / total,
            hits10: 100.0 * hits[1] as f64 / total,
            hits100: 100.0 * hits[2] as f64 / total,
            auc: 100.0 * auc_sum / total,
        }
    }
}

#[derive(Debug, Clone)]
pub struct QueryOutcome {
    pub axiom: Axiom,
    pub raw_rank: usize,
    pub raw_candidates: usize,
    pub filtered_rank: usize,
    pub filtered_candidates: usize,
}

#[derive(Debug, Clone)]
pub struct EvaluationReport {
    pub method: MethodKind,
    pub mode: EvalMode,
    pub ties: TieMode,
    pub queries: Vec<QueryOutcome>,
    /// Queries excluded from the metrics, with the reason.
    pub excluded: Vec<(Axiom, String)>,
    pub raw: MetricSet,
    pub filtered: MetricSet,
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ReportViolation {
    #[error("filtered MR {filtered} exceeds raw MR {raw}")]
    FilteredMrAboveRaw { raw: f64, filtered: f64 },
    #[error("query {query}: filtered rank {filtered} exceeds raw rank {raw}")]
    FilteredRankAboveRaw { query: usize, raw: usize, filtered: usize },
    #[error("hits not monotone in k: H@1 {h1}, H@10 {h10}, H@100 {h100}")]
    HitsNotMonotone { h1: f64, h10: f64, h100: f64 },
    #[error("AUC {0} outside [0, 100]")]
    AucOutOfRange(f64),
}

impl EvaluationReport {
    /// Checks filtered dominance, Hits@k monotonicity and the AUC range.
    pub fn validate(&self) -> Result<(), ReportViolation> {
        for (i, q) in self.queries.iter().enumerate() {
            if q.filtered_rank > q.raw_rank {
                return Err(ReportViolation::FilteredRankAboveRaw {
                    query: i,
                    raw: q.raw_rank,
                    filtered: q.filtered_rank,
                });
            }
        }
        if !self.queries.is_empty() && self.filtered.mr > self.raw.mr {
            return Err(ReportViolation::FilteredMrAboveRaw {
                raw: self.raw.mr,
                filtered: self.filtered.mr,
            });
        }
        for metrics in [&self.raw, &self.filtered] {
            if metrics.hits1 > metrics.hits10 || metrics.hits10 > metrics.hits100 {
                return Err(ReportViolation::HitsNotMonotone {
                    h1: metrics.hits1,
                    h10: metrics.hits10,
                    h100: metrics.hits100,
                });
            }
            if !(0.0..=100.0).contains(&metrics.auc) {
                return Err(ReportViolation::AucOutOfRange(metrics.auc));
            }
        }
        Ok(())
    }

    /// Machine-readable report; line order and float formatting are fixed
    /// so identical runs produce identical bytes.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("method\t{}\n", self.method));
        out.push_str(&format!("mode\t{}\n", self.mode));
        out.push_str(&format!("ties\t{}\n", self.ties));
        out.push_str(&format!("queries\t{}\n", self.queries.len()));
        out.push_str(&format!("excluded\t{}\n", self.excluded.len()));
        for (variant, m) in [("raw", &self.raw), ("filtered", &self.filtered)] {
            out.push_str(&format!(
                "{variant}\tMR\t{:.4}\tH@1\t{:.4}\tH@10\t{:.4}\tH@100\t{:.4}\tAUC\t{:.4}\n",
                m.mr, m.hits1, m.hits10, m.hits100, m.auc
            ));
        }
        for q in &self.queries {
            out.push_str(&format!(
                "query\t{}\t{}\t{}\t{}\t{}\n",
                serialize_axiom(&q.axiom),
                q.raw_rank,
                q.raw_candidates,
                q.filtered_rank,
                q.filtered_candidates
            ));
        }
        for (axiom, reason) in &self.excluded {
            out.push_str(&format!("excluded\t{}\t{}\n", serialize_axiom(axiom), reason));
        }
        out
    }

    /// Human-readable summary table.
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{} projection, case {}, {} ties, {} queries ({} excluded)\n",
            self.method,
            self.mode,
            self.ties,
            self.queries.len(),
            self.excluded.len()
        ));
        out.push_str(&format!(
            "{:<10} {:>10} {:>8} {:>8} {:>8} {:>8}\n",
            "", "MR", "H@1", "H@10", "H@100", "AUC"
        ));
        for (name, m) in [("raw", &self.raw), ("filtered", &self.filtered)] {
            out.push_str(&format!(
                "{:<10} {:>10.2} {:>8.2} {:>8.2} {:>8.2} {:>8.2}\n",
                name, m.mr, m.hits1, m.hits10, m.hits100, m.auc
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::parse_axiom;

    fn query(raw: usize, filtered: usize, n: usize) -> QueryOutcome {
        QueryOutcome {
            axiom: parse_axiom("SubClassOf(:A :B)").unwrap(),
            raw_rank: raw,
            raw_candidates: n,
            filtered_rank: filtered,
            filtered_candidates: n,
        }
    }

    fn report(queries: Vec<QueryOutcome>) -> EvaluationReport {
        let raw = MetricSet::from_ranks(queries.iter().map(|q| (q.raw_rank, q.raw_candidates)));
        let filtered =
            MetricSet::from_ranks(queries.iter().map(|q| (q.filtered_rank, q.filtered_candidates)));
        EvaluationReport {
            method: MethodKind::Taxonomy,
            mode: EvalMode::A,
            ties: TieMode::Pessimistic,
            queries,
            excluded: Vec::new(),
            raw,
            filtered,
        }
    }

    #[test]
    fn auc_matches_the_shared_candidate_count_identity() {
        // AUC = 100 × (1 − (MR − 1) / (N − 1)) when every query has N
        // candidates.
        let n = 101;
        let queries: Vec<QueryOutcome> =
            (1..=50).map(|rank| query(rank, rank, n)).collect();
        let r = report(queries);
        let expected = 100.0 * (1.0 - (r.raw.mr - 1.0) / (n as f64 - 1.0));
        assert!((r.raw.auc - expected).abs() < 1e-9);
    }

    #[test]
    fn validator_accepts_dominated_filtered_ranks() {
        let r = report(vec![query(5, 3, 10), query(2, 2, 10)]);
        r.validate().unwrap();
    }

    #[test]
    fn validator_rejects_filtered_above_raw() {
        let r = report(vec![query(3, 5, 10)]);
        assert!(matches!(
            r.validate(),
            Err(ReportViolation::FilteredRankAboveRaw { .. })
        ));
    }

    #[test]
    fn hits_are_monotone_by_construction() {
        let r = report(vec![query(1, 1, 200), query(50, 40, 200), query(150, 150, 200)]);
        assert!(r.raw.hits1 <= r.raw.hits10 && r.raw.hits10 <= r.raw.hits100);
        r.validate().unwrap();
    }

    #[test]
    fn tsv_is_stable() {
        let r = report(vec![query(2, 1, 10)]);
        assert_eq!(r.to_tsv(), r.to_tsv());
        assert!(r.to_tsv().contains("raw\tMR\t2.0000"));
    }
}
