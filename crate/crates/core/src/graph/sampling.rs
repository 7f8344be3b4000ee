//! Negative sampling by corrupting one side of a positive edge.

use rand::Rng;
use thiserror::Error;

use super::RelationalGraph;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SamplingError {
    #[error("cannot sample a negative: the graph has {0} node(s), need at least 2")]
    DegenerateGraph(usize),
    #[error("no corrupted edge available for ({0}, {1}, {2}) in filtered mode")]
    Exhausted(u32, u32, u32),
}

/// Tail corruption: `(h, r, t)` becomes `(h, r, t')` with `t'` uniform over
/// the other nodes.
pub fn sample_negative(
    edge: (u32, u32, u32),
    graph: &RelationalGraph,
    rng: &mut impl Rng,
) -> Result<(u32, u32, u32), SamplingError> {
    NegativeSampler::default().sample(edge, graph, rng)
}

/// Configurable sampler. Tail corruption is the default; head corruption
/// is available behind a flag, and filtered mode rejects corruptions that
/// produce an existing edge of the graph.
#[derive(Debug, Clone, Copy, Default)]
pub struct NegativeSampler {
    pub corrupt_head: bool,
    pub filtered: bool,
}

impl NegativeSampler {
    pub fn sample(
        &self,
        edge: (u32, u32, u32),
        graph: &RelationalGraph,
        rng: &mut impl Rng,
    ) -> Result<(u32, u32, u32), SamplingError> {
        let n = graph.nodes.len() as u32;
        if n < 2 {
            return Err(SamplingError::DegenerateGraph(n as usize));
        }
        let original = if self.corrupt_head { edge.0 } else { edge.2 };
        // Bounded redraws, then a deterministic scan so filtered mode cannot
        // spin on dense graphs.
        let attempts = 4 * n as usize + 16;
        for _ in 0..attempts {
            let draw = rng.random_range(0..n - 1);
            let candidate = if draw >= original { draw + 1 } else { draw };
            let corrupted = self.corrupted(edge, candidate);
            if !self.filtered || !graph.contains_edge(corrupted) {
                return Ok(corrupted);
            }
        }
        for candidate in 0..n {
            if candidate == original {
                continue;
            }
            let corrupted = self.corrupted(edge, candidate);
            if !graph.contains_edge(corrupted) {
                return Ok(corrupted);
            }
        }
        Err(SamplingError::Exhausted(edge.0, edge.1, edge.2))
    }

    fn corrupted(&self, edge: (u32, u32, u32), candidate: u32) -> (u32, u32, u32) {
        if self.corrupt_head {
            (candidate, edge.1, edge.2)
        } else {
            (edge.0, edge.1, candidate)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projection::Edge;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn line_graph(n: usize) -> RelationalGraph {
        let edges: Vec<Edge> = (0..n - 1)
            .map(|i| Edge::new(format!(":C{i}"), "r", format!(":C{}", i + 1)))
            .collect();
        RelationalGraph::from_edges(edges.iter())
    }

    #[test]
    fn two_node_graph_has_a_single_choice() {
        let graph = line_graph(2);
        let mut rng = ChaCha12Rng::seed_from_u64(0);
        let neg = sample_negative((0, 0, 1), &graph, &mut rng).unwrap();
        assert_eq!(neg, (0, 0, 0));
    }

    #[test]
    fn never_returns_the_original_tail() {
        let graph = line_graph(10);
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let neg = sample_negative((0, 0, 1), &graph, &mut rng).unwrap();
            assert_ne!(neg.2, 1);
            assert_eq!((neg.0, neg.1), (0, 0));
        }
    }

    #[test]
    fn filtered_mode_avoids_existing_edges() {
        let graph = line_graph(4); // edges (0,r,1), (1,r,2), (2,r,3)
        let sampler = NegativeSampler { corrupt_head: false, filtered: true };
        let mut rng = ChaCha12Rng::seed_from_u64(2);
        for _ in 0..200 {
            let neg = sampler.sample((1, 0, 2), &graph, &mut rng).unwrap();
            assert!(!graph.contains_edge(neg));
            assert_ne!(neg.2, 2);
        }
    }

    #[test]
    fn head_corruption_changes_the_head() {
        let graph = line_graph(5);
        let sampler = NegativeSampler { corrupt_head: true, filtered: false };
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        for _ in 0..100 {
            let neg = sampler.sample((1, 0, 2), &graph, &mut rng).unwrap();
            assert_ne!(neg.0, 1);
            assert_eq!((neg.1, neg.2), (0, 2));
        }
    }

    #[test]
    fn single_node_graph_is_rejected() {
        let graph = RelationalGraph::from_edges(
            [Edge::new(":A", "r", ":A")].iter(),
        );
        let mut rng = ChaCha12Rng::seed_from_u64(4);
        let err = sample_negative((0, 0, 0), &graph, &mut rng).unwrap_err();
        assert_eq!(err, SamplingError::DegenerateGraph(1));
    }

    #[test]
    fn draws_are_uniform_over_the_other_nodes() {
        // Chi-square against uniform over 9 candidate tails, 1e5 draws.
        let graph = line_graph(10);
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        let mut counts = [0u32; 10];
        let draws = 100_000;
        for _ in 0..draws {
            let neg = sample_negative((0, 0, 1), &graph, &mut rng).unwrap();
            counts[neg.2 as usize] += 1;
        }
        assert_eq!(counts[1], 0);
        let expected = draws as f64 / 9.0;
        let chi2: f64 = counts
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != 1)
            .map(|(_, &c)| {
                let d = c as f64 - expected;
                d * d / expected
            })
            .sum();
        // df = 8; mean 8, sd = sqrt(16) = 4; allow 3 sigma.
        assert!(chi2 < 8.0 + 3.0 * 4.0, "chi-square {chi2} too large");
    }
}
