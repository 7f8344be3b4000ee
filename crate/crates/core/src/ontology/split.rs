//! Seeded ablation splits: remove a fraction of the `sub` or `ex` axioms.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use thiserror::Error;

use super::ast::{Axiom, ClassExpression};
use super::Ontology;

/// Which axiom shape the split removes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitPattern {
    /// `SubClassOf(Named, Named)`
    Sub,
    /// `SubClassOf(Named, ObjectSomeValuesFrom(role, Named))`
    Ex,
}

impl SplitPattern {
    pub fn matches(&self, axiom: &Axiom) -> bool {
        match (self, axiom) {
            (
                SplitPattern::Sub,
                Axiom::SubClassOf {
                    sub: ClassExpression::Named(_),
                    sup: ClassExpression::Named(_),
                },
            ) => true,
            (
                SplitPattern::Ex,
                Axiom::SubClassOf { sub: ClassExpression::Named(_), sup: ClassExpression::Exists(_, filler) },
            ) => matches!(filler.as_ref(), ClassExpression::Named(_)),
            _ => false,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            SplitPattern::Sub => "sub",
            SplitPattern::Ex => "ex",
        }
    }
}

impl std::str::FromStr for SplitPattern {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sub" => Ok(SplitPattern::Sub),
            "ex" => Ok(SplitPattern::Ex),
            other => Err(format!("unknown split pattern `{other}` (expected `sub` or `ex`)")),
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum SplitError {
    #[error("fraction must be in (0, 1), got {0}")]
    FractionOutOfRange(f64),
    #[error("no axioms match the `{0}` pattern")]
    NoMatchingAxioms(&'static str),
}

/// Removes exactly `ceil(fraction * matching)` axioms of the given pattern,
/// selected by a seeded shuffle. The reduced ontology keeps the original
/// signature (the full class pool is still needed as the candidate set for
/// evaluation) and the original order of the surviving axioms. The removed
/// axioms are returned in their original order.
pub fn split_ontology(
    ontology: &Ontology,
    pattern: SplitPattern,
    fraction: f64,
    seed: u64,
) -> Result<(Ontology, Vec<Axiom>), SplitError> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(SplitError::FractionOutOfRange(fraction));
    }
    let matching: Vec<usize> = ontology
        .axioms
        .iter()
        .enumerate()
        .filter(|(_, a)| pattern.matches(a))
        .map(|(i, _)| i)
        .collect();
    if matching.is_empty() {
        return Err(SplitError::NoMatchingAxioms(pattern.as_str()));
    }
    let count = (fraction * matching.len() as f64).ceil() as usize;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut shuffled = matching;
    shuffled.shuffle(&mut rng);
    let mut selected: Vec<usize> = shuffled.into_iter().take(count).collect();
    selected.sort_unstable();

    let mut removed = Vec::with_capacity(count);
    let mut kept = Vec::with_capacity(ontology.axioms.len() - count);
    let mut next = selected.iter().peekable();
    for (i, axiom) in ontology.axioms.iter().enumerate() {
        if next.peek() == Some(&&i) {
            next.next();
            removed.push(axiom.clone());
        } else {
            kept.push(axiom.clone());
        }
    }
    let reduced = Ontology {
        prefixes: ontology.prefixes.clone(),
        signature: ontology.signature.clone(),
        axioms: kept,
    };
    Ok((reduced, removed))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn taxonomy(n: usize) -> Ontology {
        let axioms = (0..n)
            .map(|i| {
                Axiom::subclass(
                    ClassExpression::named(format!(":C{i}")),
                    ClassExpression::named(format!(":C{}", i + 1)),
                )
            })
            .collect();
        Ontology::from_axioms(axioms).unwrap()
    }

    #[test]
    fn removes_exact_ceiling_count() {
        let o = taxonomy(100);
        let (reduced, removed) = split_ontology(&o, SplitPattern::Sub, 0.10, 7).unwrap();
        assert_eq!(removed.len(), 10);
        assert_eq!(reduced.axioms.len(), 90);

        let (_, removed) = split_ontology(&taxonomy(7), SplitPattern::Sub, 0.30, 7).unwrap();
        assert_eq!(removed.len(), 3); // ceil(2.1)
    }

    #[test]
    fn union_of_parts_is_original() {
        let o = taxonomy(40);
        let (reduced, removed) = split_ontology(&o, SplitPattern::Sub, 0.25, 3).unwrap();
        let mut all: Vec<_> = reduced.axioms.iter().chain(removed.iter()).cloned().collect();
        all.sort();
        let mut original = o.axioms.clone();
        original.sort();
        assert_eq!(all, original);
    }

    #[test]
    fn same_seed_same_split() {
        let o = taxonomy(50);
        let a = split_ontology(&o, SplitPattern::Sub, 0.2, 99).unwrap();
        let b = split_ontology(&o, SplitPattern::Sub, 0.2, 99).unwrap();
        assert_eq!(a.1, b.1);
        assert_eq!(a.0.axioms, b.0.axioms);
        let c = split_ontology(&o, SplitPattern::Sub, 0.2, 100).unwrap();
        assert_ne!(a.1, c.1);
    }

    #[test]
    fn ex_pattern_selects_existentials_only() {
        let mut axioms = vec![
            Axiom::subclass(
                ClassExpression::named(":A"),
                ClassExpression::exists(":R", ClassExpression::named(":B")),
            ),
            Axiom::subclass(
                ClassExpression::named(":A"),
                ClassExpression::exists(
                    ":R",
                    ClassExpression::And(vec![
                        ClassExpression::named(":B"),
                        ClassExpression::named(":C"),
                    ]),
                ),
            ),
        ];
        axioms.push(Axiom::subclass(
            ClassExpression::named(":A"),
            ClassExpression::named(":B"),
        ));
        let o = Ontology::from_axioms(axioms).unwrap();
        let err = split_ontology(&o, SplitPattern::Ex, 0.0, 1).unwrap_err();
        assert!(matches!(err, SplitError::FractionOutOfRange(_)));
        let (_, removed) = split_ontology(&o, SplitPattern::Ex, 0.99, 1).unwrap();
        // Only the named-filler existential matches.
        assert_eq!(removed.len(), 1);
    }

    #[test]
    fn no_matching_axioms_is_an_error() {
        let o = Ontology::from_axioms(vec![Axiom::subclass(
            ClassExpression::named(":A"),
            ClassExpression::exists(":R", ClassExpression::named(":B")),
        )])
        .unwrap();
        let err = split_ontology(&o, SplitPattern::Sub, 0.5, 1).unwrap_err();
        assert_eq!(err, SplitError::NoMatchingAxioms("sub"));
    }
}
