//! Test-only oracles and generators shared between the core test suites
//! and the acceptance gate. Not part of the shipped library.

pub mod el_oracle;
pub mod grad_check;

use ontoproj_core::ontology::{Axiom, ClassExpression, Ontology};

/// A three-level taxonomy: `leaves_per_mid × mids` leaf classes under
/// `mids` mid classes under one root.
pub fn three_level_taxonomy(mids: usize, leaves_per_mid: usize) -> Ontology {
    let mut axioms = Vec::new();
    for m in 0..mids {
        axioms.push(Axiom::subclass(
            ClassExpression::named(format!(":M{m}")),
            ClassExpression::named(":Root"),
        ));
        for l in 0..leaves_per_mid {
            axioms.push(Axiom::subclass(
                ClassExpression::named(format!(":L{m}_{l}")),
                ClassExpression::named(format!(":M{m}")),
            ));
        }
    }
    Ontology::from_axioms(axioms).unwrap()
}
