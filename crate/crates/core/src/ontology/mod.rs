//! Axiom AST, textual format, signatures and ablation splitting.

mod ast;
mod parser;
mod split;
mod text;

pub use ast::{Axiom, ClassExpression, ClassId, IndividualId, RoleId, Signature};
pub use parser::{parse_axiom, parse_ontology, parse_ontology_with, ParseError, ParserConfig};
pub use split::{split_ontology, SplitError, SplitPattern};
pub use text::{serialize_axiom, serialize_ontology};

use std::collections::BTreeMap;

/// A signature together with an ordered list of axioms.
///
/// The signature is closed over the axioms: every identifier used by an
/// axiom is registered in it. Extra identifiers (for instance the full
/// class pool of an ontology this one was split from) are allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ontology {
    pub prefixes: BTreeMap<String, String>,
    pub signature: Signature,
    pub axioms: Vec<Axiom>,
}

impl Ontology {
    /// Builds an ontology from axioms, computing the signature from usage.
    pub fn from_axioms(axioms: Vec<Axiom>) -> Result<Self, NamespaceClash> {
        let signature = Signature::from_axioms(&axioms)?;
        Ok(Ontology { prefixes: BTreeMap::new(), signature, axioms })
    }

    /// Expands every `EquivalentClasses` axiom into all ordered pairwise
    /// `SubClassOf` axioms; other axioms pass through unchanged. The source
    /// axiom is kept alongside each expansion so projections can attribute
    /// edges to it.
    pub fn expanded_views(axiom: &Axiom) -> Vec<Axiom> {
        match axiom {
            Axiom::EquivalentClasses(members) => {
                let mut views = Vec::new();
                for (i, a) in members.iter().enumerate() {
                    for (j, b) in members.iter().enumerate() {
                        if i != j {
                            views.push(Axiom::SubClassOf { sub: a.clone(), sup: b.clone() });
                        }
                    }
                }
                views
            }
            other => vec![other.clone()],
        }
    }
}

/// An identifier was used in more than one of the class/role/individual
/// namespaces.
#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
#[error("identifier `{id}` is used both as {first} and as {second}")]
pub struct NamespaceClash {
    pub id: String,
    pub first: &'static str,
    pub second: &'static str,
}
