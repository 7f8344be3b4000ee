//! Taxonomy projection: one `subclassof` edge per asserted subclass axiom
//! between named classes. Simple and injective by construction; every
//! other axiom is skipped.

use std::collections::BTreeSet;

use crate::ontology::{Axiom, ClassExpression, Ontology};

use super::{labels, Edge, EdgeAccumulator, MethodKind, ProjectionResult};

pub fn project_taxonomy(ontology: &Ontology) -> ProjectionResult {
    let mut acc = EdgeAccumulator::new(MethodKind::Taxonomy);
    let mut skipped = Vec::new();
    for axiom in &ontology.axioms {
        let edges = taxonomy_axiom_edges(axiom);
        if edges.is_empty() {
            skipped.push(axiom.clone());
        } else {
            for edge in edges {
                acc.add(axiom, edge);
            }
        }
    }
    acc.finish(skipped)
}

pub(crate) fn taxonomy_axiom_edges(axiom: &Axiom) -> BTreeSet<Edge> {
    let mut edges = BTreeSet::new();
    if let Axiom::SubClassOf {
        sub: ClassExpression::Named(sub),
        sup: ClassExpression::Named(sup),
    } = axiom
    {
        edges.insert(Edge::new(sub.as_str(), labels::SUBCLASSOF, sup.as_str()));
    }
    edges
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::parse_ontology;

    #[test]
    fn named_subclass_becomes_single_edge() {
        let o = parse_ontology("SubClassOf(:C :D)").unwrap();
        let pr = project_taxonomy(&o);
        assert_eq!(pr.edges, vec![Edge::new(":C", "subclassof", ":D")]);
        assert!(pr.skipped.is_empty());
    }

    #[test]
    fn everything_else_is_skipped() {
        let o = parse_ontology("SubClassOf(:A ObjectSomeValuesFrom(:R :B))").unwrap();
        let pr = project_taxonomy(&o);
        assert!(pr.edges.is_empty());
        assert_eq!(pr.skipped.len(), 1);
    }

    #[test]
    fn empty_ontology_gives_empty_graph() {
        let o = parse_ontology("").unwrap();
        let pr = project_taxonomy(&o);
        assert!(pr.edges.is_empty());
        assert!(pr.per_axiom.is_empty());
    }
}
