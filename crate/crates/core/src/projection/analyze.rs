//! Executable analysis of the formal projection properties: totality over
//! the asserted axioms, simplicity (one edge per axiom) and injectivity
//! (no two axioms sharing an edge set), plus edge statistics.

use std::collections::{BTreeMap, BTreeSet};

use crate::ontology::{serialize_axiom, Axiom, Ontology};
use crate::reasoner::{normalize, saturate};

use super::{
    canonicalize_blank_nodes, labels, project, Edge, Method, MethodKind, ProjectionError,
    ProjectionResult,
};

#[derive(Debug, Clone)]
pub struct PropertyReport {
    pub method: MethodKind,
    pub total_over_asserted: bool,
    /// |Ax ∖ skipped| / |Ax|; 1.0 for an empty ontology.
    pub coverage: f64,
    /// Every projected axiom maps to exactly one edge.
    pub simple: bool,
    pub injective: bool,
    /// Groups of at least two axioms sharing an identical edge set.
    pub collisions: Vec<Vec<Axiom>>,
}

impl PropertyReport {
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("method\t{}\n", self.method));
        out.push_str(&format!("total_over_asserted\t{}\n", self.total_over_asserted));
        out.push_str(&format!("coverage\t{:.4}\n", self.coverage));
        out.push_str(&format!("simple\t{}\n", self.simple));
        out.push_str(&format!("injective\t{}\n", self.injective));
        out.push_str(&format!("collision_groups\t{}\n", self.collisions.len()));
        for group in &self.collisions {
            let rendered: Vec<String> = group.iter().map(serialize_axiom).collect();
            out.push_str(&format!("collision\t{}\n", rendered.join(" | ")));
        }
        out
    }
}

/// Runs the batch projection (computing a closure when the method needs
/// one) and checks the properties on the result.
pub fn analyze_properties(
    method: &Method,
    ontology: &Ontology,
) -> Result<PropertyReport, ProjectionError> {
    let closure = match method {
        Method::Patterns { .. } => Some(saturate(&normalize(ontology))),
        _ => None,
    };
    let pr = project(method, ontology, closure.as_ref())?;
    Ok(analyze_result(&pr, ontology))
}

pub(crate) fn analyze_result(pr: &ProjectionResult, ontology: &Ontology) -> PropertyReport {
    let axiom_count = ontology.axioms.len();
    let skipped: BTreeSet<&Axiom> = pr.skipped.iter().collect();
    let covered = axiom_count - ontology.axioms.iter().filter(|a| skipped.contains(a)).count();
    let coverage = if axiom_count == 0 { 1.0 } else { covered as f64 / axiom_count as f64 };

    let simple = pr.per_axiom.values().all(|edges| edges.len() == 1);

    // Injectivity check over the per-axiom sets, comparing rdf subgraphs
    // modulo blank-node names.
    let mut by_edges: BTreeMap<BTreeSet<Edge>, Vec<Axiom>> = BTreeMap::new();
    for (axiom, edges) in &pr.per_axiom {
        let key = if pr.method == MethodKind::Rdf {
            canonicalize_blank_nodes(edges)
        } else {
            edges.clone()
        };
        by_edges.entry(key).or_default().push(axiom.clone());
    }
    let collisions: Vec<Vec<Axiom>> =
        by_edges.into_values().filter(|group| group.len() > 1).collect();

    PropertyReport {
        method: pr.method,
        total_over_asserted: coverage == 1.0,
        coverage,
        simple,
        injective: collisions.is_empty(),
        collisions,
    }
}

/// Edge statistics mirroring the projection-size comparisons: total edges,
/// subclass edges (with share), inverse-labeled edges and blank nodes.
#[derive(Debug, Clone)]
pub struct EdgeStats {
    pub total: usize,
    pub subclass: usize,
    pub subclass_pct: f64,
    pub inverse: usize,
    pub blank_nodes: usize,
}

pub fn edge_stats(pr: &ProjectionResult) -> EdgeStats {
    let total = pr.edges.len();
    let subclass = pr.edges.iter().filter(|e| e.label == labels::SUBCLASSOF).count();
    let inverse = pr
        .edges
        .iter()
        .filter(|e| e.label == labels::SUBCLASSOF_INV || e.label == labels::TYPE_INV)
        .count();
    EdgeStats {
        total,
        subclass,
        subclass_pct: if total == 0 { 0.0 } else { 100.0 * subclass as f64 / total as f64 },
        inverse,
        blank_nodes: pr.blank_node_count(),
    }
}

/// Number of identical edges two projections share.
pub fn shared_edges(a: &ProjectionResult, b: &ProjectionResult) -> usize {
    a.edge_set().intersection(&b.edge_set()).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::parse_ontology;

    #[test]
    fn taxonomy_on_pure_taxonomy_is_total_simple_injective() {
        let o = parse_ontology("SubClassOf(:A :B)\nSubClassOf(:B :C)").unwrap();
        let report = analyze_properties(&Method::Taxonomy, &o).unwrap();
        assert!(report.total_over_asserted);
        assert!(report.simple);
        assert!(report.injective);
        assert_eq!(report.coverage, 1.0);
    }

    #[test]
    fn owl2vecstar_quantifier_collision() {
        let o = parse_ontology(
            "SubClassOf(:A ObjectSomeValuesFrom(:R :B))\n\
             SubClassOf(:A ObjectAllValuesFrom(:R :B))",
        )
        .unwrap();
        let report = analyze_properties(&Method::owl2vecstar(), &o).unwrap();
        assert!(!report.injective);
        assert_eq!(report.collisions.len(), 1);
        assert_eq!(report.collisions[0].len(), 2);
    }

    #[test]
    fn owl2vecstar_intersection_filler_is_not_simple() {
        let o =
            parse_ontology("SubClassOf(:A ObjectSomeValuesFrom(:R ObjectIntersectionOf(:B :C)))")
                .unwrap();
        let report = analyze_properties(&Method::owl2vecstar(), &o).unwrap();
        assert!(!report.simple);
    }

    #[test]
    fn taxonomy_on_mixed_ontology_is_partial() {
        let o = parse_ontology(
            "SubClassOf(:A :B)\nSubClassOf(:A ObjectSomeValuesFrom(:R :B))",
        )
        .unwrap();
        let report = analyze_properties(&Method::Taxonomy, &o).unwrap();
        assert!(!report.total_over_asserted);
        assert_eq!(report.coverage, 0.5);
    }

    #[test]
    fn taxonomy_edges_are_all_subclass() {
        let o = parse_ontology("SubClassOf(:A :B)\nSubClassOf(:B :C)").unwrap();
        let pr = project(&Method::Taxonomy, &o, None).unwrap();
        let stats = edge_stats(&pr);
        assert_eq!(stats.subclass_pct, 100.0);
        assert_eq!(stats.inverse, 0);
        assert_eq!(stats.blank_nodes, 0);
    }

    #[test]
    fn rdf_collisions_use_canonical_blanks() {
        // Two distinct axioms always get different canonical subgraphs under
        // rdf; the same axiom shape over different classes must not collide.
        let o = parse_ontology(
            "SubClassOf(:A ObjectSomeValuesFrom(:R :B))\n\
             SubClassOf(:C ObjectSomeValuesFrom(:R :D))",
        )
        .unwrap();
        let report = analyze_properties(&Method::Rdf, &o).unwrap();
        assert!(report.injective);
        assert!(report.total_over_asserted);
    }
}
