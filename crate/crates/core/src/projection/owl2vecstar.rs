//! OWL2Vec*-style projection.
//!
//! Quantified restrictions with a named or flat ⊓/⊔ filler become one role
//! edge per filler member, in the same orientation regardless of which side
//! of the subsumption the restriction is on. Quantifiers and connectives
//! are deliberately conflated: ∃ and ∀ (and ⊓ and ⊔) project identically,
//! which makes the method non-injective. Named subsumptions produce
//! `subclassof` plus a mirrored `subclassof⁻¹` edge, assertions produce
//! `type`/`type⁻¹` and plain role edges, and a conjunction superclass
//! additionally yields `subclassof` edges to its named members.
//!
//! Context-dependent rules run over the batch result to a fixed point:
//! a domain/range pair yields an `(A, r, B)` edge, a subrole re-emits its
//! superrole's projected edges, inverse declarations mirror projected
//! edges, and role chains compose projected paths. Edges from those rules
//! are attributed to the declaring role axioms.

use std::collections::BTreeSet;

use crate::ontology::{Axiom, ClassExpression, Ontology, RoleId};

use super::{labels, Edge, EdgeAccumulator, MethodKind, ProjectionResult};

pub fn project_owl2vecstar(ontology: &Ontology, inverse_edges: bool) -> ProjectionResult {
    let mut acc = EdgeAccumulator::new(MethodKind::Owl2VecStar);

    // Context-free rows.
    for axiom in &ontology.axioms {
        for edge in context_free_edges(axiom, inverse_edges) {
            acc.add(axiom, edge);
        }
    }

    // Domain/range pairing: every (domain, range) declaration pair for the
    // same role yields one edge, attributed to both axioms.
    let domains: Vec<(&Axiom, &RoleId, &ClassExpression)> = ontology
        .axioms
        .iter()
        .filter_map(|a| match a {
            Axiom::Domain(r, c) => Some((a, r, c)),
            _ => None,
        })
        .collect();
    let ranges: Vec<(&Axiom, &RoleId, &ClassExpression)> = ontology
        .axioms
        .iter()
        .filter_map(|a| match a {
            Axiom::Range(r, c) => Some((a, r, c)),
            _ => None,
        })
        .collect();
    for &(dom_axiom, dom_role, dom_class) in &domains {
        for &(rng_axiom, rng_role, rng_class) in &ranges {
            if dom_role != rng_role {
                continue;
            }
            if let (ClassExpression::Named(a), ClassExpression::Named(b)) = (dom_class, rng_class)
            {
                let edge = Edge::new(a.as_str(), dom_role.as_str(), b.as_str());
                acc.add(dom_axiom, edge.clone());
                acc.add(rng_axiom, edge);
            }
        }
    }

    // Subrole / inverse / chain rows iterate to a fixed point over the
    // projected edges, since each may enable the others.
    loop {
        let mut added = false;
        for axiom in &ontology.axioms {
            match axiom {
                Axiom::SubRoleOf { sub, sup } => {
                    for edge in acc.edges_with_label(sup.as_str()) {
                        added |= acc.add(axiom, Edge::new(edge.head, sub.as_str(), edge.tail));
                    }
                }
                Axiom::InverseRoles(r, s) => {
                    for edge in acc.edges_with_label(r.as_str()) {
                        added |= acc.add(axiom, Edge::new(edge.tail, s.as_str(), edge.head));
                    }
                    for edge in acc.edges_with_label(s.as_str()) {
                        added |= acc.add(axiom, Edge::new(edge.tail, r.as_str(), edge.head));
                    }
                }
                Axiom::RoleChain { chain, sup } => {
                    let mut paths: Vec<(String, String)> = acc
                        .edges_with_label(chain[0].as_str())
                        .into_iter()
                        .map(|e| (e.head, e.tail))
                        .collect();
                    for role in &chain[1..] {
                        let step = acc.edges_with_label(role.as_str());
                        let mut extended = Vec::new();
                        for (start, at) in &paths {
                            for edge in &step {
                                if edge.head == *at {
                                    extended.push((start.clone(), edge.tail.clone()));
                                }
                            }
                        }
                        paths = extended;
                    }
                    for (start, end) in paths {
                        added |= acc.add(axiom, Edge::new(start, sup.as_str(), end));
                    }
                }
                _ => {}
            }
        }
        if !added {
            break;
        }
    }

    let skipped =
        ontology.axioms.iter().filter(|a| !acc.contributed(a)).cloned().collect();
    acc.finish(skipped)
}

/// The rows that depend only on the axiom itself; also the query-time
/// projection of a single axiom.
pub(crate) fn context_free_edges(axiom: &Axiom, inverse_edges: bool) -> BTreeSet<Edge> {
    let mut edges = BTreeSet::new();
    for view in Ontology::expanded_views(axiom) {
        match &view {
            Axiom::SubClassOf { sub, sup } => {
                subclass_edges(sub, sup, inverse_edges, &mut edges);
            }
            Axiom::ClassAssertion(ClassExpression::Named(class), individual) => {
                edges.insert(Edge::new(individual.as_str(), labels::TYPE, class.as_str()));
                if inverse_edges {
                    edges.insert(Edge::new(
                        class.as_str(),
                        labels::TYPE_INV,
                        individual.as_str(),
                    ));
                }
            }
            Axiom::RoleAssertion(role, a, b) => {
                edges.insert(Edge::new(a.as_str(), role.as_str(), b.as_str()));
            }
            _ => {}
        }
    }
    edges
}

fn subclass_edges(
    sub: &ClassExpression,
    sup: &ClassExpression,
    inverse_edges: bool,
    edges: &mut BTreeSet<Edge>,
) {
    match (sub, sup) {
        (ClassExpression::Named(b), ClassExpression::Named(a)) => {
            edges.insert(Edge::new(b.as_str(), labels::SUBCLASSOF, a.as_str()));
            if inverse_edges {
                edges.insert(Edge::new(a.as_str(), labels::SUBCLASSOF_INV, b.as_str()));
            }
        }
        // A ⊑ □r.D and □r.D ⊑ A both project to (A, r, Bi).
        (ClassExpression::Named(a), restriction) if restriction_role(restriction).is_some() => {
            restriction_edges(a.as_str(), restriction, edges);
        }
        (restriction, ClassExpression::Named(a)) if restriction_role(restriction).is_some() => {
            restriction_edges(a.as_str(), restriction, edges);
        }
        // A ⊑ B ⊓ ∃R.C: named members become subclassof edges, restriction
        // members role edges. ⊔ is treated like ⊓.
        (ClassExpression::Named(a), ClassExpression::And(members))
        | (ClassExpression::Named(a), ClassExpression::Or(members)) => {
            for member in members {
                match member {
                    ClassExpression::Named(b) => {
                        edges.insert(Edge::new(a.as_str(), labels::SUBCLASSOF, b.as_str()));
                    }
                    restriction if restriction_role(restriction).is_some() => {
                        restriction_edges(a.as_str(), restriction, edges);
                    }
                    _ => {}
                }
            }
        }
        _ => {}
    }
}

fn restriction_role(expr: &ClassExpression) -> Option<&RoleId> {
    match expr {
        ClassExpression::Exists(r, _) | ClassExpression::Forall(r, _) => Some(r),
        _ => None,
    }
}

fn restriction_edges(named_side: &str, restriction: &ClassExpression, edges: &mut BTreeSet<Edge>) {
    let (role, filler) = match restriction {
        ClassExpression::Exists(r, f) | ClassExpression::Forall(r, f) => (r, f.as_ref()),
        _ => return,
    };
    for member in flat_filler_members(filler) {
        edges.insert(Edge::new(named_side, role.as_str(), member));
    }
}

/// A named filler is itself a member; a flat ⊓/⊔ of named classes yields
/// each member. Anything else does not match the rule.
fn flat_filler_members(filler: &ClassExpression) -> Vec<&str> {
    match filler {
        ClassExpression::Named(id) => vec![id.as_str()],
        ClassExpression::And(members) | ClassExpression::Or(members) => {
            let named: Vec<&str> = members
                .iter()
                .filter_map(|m| match m {
                    ClassExpression::Named(id) => Some(id.as_str()),
                    _ => None,
                })
                .collect();
            if named.len() == members.len() {
                named
            } else {
                Vec::new()
            }
        }
        _ => Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::parse_ontology;

    fn edges(text: &str) -> BTreeSet<Edge> {
        project_owl2vecstar(&parse_ontology(text).unwrap(), true).edge_set()
    }

    fn edge(h: &str, l: &str, t: &str) -> Edge {
        Edge::new(h, l, t)
    }

    #[test]
    fn intersection_filler_yields_member_edges() {
        let got = edges("SubClassOf(:A ObjectSomeValuesFrom(:R ObjectIntersectionOf(:B :C)))");
        let expected: BTreeSet<Edge> =
            [edge(":A", ":R", ":B"), edge(":A", ":R", ":C")].into_iter().collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn quantifiers_and_connectives_are_conflated() {
        let exists = edges("SubClassOf(:A ObjectSomeValuesFrom(:R :B))");
        let forall = edges("SubClassOf(:A ObjectAllValuesFrom(:R :B))");
        assert_eq!(exists, forall);
        let inter = edges("SubClassOf(:A ObjectSomeValuesFrom(:R ObjectIntersectionOf(:B :C)))");
        let union = edges("SubClassOf(:A ObjectSomeValuesFrom(:R ObjectUnionOf(:B :C)))");
        assert_eq!(inter, union);
    }

    #[test]
    fn conjunction_superclass_adds_subclass_edge() {
        let got =
            edges("SubClassOf(:A ObjectIntersectionOf(:B ObjectSomeValuesFrom(:R :C)))");
        let expected: BTreeSet<Edge> =
            [edge(":A", "subclassof", ":B"), edge(":A", ":R", ":C")].into_iter().collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn named_subclass_emits_both_directions() {
        let got = edges("SubClassOf(:B :A)");
        let expected: BTreeSet<Edge> =
            [edge(":B", "subclassof", ":A"), edge(":A", "subclassof⁻¹", ":B")]
                .into_iter()
                .collect();
        assert_eq!(got, expected);

        let plain = project_owl2vecstar(&parse_ontology("SubClassOf(:B :A)").unwrap(), false);
        assert_eq!(plain.edges, vec![edge(":B", "subclassof", ":A")]);
    }

    #[test]
    fn negation_is_skipped() {
        let pr = project_owl2vecstar(
            &parse_ontology("SubClassOf(:A ObjectComplementOf(:B))").unwrap(),
            true,
        );
        assert!(pr.edges.is_empty());
        assert_eq!(pr.skipped.len(), 1);
    }

    #[test]
    fn domain_range_pair_projects() {
        let got = edges("ObjectPropertyDomain(:r :A)\nObjectPropertyRange(:r :B)");
        assert!(got.contains(&edge(":A", ":r", ":B")));
    }

    #[test]
    fn subrole_inherits_superrole_edges() {
        let got = edges(
            "SubClassOf(:A ObjectSomeValuesFrom(:s :B))\nSubObjectPropertyOf(:r :s)",
        );
        assert!(got.contains(&edge(":A", ":s", ":B")));
        assert!(got.contains(&edge(":A", ":r", ":B")));
    }

    #[test]
    fn inverse_roles_mirror_edges() {
        let got = edges(
            "SubClassOf(:A ObjectSomeValuesFrom(:r :B))\nInverseObjectProperties(:r :s)",
        );
        assert!(got.contains(&edge(":B", ":s", ":A")));
    }

    #[test]
    fn chains_compose_projected_paths() {
        let got = edges(
            "SubClassOf(:A ObjectSomeValuesFrom(:r :B))\n\
             SubClassOf(:B ObjectSomeValuesFrom(:s :C))\n\
             SubObjectPropertyOf(ObjectPropertyChain(:r :s) :t)",
        );
        assert!(got.contains(&edge(":A", ":t", ":C")));
    }

    #[test]
    fn equivalence_expands_to_both_directions() {
        let got = edges(
            "EquivalentClasses(:GO_2000859 ObjectIntersectionOf(:GO_0065007 \
             ObjectSomeValuesFrom(:RO_0002212 :GO_0035932)))",
        );
        assert!(got.contains(&edge(":GO_2000859", "subclassof", ":GO_0065007")));
        assert!(got.contains(&edge(":GO_2000859", ":RO_0002212", ":GO_0035932")));
    }
}
