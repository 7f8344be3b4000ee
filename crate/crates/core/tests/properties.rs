//! Cross-module property tests: parse/serialize round trips, signature
//! closure, split behavior, batch/query projection consistency and
//! inversion soundness.

use std::collections::BTreeSet;

use ontoproj_core::ontology::{
    parse_axiom, parse_ontology, serialize_axiom, serialize_ontology, split_ontology, Axiom,
    ClassExpression, ClassId, IndividualId, Ontology, RoleId, SplitPattern,
};
use ontoproj_core::projection::{
    canonicalize_blank_nodes, default_patterns, invert_projection, project, project_axiom,
    Method, MethodKind,
};
use ontoproj_core::reasoner::{normalize, saturate};
use proptest::prelude::*;

fn class_id() -> impl Strategy<Value = ClassId> + Clone {
    "[A-Z][a-z0-9]{0,6}".prop_map(|s| ClassId::new(format!(":{s}")))
}

fn role_id() -> impl Strategy<Value = RoleId> + Clone {
    "[a-z][a-z0-9]{0,6}".prop_map(|s| RoleId::new(format!("r:{s}")))
}

fn individual_id() -> impl Strategy<Value = IndividualId> + Clone {
    "[a-z][a-z0-9]{0,6}".prop_map(|s| IndividualId::new(format!("i:{s}")))
}

fn class_expression() -> impl Strategy<Value = ClassExpression> {
    let leaf = prop_oneof![
        5 => class_id().prop_map(ClassExpression::Named),
        1 => Just(ClassExpression::Top),
        1 => Just(ClassExpression::Bottom),
    ];
    leaf.prop_recursive(4, 24, 4, |inner| {
        prop_oneof![
            (role_id(), inner.clone())
                .prop_map(|(r, f)| ClassExpression::Exists(r, Box::new(f))),
            (role_id(), inner.clone())
                .prop_map(|(r, f)| ClassExpression::Forall(r, Box::new(f))),
            inner.clone().prop_map(|e| ClassExpression::Not(Box::new(e))),
            prop::collection::vec(inner.clone(), 2..4).prop_map(ClassExpression::And),
            prop::collection::vec(inner, 2..4).prop_map(ClassExpression::Or),
        ]
    })
}

fn axiom() -> impl Strategy<Value = Axiom> {
    prop_oneof![
        (class_expression(), class_expression())
            .prop_map(|(sub, sup)| Axiom::SubClassOf { sub, sup }),
        prop::collection::vec(class_expression(), 2..4).prop_map(Axiom::EquivalentClasses),
        (class_expression(), class_expression())
            .prop_map(|(a, b)| Axiom::DisjointClasses(a, b)),
        (role_id(), role_id()).prop_map(|(sub, sup)| Axiom::SubRoleOf { sub, sup }),
        (role_id(), role_id()).prop_map(|(a, b)| Axiom::InverseRoles(a, b)),
        (prop::collection::vec(role_id(), 2..4), role_id())
            .prop_map(|(chain, sup)| Axiom::RoleChain { chain, sup }),
        (role_id(), class_expression()).prop_map(|(r, c)| Axiom::Domain(r, c)),
        (role_id(), class_expression()).prop_map(|(r, c)| Axiom::Range(r, c)),
        (class_expression(), individual_id()).prop_map(|(c, i)| Axiom::ClassAssertion(c, i)),
        (role_id(), individual_id(), individual_id())
            .prop_map(|(r, a, b)| Axiom::RoleAssertion(r, a, b)),
    ]
}

proptest! {
    #[test]
    fn serialize_then_parse_is_identity(a in axiom()) {
        let text = serialize_axiom(&a);
        let parsed = parse_axiom(&text).unwrap();
        prop_assert_eq!(parsed, a);
    }

    #[test]
    fn parsed_ontologies_have_closed_signatures(axioms in prop::collection::vec(axiom(), 1..12)) {
        // Identifier namespaces are disjoint by construction of the
        // strategies (class/role/individual prefixes differ).
        let source = Ontology::from_axioms(axioms).unwrap();
        let text = serialize_ontology(&source);
        let parsed = parse_ontology(&text).unwrap();
        prop_assert_eq!(&parsed.axioms, &source.axioms);
        for axiom in &parsed.axioms {
            let single = Ontology::from_axioms(vec![axiom.clone()]).unwrap();
            prop_assert!(single.signature.classes.is_subset(&parsed.signature.classes));
            prop_assert!(single.signature.roles.is_subset(&parsed.signature.roles));
            prop_assert!(
                single.signature.individuals.is_subset(&parsed.signature.individuals)
            );
        }
    }

    #[test]
    fn split_removes_the_exact_ceiling_count(
        n in 2usize..60,
        percent in 1u32..100,
        seed in any::<u64>(),
    ) {
        let fraction = percent as f64 / 100.0;
        let axioms: Vec<Axiom> = (0..n)
            .map(|i| Axiom::subclass(
                ClassExpression::named(format!(":C{i}")),
                ClassExpression::named(format!(":C{}", i + 1)),
            ))
            .collect();
        let o = Ontology::from_axioms(axioms).unwrap();
        let (reduced, removed) = split_ontology(&o, SplitPattern::Sub, fraction, seed).unwrap();
        prop_assert_eq!(removed.len(), (fraction * n as f64).ceil() as usize);
        prop_assert_eq!(reduced.axioms.len() + removed.len(), n);
        let again = split_ontology(&o, SplitPattern::Sub, fraction, seed).unwrap();
        prop_assert_eq!(removed, again.1);
    }
}

/// Projectable-by-construction axioms for the query-consistency and
/// inversion checks.
fn query_axiom() -> impl Strategy<Value = Axiom> {
    let named = class_id().prop_map(ClassExpression::Named);
    let flat_filler = prop_oneof![
        3 => class_id().prop_map(ClassExpression::Named),
        1 => prop::collection::btree_set(class_id(), 2..4).prop_map(|m| {
            ClassExpression::And(m.into_iter().map(ClassExpression::Named).collect())
        }),
        1 => prop::collection::btree_set(class_id(), 2..4).prop_map(|m| {
            ClassExpression::Or(m.into_iter().map(ClassExpression::Named).collect())
        }),
    ];
    let restriction = prop_oneof![
        (role_id(), flat_filler.clone())
            .prop_map(|(r, f)| ClassExpression::Exists(r, Box::new(f))),
        (role_id(), flat_filler)
            .prop_map(|(r, f)| ClassExpression::Forall(r, Box::new(f))),
    ];
    prop_oneof![
        (named.clone(), named.clone()).prop_map(|(a, b)| Axiom::SubClassOf { sub: a, sup: b }),
        (named.clone(), restriction.clone())
            .prop_map(|(a, r)| Axiom::SubClassOf { sub: a, sup: r }),
        (named.clone(), named.clone(), restriction).prop_map(|(a, b, r)| Axiom::SubClassOf {
            sub: a,
            sup: ClassExpression::And(vec![b, r]),
        }),
        (class_id(), individual_id())
            .prop_map(|(c, i)| Axiom::ClassAssertion(ClassExpression::Named(c), i)),
        (role_id(), individual_id(), individual_id())
            .prop_map(|(r, a, b)| Axiom::RoleAssertion(r, a, b)),
    ]
}

fn methods() -> Vec<Method> {
    vec![
        Method::Taxonomy,
        Method::owl2vecstar(),
        Method::Owl2VecStar { inverse_edges: false },
        Method::Rdf,
        Method::Patterns { patterns: default_patterns(), conflate_quantifiers: false },
        Method::Patterns { patterns: default_patterns(), conflate_quantifiers: true },
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Query-time projection of an axiom agrees with its attribution in a
    /// batch run (modulo blank-node names for rdf).
    #[test]
    fn batch_and_query_projections_agree(axioms in prop::collection::vec(query_axiom(), 1..8)) {
        let ontology = Ontology::from_axioms(axioms).unwrap();
        for method in methods() {
            let closure = match method {
                Method::Patterns { .. } => Some(saturate(&normalize(&ontology))),
                _ => None,
            };
            let pr = project(&method, &ontology, closure.as_ref()).unwrap();
            for (axiom, batch_edges) in &pr.per_axiom {
                let query = match project_axiom(&method, axiom) {
                    Ok(edges) => edges,
                    // Context-dependent attributions (role declarations,
                    // domain/range pairs) have no query-time projection.
                    Err(_) => continue,
                };
                if pr.method == MethodKind::Rdf {
                    prop_assert_eq!(
                        canonicalize_blank_nodes(&query),
                        canonicalize_blank_nodes(batch_edges)
                    );
                } else {
                    prop_assert_eq!(&query, batch_edges);
                }
            }
        }
    }

    /// Every projectable axiom is contained in the inversion of its own
    /// projection.
    #[test]
    fn inversion_is_sound(a in query_axiom()) {
        for method in methods() {
            let Ok(edges) = project_axiom(&method, &a) else { continue };
            let inverted = invert_projection(&method, &edges).unwrap_or_default();
            // Canonical readings list filler members in sorted order; the
            // generator emits sorted members, so the axiom itself must be
            // present.
            prop_assert!(
                inverted.contains(&a),
                "axiom {} missing from inversion {:?} under {:?}",
                serialize_axiom(&a),
                inverted,
                method.kind()
            );
        }
    }

    /// ∃/∀ and ⊓/⊔ project identically under the conflating method.
    #[test]
    fn owl2vecstar_conflation_is_exact(
        c in class_id(),
        r in role_id(),
        members in prop::collection::btree_set(class_id(), 2..4),
    ) {
        let named: Vec<ClassExpression> =
            members.into_iter().map(ClassExpression::Named).collect();
        let method = Method::owl2vecstar();
        let fillers = [
            ClassExpression::And(named.clone()),
            ClassExpression::Or(named.clone()),
        ];
        let mut projections: Vec<BTreeSet<_>> = Vec::new();
        for filler in fillers {
            for quantified in [
                ClassExpression::Exists(r.clone(), Box::new(filler.clone())),
                ClassExpression::Forall(r.clone(), Box::new(filler.clone())),
            ] {
                let axiom = Axiom::SubClassOf {
                    sub: ClassExpression::Named(c.clone()),
                    sup: quantified,
                };
                projections.push(project_axiom(&method, &axiom).unwrap());
            }
        }
        for window in projections.windows(2) {
            prop_assert_eq!(&window[0], &window[1]);
        }
    }
}

#[test]
fn projection_edges_equal_per_axiom_union() {
    // The union-of-attributions invariant, on a mixed ontology.
    let ontology = parse_ontology(
        "SubClassOf(:A :B)\n\
         SubClassOf(:A ObjectSomeValuesFrom(:R ObjectIntersectionOf(:B :C)))\n\
         EquivalentClasses(:X ObjectIntersectionOf(:B :C))\n\
         DisjointClasses(:C :D)\n\
         SubObjectPropertyOf(:r :R)\n\
         ObjectPropertyDomain(:R :A)\n\
         ObjectPropertyRange(:R :B)\n\
         ClassAssertion(:A i:a)\n\
         ObjectPropertyAssertion(:R i:a i:b)",
    )
    .unwrap();
    for method in methods() {
        let closure = match method {
            Method::Patterns { .. } => Some(saturate(&normalize(&ontology))),
            _ => None,
        };
        let pr = project(&method, &ontology, closure.as_ref()).unwrap();
        let union: BTreeSet<_> =
            pr.per_axiom.values().flat_map(|edges| edges.iter().cloned()).collect();
        assert_eq!(union, pr.edge_set(), "union mismatch for {}", pr.method);
    }
}

#[test]
fn rdf_is_total_on_every_axiom_kind() {
    let ontology = parse_ontology(
        "SubClassOf(:A ObjectComplementOf(ObjectUnionOf(:B :C)))\n\
         EquivalentClasses(:A :B ObjectSomeValuesFrom(:R :C))\n\
         DisjointClasses(ObjectAllValuesFrom(:R :B) :C)\n\
         SubObjectPropertyOf(:r :s)\n\
         InverseObjectProperties(:r :s)\n\
         SubObjectPropertyOf(ObjectPropertyChain(:r :s :t) :u)\n\
         ObjectPropertyDomain(:r owl:Thing)\n\
         ObjectPropertyRange(:r owl:Nothing)\n\
         ClassAssertion(ObjectIntersectionOf(:A :B) i:x)\n\
         ObjectPropertyAssertion(:r i:x i:y)",
    )
    .unwrap();
    let pr = project(&Method::Rdf, &ontology, None).unwrap();
    assert!(pr.skipped.is_empty());
    assert_eq!(pr.per_axiom.len(), ontology.axioms.len());
}
