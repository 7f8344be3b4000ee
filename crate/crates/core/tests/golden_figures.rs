//! Golden projection fixtures: the exact edge sets each method produces
//! for the two worked axioms `A ⊑ ∃R.(B ⊓ C)` and `C ⊓ D ⊑ ⊥`, including
//! the blank-node counts of the syntax-tree rendering.

use std::collections::BTreeSet;

use ontoproj_core::ontology::parse_ontology;
use ontoproj_core::projection::{
    default_patterns, project_owl2vecstar, project_patterns, project_rdf, Edge,
};
use ontoproj_core::reasoner::{normalize, saturate};

fn edge(h: &str, l: &str, t: &str) -> Edge {
    Edge::new(h, l, t)
}

fn edges(list: &[(&str, &str, &str)]) -> BTreeSet<Edge> {
    list.iter().map(|(h, l, t)| edge(h, l, t)).collect()
}

#[test]
fn owl2vecstar_on_existential_intersection() {
    let o = parse_ontology("SubClassOf(:A ObjectSomeValuesFrom(:R ObjectIntersectionOf(:B :C)))")
        .unwrap();
    let pr = project_owl2vecstar(&o, true);
    assert_eq!(pr.edge_set(), edges(&[(":A", ":R", ":B"), (":A", ":R", ":C")]));
    assert!(pr.skipped.is_empty());
}

#[test]
fn patterns_on_existential_with_named_definition() {
    // The reasoning step lets the pattern query the named class X1 ≡ B ⊓ C
    // and emit the single corresponding edge.
    let o = parse_ontology(
        "SubClassOf(:A ObjectSomeValuesFrom(:R ObjectIntersectionOf(:B :C)))\n\
         EquivalentClasses(:X1 ObjectIntersectionOf(:B :C))",
    )
    .unwrap();
    let closure = saturate(&normalize(&o));
    let ex_pattern =
        vec![ontoproj_core::projection::parse_pattern_line(
            "SubClassOf(?X ObjectSomeValuesFrom(?R ?Y)) => (?X ?R ?Y)",
        )
        .unwrap()];
    let pr = project_patterns(&o, &closure, &ex_pattern, false).unwrap();
    assert_eq!(pr.edge_set(), edges(&[(":A", ":R", ":X1")]));
}

#[test]
fn rdf_on_existential_intersection_has_eight_edges_and_five_blanks() {
    let o = parse_ontology("SubClassOf(:A ObjectSomeValuesFrom(:R ObjectIntersectionOf(:B :C)))")
        .unwrap();
    let pr = project_rdf(&o);
    let expected = edges(&[
        (":A", "subclassof", "_:ax0_n0"),
        ("_:ax0_n0", "objectproperty", ":R"),
        ("_:ax0_n0", "somevaluesfrom", "_:ax0_n1"),
        ("_:ax0_n1", "intersection", "_:ax0_n2"),
        ("_:ax0_n2", "first", ":B"),
        ("_:ax0_n2", "rest", "_:ax0_n3"),
        ("_:ax0_n3", "first", ":C"),
        ("_:ax0_n3", "rest", "_:ax0_n4"),
    ]);
    assert_eq!(pr.edge_set(), expected);
    assert_eq!(pr.edges.len(), 8);
    assert_eq!(pr.blank_node_count(), 5);
}

#[test]
fn patterns_on_conjunction_to_bottom() {
    let o = parse_ontology("SubClassOf(ObjectIntersectionOf(:C :D) owl:Nothing)").unwrap();
    let closure = saturate(&normalize(&o));
    let pr = project_patterns(&o, &closure, &default_patterns(), false).unwrap();
    assert_eq!(pr.edge_set(), edges(&[(":C", "disjointwith", ":D")]));
}

#[test]
fn rdf_on_conjunction_to_bottom_has_six_edges_and_four_blanks() {
    let o = parse_ontology("SubClassOf(ObjectIntersectionOf(:C :D) owl:Nothing)").unwrap();
    let pr = project_rdf(&o);
    let expected = edges(&[
        ("_:ax0_n0", "intersection", "_:ax0_n1"),
        ("_:ax0_n1", "first", ":C"),
        ("_:ax0_n1", "rest", "_:ax0_n2"),
        ("_:ax0_n2", "first", ":D"),
        ("_:ax0_n2", "rest", "_:ax0_n3"),
        ("_:ax0_n0", "subclassof", "owl:Nothing"),
    ]);
    assert_eq!(pr.edge_set(), expected);
    assert_eq!(pr.edges.len(), 6);
    assert_eq!(pr.blank_node_count(), 4);
}

#[test]
fn graph_built_from_the_owl2vecstar_fixture() {
    use ontoproj_core::graph::RelationalGraph;
    let o = parse_ontology("SubClassOf(:A ObjectSomeValuesFrom(:R ObjectIntersectionOf(:B :C)))")
        .unwrap();
    let graph = RelationalGraph::from_projection(&project_owl2vecstar(&o, true));
    assert_eq!(graph.nodes.len(), 3);
    assert_eq!(graph.labels.len(), 1);
    assert_eq!(graph.edges.len(), 2);
}

#[test]
fn rdf_quantifier_twins_differ_only_in_the_filler_label() {
    let exists = project_rdf(
        &parse_ontology("SubClassOf(:C ObjectSomeValuesFrom(:R :D))").unwrap(),
    );
    let forall = project_rdf(
        &parse_ontology("SubClassOf(:C ObjectAllValuesFrom(:R :D))").unwrap(),
    );
    assert_eq!(
        exists.edge_set(),
        edges(&[
            (":C", "subclassof", "_:ax0_n0"),
            ("_:ax0_n0", "objectproperty", ":R"),
            ("_:ax0_n0", "somevaluesfrom", ":D"),
        ])
    );
    assert_eq!(
        forall.edge_set(),
        edges(&[
            (":C", "subclassof", "_:ax0_n0"),
            ("_:ax0_n0", "objectproperty", ":R"),
            ("_:ax0_n0", "allvaluesfrom", ":D"),
        ])
    );
}
