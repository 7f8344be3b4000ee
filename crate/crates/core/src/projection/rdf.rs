//! RDF-style syntax-tree projection.
//!
//! Every axiom is rendered as the graph of its syntax tree, so the
//! projection is total: complex expressions become fresh blank nodes,
//! quantified restrictions get `objectproperty` plus
//! `somevaluesfrom`/`allvaluesfrom` edges, and ⊓/⊔ arguments are encoded
//! as linked lists with `first`/`rest` cells ending in a fresh terminator
//! node. Blank node names are deterministic: `_:ax{i}_n{j}` for axiom
//! index `i` and allocation position `j` (`_:q_n{j}` for query-time
//! projection).

use std::collections::{BTreeSet, HashMap};

use crate::ontology::{Axiom, ClassExpression, Ontology};

use super::{labels, Edge, EdgeAccumulator, MethodKind, ProjectionResult, BOTTOM_NODE, TOP_NODE};

pub fn project_rdf(ontology: &Ontology) -> ProjectionResult {
    let mut acc = EdgeAccumulator::new(MethodKind::Rdf);
    for (index, axiom) in ontology.axioms.iter().enumerate() {
        let edges = render_axiom(axiom, &format!("_:ax{index}"));
        for edge in edges {
            acc.add(axiom, edge);
        }
    }
    acc.finish(Vec::new())
}

/// Query-time rendering with `_:q_n{j}` blank names.
pub(crate) fn render_query_axiom(axiom: &Axiom) -> BTreeSet<Edge> {
    render_axiom(axiom, "_:q").into_iter().collect()
}

fn render_axiom(axiom: &Axiom, blank_prefix: &str) -> Vec<Edge> {
    let mut r = Renderer {
        prefix: blank_prefix,
        counter: 0,
        edges: Vec::new(),
        memo: HashMap::new(),
    };
    match axiom {
        Axiom::SubClassOf { sub, sup } => {
            let sub = r.node(sub);
            let sup = r.node(sup);
            r.edge(&sub, labels::SUBCLASSOF, &sup);
        }
        Axiom::EquivalentClasses(members) => {
            // Pairwise bidirectional subclass edges; the expression nodes
            // are shared within the axiom.
            let nodes: Vec<String> = members.iter().map(|m| r.node(m)).collect();
            for (i, a) in nodes.iter().enumerate() {
                for (j, b) in nodes.iter().enumerate() {
                    if i != j {
                        r.edge(a, labels::SUBCLASSOF, b);
                    }
                }
            }
        }
        Axiom::DisjointClasses(a, b) => {
            let a = r.node(a);
            let b = r.node(b);
            r.edge(&a, labels::DISJOINTWITH, &b);
        }
        Axiom::SubRoleOf { sub, sup } => {
            r.edge(sub.as_str(), labels::SUBPROPERTYOF, sup.as_str());
        }
        Axiom::InverseRoles(a, b) => {
            r.edge(a.as_str(), labels::INVERSEOF, b.as_str());
        }
        Axiom::RoleChain { chain, sup } => {
            let items: Vec<String> = chain.iter().map(|c| c.as_str().to_owned()).collect();
            let list = r.list(&items);
            r.edge(sup.as_str(), labels::PROPERTYCHAIN, &list);
        }
        Axiom::Domain(role, class) => {
            let class = r.node(class);
            r.edge(role.as_str(), labels::DOMAIN, &class);
        }
        Axiom::Range(role, class) => {
            let class = r.node(class);
            r.edge(role.as_str(), labels::RANGE, &class);
        }
        Axiom::ClassAssertion(class, individual) => {
            let class = r.node(class);
            r.edge(individual.as_str(), labels::TYPE, &class);
        }
        Axiom::RoleAssertion(role, a, b) => {
            r.edge(a.as_str(), role.as_str(), b.as_str());
        }
    }
    r.edges
}

struct Renderer<'a> {
    prefix: &'a str,
    counter: usize,
    edges: Vec<Edge>,
    /// Shares the rendering of repeated subexpressions within one axiom.
    memo: HashMap<ClassExpression, String>,
}

impl Renderer<'_> {
    fn blank(&mut self) -> String {
        let name = format!("{}_n{}", self.prefix, self.counter);
        self.counter += 1;
        name
    }

    fn edge(&mut self, head: &str, label: &str, tail: &str) {
        self.edges.push(Edge::new(head, label, tail));
    }

    fn node(&mut self, expr: &ClassExpression) -> String {
        match expr {
            ClassExpression::Named(id) => return id.as_str().to_owned(),
            ClassExpression::Top => return TOP_NODE.to_owned(),
            ClassExpression::Bottom => return BOTTOM_NODE.to_owned(),
            _ => {}
        }
        if let Some(existing) = self.memo.get(expr) {
            return existing.clone();
        }
        let root = match expr {
            ClassExpression::Exists(role, filler) => {
                let x = self.blank();
                self.edge(&x, labels::OBJECTPROPERTY, role.as_str());
                let filler = self.node(filler);
                self.edge(&x, labels::SOMEVALUESFROM, &filler);
                x
            }
            ClassExpression::Forall(role, filler) => {
                let x = self.blank();
                self.edge(&x, labels::OBJECTPROPERTY, role.as_str());
                let filler = self.node(filler);
                self.edge(&x, labels::ALLVALUESFROM, &filler);
                x
            }
            ClassExpression::Not(inner) => {
                let x = self.blank();
                let inner = self.node(inner);
                self.edge(&x, labels::COMPLEMENT, &inner);
                x
            }
            ClassExpression::And(members) => {
                let m = self.blank();
                let items: Vec<String> = members.iter().map(|e| self.node(e)).collect();
                let list = self.list(&items);
                self.edge(&m, labels::INTERSECTION, &list);
                m
            }
            ClassExpression::Or(members) => {
                let m = self.blank();
                let items: Vec<String> = members.iter().map(|e| self.node(e)).collect();
                let list = self.list(&items);
                self.edge(&m, labels::UNION, &list);
                m
            }
            ClassExpression::Named(_) | ClassExpression::Top | ClassExpression::Bottom => {
                unreachable!()
            }
        };
        self.memo.insert(expr.clone(), root.clone());
        root
    }

    /// `first`/`rest` cells ending in a fresh terminator node; returns the
    /// first cell.
    fn list(&mut self, items: &[String]) -> String {
        let cells: Vec<String> = items
            .iter()
            .map(|item| {
                let cell = self.blank();
                self.edge(&cell, labels::FIRST, item);
                cell
            })
            .collect();
        let nil = self.blank();
        for (i, cell) in cells.iter().enumerate() {
            let next = if i + 1 < cells.len() { &cells[i + 1] } else { &nil };
            self.edge(cell, labels::REST, next);
        }
        cells[0].clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::parse_ontology;

    fn project(text: &str) -> ProjectionResult {
        project_rdf(&parse_ontology(text).unwrap())
    }

    #[test]
    fn existential_with_intersection_filler() {
        let pr = project("SubClassOf(:A ObjectSomeValuesFrom(:R ObjectIntersectionOf(:B :C)))");
        let expected: BTreeSet<Edge> = [
            Edge::new(":A", "subclassof", "_:ax0_n0"),
            Edge::new("_:ax0_n0", "objectproperty", ":R"),
            Edge::new("_:ax0_n0", "somevaluesfrom", "_:ax0_n1"),
            Edge::new("_:ax0_n1", "intersection", "_:ax0_n2"),
            Edge::new("_:ax0_n2", "first", ":B"),
            Edge::new("_:ax0_n2", "rest", "_:ax0_n3"),
            Edge::new("_:ax0_n3", "first", ":C"),
            Edge::new("_:ax0_n3", "rest", "_:ax0_n4"),
        ]
        .into_iter()
        .collect();
        assert_eq!(pr.edge_set(), expected);
        assert_eq!(pr.blank_node_count(), 5);
        assert_eq!(pr.edges.len(), 8);
    }

    #[test]
    fn conjunction_to_bottom() {
        let pr = project("SubClassOf(ObjectIntersectionOf(:C :D) owl:Nothing)");
        let expected: BTreeSet<Edge> = [
            Edge::new("_:ax0_n0", "intersection", "_:ax0_n1"),
            Edge::new("_:ax0_n1", "first", ":C"),
            Edge::new("_:ax0_n1", "rest", "_:ax0_n2"),
            Edge::new("_:ax0_n2", "first", ":D"),
            Edge::new("_:ax0_n2", "rest", "_:ax0_n3"),
            Edge::new("_:ax0_n0", "subclassof", "owl:Nothing"),
        ]
        .into_iter()
        .collect();
        assert_eq!(pr.edge_set(), expected);
        assert_eq!(pr.blank_node_count(), 4);
        assert_eq!(pr.edges.len(), 6);
    }

    #[test]
    fn quantifiers_differ_only_in_label() {
        let e = project("SubClassOf(:C ObjectSomeValuesFrom(:R :D))");
        let a = project("SubClassOf(:C ObjectAllValuesFrom(:R :D))");
        let swap = |edges: BTreeSet<Edge>| -> BTreeSet<Edge> {
            edges
                .into_iter()
                .map(|mut e| {
                    if e.label == "somevaluesfrom" {
                        e.label = "allvaluesfrom".into();
                    }
                    e
                })
                .collect()
        };
        assert_eq!(swap(e.edge_set()), a.edge_set());
        assert_eq!(e.edges.len(), 3);
    }

    #[test]
    fn projection_is_total() {
        let pr = project(
            "SubClassOf(:A ObjectComplementOf(:B))\n\
             DisjointClasses(:C :D)\n\
             SubObjectPropertyOf(:r :s)\n\
             InverseObjectProperties(:r :s)\n\
             SubObjectPropertyOf(ObjectPropertyChain(:r :s) :t)\n\
             ObjectPropertyDomain(:r :A)\n\
             ObjectPropertyRange(:r ObjectUnionOf(:A :B))\n\
             ClassAssertion(:A :ind)\n\
             ObjectPropertyAssertion(:r :ind :ind2)\n\
             EquivalentClasses(:X ObjectIntersectionOf(:A :B))",
        );
        assert!(pr.skipped.is_empty());
        assert_eq!(pr.per_axiom.len(), 10);
    }

    #[test]
    fn blank_names_are_deterministic_per_axiom_index() {
        let pr = project("SubClassOf(:A :B)\nSubClassOf(:A ObjectComplementOf(:B))");
        assert!(pr.edge_set().contains(&Edge::new("_:ax1_n0", "complement", ":B")));
    }
}
