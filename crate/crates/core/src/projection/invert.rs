//! Projection inversion: the axioms that project onto a given edge set.
//!
//! For injective methods (taxonomy, rdf) the result is a singleton. For
//! OWL2Vec*-style edges the quantifier (and, for multi-member fillers, the
//! connective) is not recoverable, so every candidate reading is returned;
//! superclass-position readings are used for role edges, matching how
//! queries are scored. Filler members are reconstructed in sorted order.

use std::collections::{BTreeMap, BTreeSet};

use crate::ontology::{Axiom, ClassExpression, ClassId, IndividualId, RoleId};

use super::patterns::{PatternTerm, RelationalPattern};
use super::{labels, Edge, Method, MethodKind, ProjectionError, BOTTOM_NODE, TOP_NODE};

pub fn invert_projection(
    method: &Method,
    edges: &BTreeSet<Edge>,
) -> Result<BTreeSet<Axiom>, ProjectionError> {
    if edges.is_empty() {
        return Err(unrecognized(method.kind(), "empty edge set"));
    }
    match method {
        Method::Taxonomy => invert_taxonomy(edges),
        Method::Owl2VecStar { inverse_edges } => invert_owl2vecstar(edges, *inverse_edges),
        Method::Rdf => invert_rdf(edges),
        Method::Patterns { patterns, conflate_quantifiers } => {
            invert_patterns(edges, patterns, *conflate_quantifiers)
        }
    }
}

fn unrecognized(method: MethodKind, reason: impl Into<String>) -> ProjectionError {
    ProjectionError::UnrecognizedEdges { method, reason: reason.into() }
}

fn invert_taxonomy(edges: &BTreeSet<Edge>) -> Result<BTreeSet<Axiom>, ProjectionError> {
    if edges.len() != 1 {
        return Err(unrecognized(MethodKind::Taxonomy, "expected a single subclassof edge"));
    }
    let edge = edges.iter().next().unwrap();
    if edge.label != labels::SUBCLASSOF {
        return Err(unrecognized(
            MethodKind::Taxonomy,
            format!("label `{}` is not subclassof", edge.label),
        ));
    }
    Ok([Axiom::subclass(
        ClassExpression::Named(ClassId::new(&edge.head)),
        ClassExpression::Named(ClassId::new(&edge.tail)),
    )]
    .into())
}

fn invert_owl2vecstar(
    edges: &BTreeSet<Edge>,
    _inverse_edges: bool,
) -> Result<BTreeSet<Axiom>, ProjectionError> {
    let kind = MethodKind::Owl2VecStar;

    // Drop mirror edges after checking they are consistent with a forward
    // edge; the forward edges carry the axiom structure.
    let mut forward: Vec<&Edge> = Vec::new();
    for edge in edges {
        match edge.label.as_str() {
            labels::SUBCLASSOF_INV => {
                let mirrored = Edge::new(&edge.tail, labels::SUBCLASSOF, &edge.head);
                if !edges.contains(&mirrored) {
                    return Err(unrecognized(kind, "subclassof⁻¹ edge without its mirror"));
                }
            }
            labels::TYPE_INV => {
                let mirrored = Edge::new(&edge.tail, labels::TYPE, &edge.head);
                if !edges.contains(&mirrored) {
                    return Err(unrecognized(kind, "type⁻¹ edge without its mirror"));
                }
            }
            _ => forward.push(edge),
        }
    }
    if forward.is_empty() {
        return Err(unrecognized(kind, "only mirror edges present"));
    }

    // Class assertions are unambiguous.
    if forward.len() == 1 {
        let edge = forward[0];
        if edge.label == labels::TYPE {
            return Ok([Axiom::ClassAssertion(
                ClassExpression::Named(ClassId::new(&edge.tail)),
                IndividualId::new(&edge.head),
            )]
            .into());
        }
    }

    // Everything else reads as subclass axioms with a shared head.
    let head = &forward[0].head;
    if forward.iter().any(|e| &e.head != head) {
        return Err(unrecognized(kind, "edges do not share a head node"));
    }
    let mut named_members: Vec<ClassId> = Vec::new();
    let mut restrictions: BTreeMap<RoleId, Vec<ClassId>> = BTreeMap::new();
    for edge in &forward {
        match edge.label.as_str() {
            labels::SUBCLASSOF => named_members.push(ClassId::new(&edge.tail)),
            labels::TYPE | labels::TYPE_INV | labels::SUBCLASSOF_INV => {
                return Err(unrecognized(kind, "mixed assertion and subclass edges"));
            }
            role if role.contains(':') => {
                restrictions
                    .entry(RoleId::new(role))
                    .or_default()
                    .push(ClassId::new(&edge.tail));
            }
            other => {
                return Err(unrecognized(kind, format!("unexpected label `{other}`")));
            }
        }
    }

    // Pure named subsumption.
    if restrictions.is_empty() && named_members.len() == 1 {
        return Ok([Axiom::subclass(
            ClassExpression::Named(ClassId::new(head)),
            ClassExpression::Named(named_members.remove(0)),
        )]
        .into());
    }
    if restrictions.is_empty() {
        return Err(unrecognized(kind, "multiple subclassof edges from one head"));
    }

    // One or more restriction members, possibly next to named members:
    // enumerate quantifier and connective readings.
    let mut member_options: Vec<Vec<ClassExpression>> = vec![Vec::new()];
    for member in &named_members {
        for option in &mut member_options {
            option.push(ClassExpression::Named(member.clone()));
        }
    }
    for (role, mut fillers) in restrictions {
        fillers.sort();
        fillers.dedup();
        let filler_options: Vec<ClassExpression> = if fillers.len() == 1 {
            vec![ClassExpression::Named(fillers[0].clone())]
        } else {
            let named: Vec<ClassExpression> =
                fillers.iter().cloned().map(ClassExpression::Named).collect();
            vec![ClassExpression::And(named.clone()), ClassExpression::Or(named)]
        };
        let mut expanded = Vec::new();
        for option in &member_options {
            for filler in &filler_options {
                for quantified in [
                    ClassExpression::Exists(role.clone(), Box::new(filler.clone())),
                    ClassExpression::Forall(role.clone(), Box::new(filler.clone())),
                ] {
                    let mut next = option.clone();
                    next.push(quantified);
                    expanded.push(next);
                }
            }
        }
        member_options = expanded;
        if member_options.len() > 64 {
            return Err(unrecognized(kind, "too many candidate readings"));
        }
    }

    let mut axioms = BTreeSet::new();
    for members in member_options {
        let superclasses: Vec<ClassExpression> = if members.len() == 1 {
            vec![members.into_iter().next().unwrap()]
        } else {
            vec![ClassExpression::And(members.clone()), ClassExpression::Or(members)]
        };
        for sup in superclasses {
            axioms.insert(Axiom::subclass(
                ClassExpression::Named(ClassId::new(head)),
                sup,
            ));
        }
    }
    // A single role-labeled edge is also the projection of a role
    // assertion between individuals.
    if forward.len() == 1 && named_members.is_empty() {
        let edge = forward[0];
        axioms.insert(Axiom::RoleAssertion(
            RoleId::new(&edge.label),
            IndividualId::new(&edge.head),
            IndividualId::new(&edge.tail),
        ));
    }
    Ok(axioms)
}

fn invert_rdf(edges: &BTreeSet<Edge>) -> Result<BTreeSet<Axiom>, ProjectionError> {
    let kind = MethodKind::Rdf;
    let reader = RdfReader { edges, kind };
    let axiom = reader.read()?;
    Ok([axiom].into())
}

struct RdfReader<'a> {
    edges: &'a BTreeSet<Edge>,
    kind: MethodKind,
}

impl RdfReader<'_> {
    fn read(&self) -> Result<Axiom, ProjectionError> {
        // The axiom-level edge is the one whose label is not part of the
        // expression encoding.
        let expression_labels = [
            labels::OBJECTPROPERTY,
            labels::SOMEVALUESFROM,
            labels::ALLVALUESFROM,
            labels::INTERSECTION,
            labels::UNION,
            labels::FIRST,
            labels::REST,
            labels::COMPLEMENT,
        ];
        let roots: Vec<&Edge> = self
            .edges
            .iter()
            .filter(|e| !expression_labels.contains(&e.label.as_str()))
            .collect();
        let [root]: [&Edge; 1] = <[&Edge; 1]>::try_from(roots).map_err(|roots| {
            self.err(format!("expected one axiom-level edge, found {}", roots.len()))
        })?;

        match root.label.as_str() {
            labels::SUBCLASSOF => Ok(Axiom::subclass(
                self.expression(&root.head)?,
                self.expression(&root.tail)?,
            )),
            labels::DISJOINTWITH => Ok(Axiom::DisjointClasses(
                self.expression(&root.head)?,
                self.expression(&root.tail)?,
            )),
            labels::SUBPROPERTYOF => Ok(Axiom::SubRoleOf {
                sub: RoleId::new(&root.head),
                sup: RoleId::new(&root.tail),
            }),
            labels::INVERSEOF => {
                Ok(Axiom::InverseRoles(RoleId::new(&root.head), RoleId::new(&root.tail)))
            }
            labels::PROPERTYCHAIN => {
                let items = self.list_items(&root.tail)?;
                Ok(Axiom::RoleChain {
                    chain: items.iter().map(RoleId::new).collect(),
                    sup: RoleId::new(&root.head),
                })
            }
            labels::DOMAIN => {
                Ok(Axiom::Domain(RoleId::new(&root.head), self.expression(&root.tail)?))
            }
            labels::RANGE => {
                Ok(Axiom::Range(RoleId::new(&root.head), self.expression(&root.tail)?))
            }
            labels::TYPE => Ok(Axiom::ClassAssertion(
                self.expression(&root.tail)?,
                IndividualId::new(&root.head),
            )),
            role if role.contains(':') => Ok(Axiom::RoleAssertion(
                RoleId::new(role),
                IndividualId::new(&root.head),
                IndividualId::new(&root.tail),
            )),
            other => Err(self.err(format!("unexpected axiom-level label `{other}`"))),
        }
    }

    fn err(&self, reason: String) -> ProjectionError {
        ProjectionError::UnrecognizedEdges { method: self.kind, reason }
    }

    fn out_edges(&self, node: &str) -> Vec<&Edge> {
        self.edges.iter().filter(|e| e.head == node).collect()
    }

    fn expression(&self, node: &str) -> Result<ClassExpression, ProjectionError> {
        if node == TOP_NODE {
            return Ok(ClassExpression::Top);
        }
        if node == BOTTOM_NODE {
            return Ok(ClassExpression::Bottom);
        }
        if !Edge::is_blank_node(node) {
            return Ok(ClassExpression::Named(ClassId::new(node)));
        }
        let out = self.out_edges(node);
        let find = |label: &str| out.iter().find(|e| e.label == label);
        if let Some(role_edge) = find(labels::OBJECTPROPERTY) {
            let role = RoleId::new(&role_edge.tail);
            if let Some(filler) = find(labels::SOMEVALUESFROM) {
                return Ok(ClassExpression::Exists(
                    role,
                    Box::new(self.expression(&filler.tail)?),
                ));
            }
            if let Some(filler) = find(labels::ALLVALUESFROM) {
                return Ok(ClassExpression::Forall(
                    role,
                    Box::new(self.expression(&filler.tail)?),
                ));
            }
            return Err(self.err(format!("restriction node `{node}` has no filler edge")));
        }
        if let Some(list) = find(labels::INTERSECTION) {
            let members = self.member_expressions(&list.tail)?;
            return Ok(ClassExpression::And(members));
        }
        if let Some(list) = find(labels::UNION) {
            let members = self.member_expressions(&list.tail)?;
            return Ok(ClassExpression::Or(members));
        }
        if let Some(inner) = find(labels::COMPLEMENT) {
            return Ok(ClassExpression::Not(Box::new(self.expression(&inner.tail)?)));
        }
        Err(self.err(format!("blank node `{node}` has no recognizable structure")))
    }

    fn member_expressions(&self, first_cell: &str) -> Result<Vec<ClassExpression>, ProjectionError> {
        self.list_items(first_cell)?
            .iter()
            .map(|item| self.expression(item))
            .collect()
    }

    /// Walks `first`/`rest` cells until a node without a `first` edge.
    fn list_items(&self, first_cell: &str) -> Result<Vec<String>, ProjectionError> {
        let mut items = Vec::new();
        let mut cell = first_cell.to_owned();
        let mut hops = 0usize;
        loop {
            let out = self.out_edges(&cell);
            let first = out.iter().find(|e| e.label == labels::FIRST);
            let rest = out.iter().find(|e| e.label == labels::REST);
            match (first, rest) {
                (Some(f), Some(r)) => {
                    items.push(f.tail.clone());
                    cell = r.tail.clone();
                }
                (None, None) => break, // terminator
                _ => return Err(self.err(format!("malformed list cell `{cell}`"))),
            }
            hops += 1;
            if hops > self.edges.len() + 1 {
                return Err(self.err("cyclic list encoding".into()));
            }
        }
        if items.is_empty() {
            return Err(self.err("empty list encoding".into()));
        }
        Ok(items)
    }
}

fn invert_patterns(
    edges: &BTreeSet<Edge>,
    patterns: &[RelationalPattern],
    conflate_quantifiers: bool,
) -> Result<BTreeSet<Axiom>, ProjectionError> {
    if edges.len() != 1 {
        return Err(unrecognized(
            MethodKind::Patterns,
            "pattern projections are simple; expected a single edge",
        ));
    }
    let edge = edges.iter().next().unwrap();
    let mut axioms = BTreeSet::new();
    for pattern in patterns {
        let mut bindings = BTreeMap::new();
        let ok = bind_term(&pattern.out_head, &edge.head, &mut bindings)
            && bind_term(&pattern.out_label, &edge.label, &mut bindings)
            && bind_term(&pattern.out_tail, &edge.tail, &mut bindings);
        if !ok {
            continue;
        }
        if let Some(axiom) = instantiate_axiom(&pattern.template, &bindings) {
            if conflate_quantifiers {
                for variant in quantifier_variants(&axiom) {
                    axioms.insert(variant);
                }
            }
            // The two asserted disjointness forms are interchangeable
            // preimages of a disjointness edge.
            if let Axiom::SubClassOf {
                sub: ClassExpression::And(members),
                sup: ClassExpression::Bottom,
            } = &axiom
            {
                if let [a, b] = members.as_slice() {
                    axioms.insert(Axiom::DisjointClasses(a.clone(), b.clone()));
                }
            }
            if let Axiom::DisjointClasses(a, b) = &axiom {
                axioms.insert(Axiom::SubClassOf {
                    sub: ClassExpression::And(vec![a.clone(), b.clone()]),
                    sup: ClassExpression::Bottom,
                });
            }
            axioms.insert(axiom);
        }
    }
    if axioms.is_empty() {
        return Err(unrecognized(MethodKind::Patterns, format!("no pattern emits {edge}")));
    }
    Ok(axioms)
}

fn bind_term(term: &PatternTerm, value: &str, bindings: &mut BTreeMap<String, String>) -> bool {
    match term {
        PatternTerm::Const(c) => c == value,
        PatternTerm::Var(v) => match bindings.get(v) {
            Some(bound) => bound == value,
            None => {
                bindings.insert(v.clone(), value.to_owned());
                true
            }
        },
    }
}

/// Substitutes bindings into a template; fails if a variable is unbound.
fn instantiate_axiom(template: &Axiom, bindings: &BTreeMap<String, String>) -> Option<Axiom> {
    let id = |s: &str| -> Option<String> {
        if s.starts_with('?') {
            bindings.get(s).cloned()
        } else {
            Some(s.to_owned())
        }
    };
    fn expr(
        template: &ClassExpression,
        id: &impl Fn(&str) -> Option<String>,
    ) -> Option<ClassExpression> {
        Some(match template {
            ClassExpression::Named(c) => ClassExpression::Named(ClassId::new(id(c.as_str())?)),
            ClassExpression::Top => ClassExpression::Top,
            ClassExpression::Bottom => ClassExpression::Bottom,
            ClassExpression::Not(inner) => ClassExpression::Not(Box::new(expr(inner, id)?)),
            ClassExpression::And(ms) => ClassExpression::And(
                ms.iter().map(|m| expr(m, id)).collect::<Option<Vec<_>>>()?,
            ),
            ClassExpression::Or(ms) => ClassExpression::Or(
                ms.iter().map(|m| expr(m, id)).collect::<Option<Vec<_>>>()?,
            ),
            ClassExpression::Exists(r, f) => ClassExpression::Exists(
                RoleId::new(id(r.as_str())?),
                Box::new(expr(f, id)?),
            ),
            ClassExpression::Forall(r, f) => ClassExpression::Forall(
                RoleId::new(id(r.as_str())?),
                Box::new(expr(f, id)?),
            ),
        })
    }
    Some(match template {
        Axiom::SubClassOf { sub, sup } => {
            Axiom::SubClassOf { sub: expr(sub, &id)?, sup: expr(sup, &id)? }
        }
        Axiom::DisjointClasses(a, b) => Axiom::DisjointClasses(expr(a, &id)?, expr(b, &id)?),
        Axiom::EquivalentClasses(ms) => Axiom::EquivalentClasses(
            ms.iter().map(|m| expr(m, &id)).collect::<Option<Vec<_>>>()?,
        ),
        Axiom::SubRoleOf { sub, sup } => Axiom::SubRoleOf {
            sub: RoleId::new(id(sub.as_str())?),
            sup: RoleId::new(id(sup.as_str())?),
        },
        Axiom::InverseRoles(a, b) => {
            Axiom::InverseRoles(RoleId::new(id(a.as_str())?), RoleId::new(id(b.as_str())?))
        }
        Axiom::RoleChain { chain, sup } => Axiom::RoleChain {
            chain: chain
                .iter()
                .map(|r| id(r.as_str()).map(RoleId::new))
                .collect::<Option<Vec<_>>>()?,
            sup: RoleId::new(id(sup.as_str())?),
        },
        Axiom::Domain(r, c) => Axiom::Domain(RoleId::new(id(r.as_str())?), expr(c, &id)?),
        Axiom::Range(r, c) => Axiom::Range(RoleId::new(id(r.as_str())?), expr(c, &id)?),
        Axiom::ClassAssertion(c, i) => {
            Axiom::ClassAssertion(expr(c, &id)?, IndividualId::new(id(i.as_str())?))
        }
        Axiom::RoleAssertion(r, a, b) => Axiom::RoleAssertion(
            RoleId::new(id(r.as_str())?),
            IndividualId::new(id(a.as_str())?),
            IndividualId::new(id(b.as_str())?),
        ),
    })
}

/// Swaps ∃ for ∀ at the top level of a subclass axiom's superclass.
fn quantifier_variants(axiom: &Axiom) -> Vec<Axiom> {
    let Axiom::SubClassOf { sub, sup } = axiom else {
        return Vec::new();
    };
    let swapped = match sup {
        ClassExpression::Exists(r, f) => ClassExpression::Forall(r.clone(), f.clone()),
        ClassExpression::Forall(r, f) => ClassExpression::Exists(r.clone(), f.clone()),
        _ => return Vec::new(),
    };
    vec![Axiom::SubClassOf { sub: sub.clone(), sup: swapped }]
}

#[cfg(test)]
mod tests {
    use super::super::{project_axiom, Method};
    use super::*;
    use crate::ontology::parse_axiom;

    fn set(edges: impl IntoIterator<Item = Edge>) -> BTreeSet<Edge> {
        edges.into_iter().collect()
    }

    #[test]
    fn owl2vecstar_role_edge_yields_both_quantifiers() {
        let axioms = invert_projection(
            &Method::owl2vecstar(),
            &set([Edge::new(":C", ":R", ":D")]),
        )
        .unwrap();
        // At least the two quantified readings, with the same edge also
        // admitting a role-assertion reading.
        assert!(axioms
            .contains(&parse_axiom("SubClassOf(:C ObjectSomeValuesFrom(:R :D))").unwrap()));
        assert!(axioms
            .contains(&parse_axiom("SubClassOf(:C ObjectAllValuesFrom(:R :D))").unwrap()));
        assert!(axioms.contains(&parse_axiom("ObjectPropertyAssertion(:R :C :D)").unwrap()));
        assert_eq!(axioms.len(), 3);
    }

    #[test]
    fn taxonomy_edge_yields_single_axiom() {
        let axioms = invert_projection(
            &Method::Taxonomy,
            &set([Edge::new(":C", "subclassof", ":D")]),
        )
        .unwrap();
        assert_eq!(axioms.len(), 1);
        assert!(axioms.contains(&parse_axiom("SubClassOf(:C :D)").unwrap()));
    }

    #[test]
    fn rdf_distinguishes_quantifiers() {
        let exists = parse_axiom("SubClassOf(:C ObjectSomeValuesFrom(:R :D))").unwrap();
        let edges = project_axiom(&Method::Rdf, &exists).unwrap();
        assert_eq!(edges.len(), 3);
        let inverted = invert_projection(&Method::Rdf, &edges).unwrap();
        assert_eq!(inverted, [exists].into());

        let forall = parse_axiom("SubClassOf(:C ObjectAllValuesFrom(:R :D))").unwrap();
        let edges = project_axiom(&Method::Rdf, &forall).unwrap();
        let inverted = invert_projection(&Method::Rdf, &edges).unwrap();
        assert_eq!(inverted, [forall].into());
    }

    #[test]
    fn rdf_reconstructs_nested_fillers() {
        let axiom =
            parse_axiom("SubClassOf(:A ObjectSomeValuesFrom(:R ObjectIntersectionOf(:B :C)))")
                .unwrap();
        let edges = project_axiom(&Method::Rdf, &axiom).unwrap();
        let inverted = invert_projection(&Method::Rdf, &edges).unwrap();
        assert_eq!(inverted, [axiom].into());
    }

    #[test]
    fn subclassof_pair_with_mirror_inverts_to_subclass() {
        let axioms = invert_projection(
            &Method::owl2vecstar(),
            &set([
                Edge::new(":C", "subclassof", ":D"),
                Edge::new(":D", "subclassof⁻¹", ":C"),
            ]),
        )
        .unwrap();
        assert_eq!(axioms, [parse_axiom("SubClassOf(:C :D)").unwrap()].into());
    }

    #[test]
    fn unrecognized_shape_reports_diagnostic() {
        let err = invert_projection(
            &Method::Taxonomy,
            &set([Edge::new(":C", ":R", ":D")]),
        )
        .unwrap_err();
        assert!(matches!(err, ProjectionError::UnrecognizedEdges { .. }));
    }

    #[test]
    fn patterns_invert_with_conflation() {
        let method = Method::Patterns {
            patterns: super::super::default_patterns(),
            conflate_quantifiers: true,
        };
        let axioms =
            invert_projection(&method, &set([Edge::new(":C", ":R", ":D")])).unwrap();
        assert!(axioms.contains(&parse_axiom("SubClassOf(:C ObjectSomeValuesFrom(:R :D))").unwrap()));
        assert!(axioms.contains(&parse_axiom("SubClassOf(:C ObjectAllValuesFrom(:R :D))").unwrap()));
    }
}
