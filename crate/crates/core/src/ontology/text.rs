//! Functional-syntax serialization. `parse(serialize(a))` is structurally
//! identical to `a` for every axiom variant.

use std::fmt::Write;

use super::ast::{Axiom, ClassExpression};
use super::Ontology;

pub fn serialize_axiom(axiom: &Axiom) -> String {
    let mut out = String::new();
    write_axiom(&mut out, axiom);
    out
}

/// One statement per line: prefixes first, then axioms in order.
pub fn serialize_ontology(ontology: &Ontology) -> String {
    let mut out = String::new();
    for (name, iri) in &ontology.prefixes {
        let _ = writeln!(out, "Prefix({name}:=<{iri}>)");
    }
    for axiom in &ontology.axioms {
        write_axiom(&mut out, axiom);
        out.push('\n');
    }
    out
}

fn write_axiom(out: &mut String, axiom: &Axiom) {
    match axiom {
        Axiom::SubClassOf { sub, sup } => {
            out.push_str("SubClassOf(");
            write_expr(out, sub);
            out.push(' ');
            write_expr(out, sup);
            out.push(')');
        }
        Axiom::EquivalentClasses(members) => {
            out.push_str("EquivalentClasses(");
            write_members(out, members);
            out.push(')');
        }
        Axiom::DisjointClasses(a, b) => {
            out.push_str("DisjointClasses(");
            write_expr(out, a);
            out.push(' ');
            write_expr(out, b);
            out.push(')');
        }
        Axiom::SubRoleOf { sub, sup } => {
            let _ = write!(out, "SubObjectPropertyOf({sub} {sup})");
        }
        Axiom::InverseRoles(a, b) => {
            let _ = write!(out, "InverseObjectProperties({a} {b})");
        }
        Axiom::RoleChain { chain, sup } => {
            out.push_str("SubObjectPropertyOf(ObjectPropertyChain(");
            for (i, r) in chain.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                let _ = write!(out, "{r}");
            }
            let _ = write!(out, ") {sup})");
        }
        Axiom::Domain(r, c) => {
            let _ = write!(out, "ObjectPropertyDomain({r} ");
            write_expr(out, c);
            out.push(')');
        }
        Axiom::Range(r, c) => {
            let _ = write!(out, "ObjectPropertyRange({r} ");
            write_expr(out, c);
            out.push(')');
        }
        Axiom::ClassAssertion(c, a) => {
            out.push_str("ClassAssertion(");
            write_expr(out, c);
            let _ = write!(out, " {a})");
        }
        Axiom::RoleAssertion(r, a, b) => {
            let _ = write!(out, "ObjectPropertyAssertion({r} {a} {b})");
        }
    }
}

fn write_members(out: &mut String, members: &[ClassExpression]) {
    for (i, m) in members.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        write_expr(out, m);
    }
}

fn write_expr(out: &mut String, expr: &ClassExpression) {
    match expr {
        ClassExpression::Named(id) => out.push_str(id.as_str()),
        ClassExpression::Top => out.push_str("owl:Thing"),
        ClassExpression::Bottom => out.push_str("owl:Nothing"),
        ClassExpression::Not(inner) => {
            out.push_str("ObjectComplementOf(");
            write_expr(out, inner);
            out.push(')');
        }
        ClassExpression::And(members) => {
            out.push_str("ObjectIntersectionOf(");
            write_members(out, members);
            out.push(')');
        }
        ClassExpression::Or(members) => {
            out.push_str("ObjectUnionOf(");
            write_members(out, members);
            out.push(')');
        }
        ClassExpression::Exists(r, filler) => {
            let _ = write!(out, "ObjectSomeValuesFrom({r} ");
            write_expr(out, filler);
            out.push(')');
        }
        ClassExpression::Forall(r, filler) => {
            let _ = write!(out, "ObjectAllValuesFrom({r} ");
            write_expr(out, filler);
            out.push(')');
        }
    }
}
