//! EL normalization. Axioms are rewritten into the normal forms
//! `A ⊑ B`, `A1 ⊓ A2 ⊑ B`, `A ⊑ ∃r.B`, `∃r.A ⊑ B`, `r ⊑ s` and
//! `r ∘ s ⊑ t` over named classes plus fresh auxiliary names.
//!
//! Complex subexpressions are replaced by auxiliary classes defined in both
//! directions (aux ≡ expression), which keeps the rewriting a conservative
//! extension: entailments over the input signature are unchanged. Axioms
//! outside the EL fragment (¬, ⊔, ∀, inverse roles, ranges, assertions) are
//! skipped and reported.

use std::collections::HashMap;

use crate::ontology::{Axiom, ClassExpression, Ontology};

use super::{Cls, Rol, BOT, TOP};

/// Rules in EL normal form plus the interning tables that map indices back
/// to source identifiers.
#[derive(Debug, Clone, Default)]
pub struct NormalizedAxiomSet {
    pub(crate) class_names: Vec<String>,
    pub(crate) class_is_named: Vec<bool>,
    pub(crate) role_names: Vec<String>,
    pub(crate) role_is_named: Vec<bool>,
    /// A ⊑ B
    pub(crate) subs: Vec<(Cls, Cls)>,
    /// A1 ⊓ A2 ⊑ B
    pub(crate) conjs: Vec<(Cls, Cls, Cls)>,
    /// A ⊑ ∃r.B
    pub(crate) exists_rhs: Vec<(Cls, Rol, Cls)>,
    /// ∃r.A ⊑ B
    pub(crate) exists_lhs: Vec<(Rol, Cls, Cls)>,
    /// r ⊑ s
    pub(crate) role_subs: Vec<(Rol, Rol)>,
    /// r ∘ s ⊑ t
    pub(crate) role_chains: Vec<(Rol, Rol, Rol)>,
    /// Axioms (or axiom directions) outside the EL fragment.
    pub skipped: Vec<Axiom>,
}

/// Plain-index view of the normalized rules, top/bottom fixed at 0/1.
/// This is the surface an independent fixpoint implementation works from.
#[derive(Debug, Clone)]
pub struct RuleDump {
    pub class_names: Vec<String>,
    pub class_is_named: Vec<bool>,
    pub role_names: Vec<String>,
    pub role_is_named: Vec<bool>,
    /// A ⊑ B
    pub subs: Vec<(usize, usize)>,
    /// A1 ⊓ A2 ⊑ B
    pub conjs: Vec<(usize, usize, usize)>,
    /// A ⊑ ∃r.B
    pub exists_rhs: Vec<(usize, usize, usize)>,
    /// ∃r.A ⊑ B as (r, A, B)
    pub exists_lhs: Vec<(usize, usize, usize)>,
    /// r ⊑ s
    pub role_subs: Vec<(usize, usize)>,
    /// r ∘ s ⊑ t
    pub role_chains: Vec<(usize, usize, usize)>,
    pub top: usize,
    pub bottom: usize,
}

impl NormalizedAxiomSet {
    pub fn rule_count(&self) -> usize {
        self.subs.len()
            + self.conjs.len()
            + self.exists_rhs.len()
            + self.exists_lhs.len()
            + self.role_subs.len()
            + self.role_chains.len()
    }

    pub fn dump(&self) -> RuleDump {
        RuleDump {
            class_names: self.class_names.clone(),
            class_is_named: self.class_is_named.clone(),
            role_names: self.role_names.clone(),
            role_is_named: self.role_is_named.clone(),
            subs: self.subs.iter().map(|&(a, b)| (a.0 as usize, b.0 as usize)).collect(),
            conjs: self
                .conjs
                .iter()
                .map(|&(a, b, c)| (a.0 as usize, b.0 as usize, c.0 as usize))
                .collect(),
            exists_rhs: self
                .exists_rhs
                .iter()
                .map(|&(a, r, b)| (a.0 as usize, r.0 as usize, b.0 as usize))
                .collect(),
            exists_lhs: self
                .exists_lhs
                .iter()
                .map(|&(r, a, b)| (r.0 as usize, a.0 as usize, b.0 as usize))
                .collect(),
            role_subs: self.role_subs.iter().map(|&(r, s)| (r.0 as usize, s.0 as usize)).collect(),
            role_chains: self
                .role_chains
                .iter()
                .map(|&(r, s, t)| (r.0 as usize, s.0 as usize, t.0 as usize))
                .collect(),
            top: TOP.0 as usize,
            bottom: BOT.0 as usize,
        }
    }

    pub(crate) fn class_count(&self) -> usize {
        self.class_names.len()
    }

    pub(crate) fn is_named_class(&self, c: Cls) -> bool {
        self.class_is_named[c.0 as usize]
    }

    pub(crate) fn class_name(&self, c: Cls) -> &str {
        &self.class_names[c.0 as usize]
    }

    pub(crate) fn is_named_role(&self, r: Rol) -> bool {
        self.role_is_named[r.0 as usize]
    }

    pub(crate) fn role_name(&self, r: Rol) -> &str {
        &self.role_names[r.0 as usize]
    }
}

struct Normalizer {
    out: NormalizedAxiomSet,
    class_index: HashMap<String, Cls>,
    role_index: HashMap<String, Rol>,
    /// Structural sharing of auxiliary definitions.
    aux_for_expr: HashMap<ClassExpression, Cls>,
    aux_count: usize,
}

/// Either an atomic class or something that still needs a name.
enum Side {
    Atomic(Cls),
    Complex,
}

pub fn normalize(ontology: &Ontology) -> NormalizedAxiomSet {
    let mut n = Normalizer {
        out: NormalizedAxiomSet::default(),
        class_index: HashMap::new(),
        role_index: HashMap::new(),
        aux_for_expr: HashMap::new(),
        aux_count: 0,
    };
    n.out.class_names.push("owl:Thing".into());
    n.out.class_is_named.push(false);
    n.out.class_names.push("owl:Nothing".into());
    n.out.class_is_named.push(false);

    // Register every signature class up front so the closure initializes
    // reflexive facts even for classes that only occur in skipped axioms.
    for c in &ontology.signature.classes {
        n.named_class(c.as_str());
    }
    for r in &ontology.signature.roles {
        n.named_role(r.as_str());
    }

    for axiom in &ontology.axioms {
        n.axiom(axiom);
    }
    n.out
}

impl Normalizer {
    fn named_class(&mut self, name: &str) -> Cls {
        if let Some(&c) = self.class_index.get(name) {
            return c;
        }
        let c = Cls(self.out.class_names.len() as u32);
        self.out.class_names.push(name.to_owned());
        self.out.class_is_named.push(true);
        self.class_index.insert(name.to_owned(), c);
        c
    }

    fn fresh_class(&mut self) -> Cls {
        let c = Cls(self.out.class_names.len() as u32);
        self.aux_count += 1;
        self.out.class_names.push(format!("_aux{}", self.aux_count));
        self.out.class_is_named.push(false);
        c
    }

    fn named_role(&mut self, name: &str) -> Rol {
        if let Some(&r) = self.role_index.get(name) {
            return r;
        }
        let r = Rol(self.out.role_names.len() as u32);
        self.out.role_names.push(name.to_owned());
        self.out.role_is_named.push(true);
        self.role_index.insert(name.to_owned(), r);
        r
    }

    fn fresh_role(&mut self) -> Rol {
        let r = Rol(self.out.role_names.len() as u32);
        self.out.role_names.push(format!("_auxrole{}", r.0));
        self.out.role_is_named.push(false);
        r
    }

    fn axiom(&mut self, axiom: &Axiom) {
        match axiom {
            Axiom::SubClassOf { sub, sup } => {
                if el_expression(sub) && el_expression(sup) {
                    self.gci(sub, sup);
                } else {
                    self.out.skipped.push(axiom.clone());
                }
            }
            Axiom::EquivalentClasses(members) => {
                let mut any_skipped = false;
                for (i, a) in members.iter().enumerate() {
                    for (j, b) in members.iter().enumerate() {
                        if i == j {
                            continue;
                        }
                        if el_expression(a) && el_expression(b) {
                            self.gci(a, b);
                        } else {
                            any_skipped = true;
                        }
                    }
                }
                if any_skipped {
                    self.out.skipped.push(axiom.clone());
                }
            }
            Axiom::DisjointClasses(a, b) => {
                if el_expression(a) && el_expression(b) {
                    let conj = ClassExpression::And(vec![a.clone(), b.clone()]);
                    self.gci(&conj, &ClassExpression::Bottom);
                } else {
                    self.out.skipped.push(axiom.clone());
                }
            }
            Axiom::SubRoleOf { sub, sup } => {
                let sub = self.named_role(sub.as_str());
                let sup = self.named_role(sup.as_str());
                self.out.role_subs.push((sub, sup));
            }
            Axiom::RoleChain { chain, sup } => {
                let sup = self.named_role(sup.as_str());
                let parts: Vec<Rol> = chain.iter().map(|r| self.named_role(r.as_str())).collect();
                // Binarize left to right: r1∘r2∘r3 ⊑ t becomes r1∘r2 ⊑ u,
                // u∘r3 ⊑ t with u fresh.
                let mut head = parts[0];
                for (i, &next) in parts[1..].iter().enumerate() {
                    let target =
                        if i + 2 == parts.len() { sup } else { self.fresh_role() };
                    self.out.role_chains.push((head, next, target));
                    head = target;
                }
            }
            Axiom::Domain(r, c) => {
                if el_expression(c) {
                    let restriction = ClassExpression::Exists(
                        crate::ontology::RoleId::new(r.as_str()),
                        Box::new(ClassExpression::Top),
                    );
                    self.gci(&restriction, c);
                } else {
                    self.out.skipped.push(axiom.clone());
                }
            }
            // Outside the EL fragment handled here: ranges need dedicated
            // completion rules, inverses and the ABox are out of scope.
            Axiom::InverseRoles(..)
            | Axiom::Range(..)
            | Axiom::ClassAssertion(..)
            | Axiom::RoleAssertion(..) => {
                self.out.skipped.push(axiom.clone());
            }
        }
    }

    fn side(&mut self, expr: &ClassExpression) -> Side {
        match expr {
            ClassExpression::Top => Side::Atomic(TOP),
            ClassExpression::Bottom => Side::Atomic(BOT),
            ClassExpression::Named(id) => Side::Atomic(self.named_class(id.as_str())),
            _ => Side::Complex,
        }
    }

    /// Returns an atomic class equivalent to the expression, introducing an
    /// auxiliary definition when the expression is complex.
    fn atom_of(&mut self, expr: &ClassExpression) -> Cls {
        match self.side(expr) {
            Side::Atomic(c) => c,
            Side::Complex => {
                if let Some(&aux) = self.aux_for_expr.get(expr) {
                    return aux;
                }
                let aux = self.fresh_class();
                self.aux_for_expr.insert(expr.clone(), aux);
                self.gci_atom_left(aux, expr);
                self.gci_atom_right(expr, aux);
                aux
            }
        }
    }

    fn gci(&mut self, sub: &ClassExpression, sup: &ClassExpression) {
        match (self.side(sub), self.side(sup)) {
            (Side::Atomic(a), Side::Atomic(b)) => self.out.subs.push((a, b)),
            (Side::Atomic(a), Side::Complex) => self.gci_atom_left(a, sup),
            (Side::Complex, Side::Atomic(b)) => self.gci_atom_right(sub, b),
            (Side::Complex, Side::Complex) => {
                let b = self.atom_of(sup);
                self.gci_atom_right(sub, b);
            }
        }
    }

    /// `a ⊑ sup` with `a` atomic and `sup` complex.
    fn gci_atom_left(&mut self, a: Cls, sup: &ClassExpression) {
        match sup {
            ClassExpression::And(members) => {
                for m in members {
                    match self.side(m) {
                        Side::Atomic(b) => self.out.subs.push((a, b)),
                        Side::Complex => self.gci_atom_left(a, m),
                    }
                }
            }
            ClassExpression::Exists(r, filler) => {
                let r = self.named_role(r.as_str());
                let b = self.atom_of(filler);
                self.out.exists_rhs.push((a, r, b));
            }
            _ => unreachable!("non-EL expression reached normalization"),
        }
    }

    /// `sub ⊑ b` with `b` atomic and `sub` complex.
    fn gci_atom_right(&mut self, sub: &ClassExpression, b: Cls) {
        match sub {
            ClassExpression::And(members) => {
                let atoms: Vec<Cls> = members.iter().map(|m| self.atom_of(m)).collect();
                let mut current = atoms[0];
                for (i, &next) in atoms[1..].iter().enumerate() {
                    let target = if i + 2 == atoms.len() {
                        b
                    } else {
                        let aux = self.fresh_class();
                        // aux ≡ current ⊓ next
                        self.out.subs.push((aux, current));
                        self.out.subs.push((aux, next));
                        aux
                    };
                    self.out.conjs.push((current, next, target));
                    current = target;
                }
            }
            ClassExpression::Exists(r, filler) => {
                let r = self.named_role(r.as_str());
                let a = self.atom_of(filler);
                self.out.exists_lhs.push((r, a, b));
            }
            _ => unreachable!("non-EL expression reached normalization"),
        }
    }
}

/// EL expressions: named classes, ⊤, ⊥, ⊓ and ∃.
fn el_expression(expr: &ClassExpression) -> bool {
    match expr {
        ClassExpression::Named(_) | ClassExpression::Top | ClassExpression::Bottom => true,
        ClassExpression::And(members) => members.iter().all(el_expression),
        ClassExpression::Exists(_, filler) => el_expression(filler),
        ClassExpression::Not(_) | ClassExpression::Or(_) | ClassExpression::Forall(..) => false,
    }
}
