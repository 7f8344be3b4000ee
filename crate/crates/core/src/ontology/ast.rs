use std::collections::BTreeSet;
use std::fmt;

use super::NamespaceClash;

macro_rules! identifier {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(String);

        impl $name {
            pub fn new(token: impl Into<String>) -> Self {
                Self(token.into())
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $name {
            fn from(token: &str) -> Self {
                Self::new(token)
            }
        }
    };
}

identifier! {
    /// A class name as written in the source, e.g. `:A` or `go:GO_0008150`.
    ClassId
}
identifier! {
    /// A role (object property) name as written in the source.
    RoleId
}
identifier! {
    /// An individual name as written in the source.
    IndividualId
}

/// A concept description over named classes, ⊤, ⊥, ¬, ⊓, ⊔, ∃ and ∀.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClassExpression {
    Named(ClassId),
    Top,
    Bottom,
    Not(Box<ClassExpression>),
    /// Intersection; preserves source order, length ≥ 2.
    And(Vec<ClassExpression>),
    /// Union; preserves source order, length ≥ 2.
    Or(Vec<ClassExpression>),
    Exists(RoleId, Box<ClassExpression>),
    Forall(RoleId, Box<ClassExpression>),
}

impl ClassExpression {
    pub fn named(id: impl Into<String>) -> Self {
        ClassExpression::Named(ClassId::new(id))
    }

    pub fn exists(role: impl Into<String>, filler: ClassExpression) -> Self {
        ClassExpression::Exists(RoleId::new(role), Box::new(filler))
    }

    pub fn forall(role: impl Into<String>, filler: ClassExpression) -> Self {
        ClassExpression::Forall(RoleId::new(role), Box::new(filler))
    }

    /// Nesting depth; a named class, ⊤ or ⊥ has depth 1.
    pub fn depth(&self) -> usize {
        match self {
            ClassExpression::Named(_) | ClassExpression::Top | ClassExpression::Bottom => 1,
            ClassExpression::Not(inner) => 1 + inner.depth(),
            ClassExpression::And(members) | ClassExpression::Or(members) => {
                1 + members.iter().map(ClassExpression::depth).max().unwrap_or(0)
            }
            ClassExpression::Exists(_, filler) | ClassExpression::Forall(_, filler) => {
                1 + filler.depth()
            }
        }
    }

    fn collect(&self, sig: &mut SignatureUsage) {
        match self {
            ClassExpression::Named(c) => sig.class(c),
            ClassExpression::Top | ClassExpression::Bottom => {}
            ClassExpression::Not(inner) => inner.collect(sig),
            ClassExpression::And(members) | ClassExpression::Or(members) => {
                for m in members {
                    m.collect(sig);
                }
            }
            ClassExpression::Exists(r, filler) | ClassExpression::Forall(r, filler) => {
                sig.role(r);
                filler.collect(sig);
            }
        }
    }
}

/// A Description Logic axiom.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    SubClassOf { sub: ClassExpression, sup: ClassExpression },
    /// Length ≥ 2; kept in source form, expanded pairwise downstream.
    EquivalentClasses(Vec<ClassExpression>),
    /// Stored as asserted; interchangeable with `And(a, b) ⊑ ⊥`.
    DisjointClasses(ClassExpression, ClassExpression),
    SubRoleOf { sub: RoleId, sup: RoleId },
    InverseRoles(RoleId, RoleId),
    RoleChain { chain: Vec<RoleId>, sup: RoleId },
    Domain(RoleId, ClassExpression),
    Range(RoleId, ClassExpression),
    ClassAssertion(ClassExpression, IndividualId),
    RoleAssertion(RoleId, IndividualId, IndividualId),
}

impl Axiom {
    pub fn subclass(sub: ClassExpression, sup: ClassExpression) -> Self {
        Axiom::SubClassOf { sub, sup }
    }

    fn collect(&self, sig: &mut SignatureUsage) {
        match self {
            Axiom::SubClassOf { sub, sup } => {
                sub.collect(sig);
                sup.collect(sig);
            }
            Axiom::EquivalentClasses(members) => {
                for m in members {
                    m.collect(sig);
                }
            }
            Axiom::DisjointClasses(a, b) => {
                a.collect(sig);
                b.collect(sig);
            }
            Axiom::SubRoleOf { sub, sup } => {
                sig.role(sub);
                sig.role(sup);
            }
            Axiom::InverseRoles(a, b) => {
                sig.role(a);
                sig.role(b);
            }
            Axiom::RoleChain { chain, sup } => {
                for r in chain {
                    sig.role(r);
                }
                sig.role(sup);
            }
            Axiom::Domain(r, c) | Axiom::Range(r, c) => {
                sig.role(r);
                c.collect(sig);
            }
            Axiom::ClassAssertion(c, a) => {
                c.collect(sig);
                sig.individual(a);
            }
            Axiom::RoleAssertion(r, a, b) => {
                sig.role(r);
                sig.individual(a);
                sig.individual(b);
            }
        }
    }
}

/// The class, role and individual names of an ontology. The three sets are
/// pairwise disjoint by identifier.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    pub classes: BTreeSet<ClassId>,
    pub roles: BTreeSet<RoleId>,
    pub individuals: BTreeSet<IndividualId>,
}

impl Signature {
    /// Computes the signature from identifier usage, rejecting identifiers
    /// that appear in more than one namespace.
    pub fn from_axioms(axioms: &[Axiom]) -> Result<Self, NamespaceClash> {
        let mut usage = SignatureUsage::default();
        for axiom in axioms {
            axiom.collect(&mut usage);
        }
        usage.finish()
    }

    pub fn contains_class(&self, id: &ClassId) -> bool {
        self.classes.contains(id)
    }
}

#[derive(Default)]
struct SignatureUsage {
    classes: BTreeSet<String>,
    roles: BTreeSet<String>,
    individuals: BTreeSet<String>,
}

impl SignatureUsage {
    fn class(&mut self, id: &ClassId) {
        self.classes.insert(id.as_str().to_owned());
    }

    fn role(&mut self, id: &RoleId) {
        self.roles.insert(id.as_str().to_owned());
    }

    fn individual(&mut self, id: &IndividualId) {
        self.individuals.insert(id.as_str().to_owned());
    }

    fn finish(self) -> Result<Signature, NamespaceClash> {
        let pairs: [(&BTreeSet<String>, &'static str); 3] = [
            (&self.classes, "a class"),
            (&self.roles, "a role"),
            (&self.individuals, "an individual"),
        ];
        for i in 0..pairs.len() {
            for j in (i + 1)..pairs.len() {
                if let Some(id) = pairs[i].0.intersection(pairs[j].0).next() {
                    return Err(NamespaceClash {
                        id: id.clone(),
                        first: pairs[i].1,
                        second: pairs[j].1,
                    });
                }
            }
        }
        Ok(Signature {
            classes: self.classes.into_iter().map(ClassId::new).collect(),
            roles: self.roles.into_iter().map(RoleId::new).collect(),
            individuals: self.individuals.into_iter().map(IndividualId::new).collect(),
        })
    }
}
