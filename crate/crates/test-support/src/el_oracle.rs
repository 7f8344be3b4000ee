//! Brute-force EL closure oracle and a random ontology generator.
//!
//! The oracle applies the completion rules by exhaustive full passes over
//! materialized fact sets until nothing changes (no worklist, no premise
//! indexes) and performs its own conversion to the named-signature
//! output. It exists to check the production saturation engine.

use std::collections::BTreeSet;

use ontoproj_core::ontology::{Axiom, ClassExpression, ClassId, Ontology, RoleId};
use ontoproj_core::reasoner::{ClosureFacts, RuleDump};
use rand::Rng;
use rand_chacha::ChaCha12Rng;

/// Full-pass fixpoint over the dumped rules.
pub fn oracle_closure(rules: &RuleDump) -> ClosureFacts {
    let n_classes = rules.class_names.len();
    let mut sub: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut ex: BTreeSet<(usize, usize, usize)> = BTreeSet::new();
    for c in 0..n_classes {
        sub.insert((c, c));
        sub.insert((c, rules.top));
    }

    loop {
        let mut new_sub: Vec<(usize, usize)> = Vec::new();
        let mut new_ex: Vec<(usize, usize, usize)> = Vec::new();

        // R1: sub(X,A), A ⊑ B
        for &(x, a) in &sub {
            for &(lhs, b) in &rules.subs {
                if lhs == a {
                    new_sub.push((x, b));
                }
            }
        }
        // R2: sub(X,A1), sub(X,A2), A1 ⊓ A2 ⊑ B
        for &(x, a1) in &sub {
            for &(c1, c2, b) in &rules.conjs {
                if c1 == a1 && sub.contains(&(x, c2)) {
                    new_sub.push((x, b));
                }
                if c2 == a1 && sub.contains(&(x, c1)) {
                    new_sub.push((x, b));
                }
            }
        }
        // R3a: sub(X,A), A ⊑ ∃r.B
        for &(x, a) in &sub {
            for &(lhs, r, b) in &rules.exists_rhs {
                if lhs == a {
                    new_ex.push((x, r, b));
                }
            }
        }
        // R3b: ex(X,r,Y), sub(Y,C), ∃r.C ⊑ D
        for &(x, r, y) in &ex {
            for &(y2, c) in &sub {
                if y2 != y {
                    continue;
                }
                for &(rr, cc, d) in &rules.exists_lhs {
                    if rr == r && cc == c {
                        new_sub.push((x, d));
                    }
                }
            }
        }
        // Bottom propagation: ex(X,r,Y), sub(Y,⊥)
        for &(x, _r, y) in &ex {
            if sub.contains(&(y, rules.bottom)) {
                new_sub.push((x, rules.bottom));
            }
        }
        // R4: ex(X,r,Y), r ⊑ s
        for &(x, r, y) in &ex {
            for &(rr, s) in &rules.role_subs {
                if rr == r {
                    new_ex.push((x, s, y));
                }
            }
        }
        // R5: ex(X,r,Y), ex(Y,s,Z), r∘s ⊑ t
        for &(x, r, y) in &ex {
            for &(y2, s, z) in &ex {
                if y2 != y {
                    continue;
                }
                for &(cr, cs, t) in &rules.role_chains {
                    if cr == r && cs == s {
                        new_ex.push((x, t, z));
                    }
                }
            }
        }

        let mut changed = false;
        for fact in new_sub {
            changed |= sub.insert(fact);
        }
        for fact in new_ex {
            changed |= ex.insert(fact);
        }
        if !changed {
            break;
        }
    }

    // Output conversion: named classes only; A ⊑ ⊥ survives; existentials
    // with an auxiliary tail are reported against named classes mutually
    // subsumed with the auxiliary.
    let named = |c: usize| rules.class_is_named[c];
    let mut out = ClosureFacts::default();
    for &(a, b) in &sub {
        if !named(a) || a == b {
            continue;
        }
        if b == rules.bottom {
            out.subsumptions
                .insert((ClassId::new(&rules.class_names[a]), ClassId::new("owl:Nothing")));
        } else if named(b) {
            out.subsumptions.insert((
                ClassId::new(&rules.class_names[a]),
                ClassId::new(&rules.class_names[b]),
            ));
        }
    }
    for &(a, r, b) in &ex {
        if !named(a) || !rules.role_is_named[r] {
            continue;
        }
        let mut tails: Vec<usize> = Vec::new();
        if named(b) {
            tails.push(b);
        } else if b != rules.top && b != rules.bottom {
            for c in 0..n_classes {
                if named(c) && sub.contains(&(b, c)) && sub.contains(&(c, b)) {
                    tails.push(c);
                }
            }
        }
        for t in tails {
            out.existentials.insert((
                ClassId::new(&rules.class_names[a]),
                RoleId::new(&rules.role_names[r]),
                ClassId::new(&rules.class_names[t]),
            ));
        }
    }
    out
}

fn class(i: usize) -> ClassExpression {
    ClassExpression::named(format!(":C{i}"))
}

fn role(i: usize) -> String {
    format!(":r{i}")
}

/// A random ontology with at most 15 classes, 5 roles and 40 axioms,
/// mixing every EL-expressible axiom shape plus a few skipped ones.
pub fn random_ontology(rng: &mut ChaCha12Rng) -> Ontology {
    let n_classes = rng.random_range(3..=15);
    let n_roles = rng.random_range(1..=5);
    let n_axioms = rng.random_range(3..=40);
    let mut axioms = Vec::with_capacity(n_axioms);
    for _ in 0..n_axioms {
        let a = rng.random_range(0..n_classes);
        let b = rng.random_range(0..n_classes);
        let c = rng.random_range(0..n_classes);
        let r = rng.random_range(0..n_roles);
        let s = rng.random_range(0..n_roles);
        let axiom = match rng.random_range(0..100) {
            0..=29 => Axiom::subclass(class(a), class(b)),
            30..=44 => Axiom::subclass(class(a), ClassExpression::exists(role(r), class(b))),
            45..=54 => Axiom::subclass(ClassExpression::exists(role(r), class(a)), class(b)),
            55..=64 => {
                Axiom::subclass(ClassExpression::And(vec![class(a), class(b)]), class(c))
            }
            65..=72 => {
                Axiom::subclass(class(a), ClassExpression::And(vec![class(b), class(c)]))
            }
            73..=80 => Axiom::EquivalentClasses(vec![
                class(a),
                ClassExpression::And(vec![
                    class(b),
                    ClassExpression::exists(role(r), class(c)),
                ]),
            ]),
            81..=85 => Axiom::DisjointClasses(class(a), class(b)),
            86..=90 => Axiom::SubRoleOf {
                sub: RoleId::new(role(r)),
                sup: RoleId::new(role(s)),
            },
            91..=94 => Axiom::RoleChain {
                chain: vec![RoleId::new(role(r)), RoleId::new(role(s))],
                sup: RoleId::new(role(rng.random_range(0..n_roles))),
            },
            95..=97 => Axiom::Domain(RoleId::new(role(r)), class(a)),
            _ => Axiom::subclass(class(a), ClassExpression::Bottom),
        };
        axioms.push(axiom);
    }
    Ontology::from_axioms(axioms).unwrap()
}
