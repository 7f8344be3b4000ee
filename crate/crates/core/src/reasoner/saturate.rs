//! Worklist fixpoint over the EL completion rules.
//!
//! Derived facts are `sub(A, B)` and `ex(A, r, B)` over interned classes.
//! Rules, with rule premises looked up in the normalized set:
//!
//! * R1  `sub(A,B)` and `B ⊑ C`            gives `sub(A,C)`
//! * R2  `sub(A,B1)`, `sub(A,B2)`, `B1⊓B2 ⊑ C` gives `sub(A,C)`
//! * R3a `sub(A,B)` and `B ⊑ ∃r.C`          gives `ex(A,r,C)`
//! * R3b `ex(A,r,B)`, `sub(B,C)`, `∃r.C ⊑ D` gives `sub(A,D)`
//! * R4  `ex(A,r,B)` and `r ⊑ s`            gives `ex(A,s,B)`
//! * R5  `ex(A,r,B)`, `ex(B,s,C)`, `r∘s ⊑ t` gives `ex(A,t,C)`
//! * RB  `ex(A,r,B)` and `sub(B,⊥)`         gives `sub(A,⊥)`
//!
//! Every class starts with `sub(A,A)` and `sub(A,⊤)`. Outputs are filtered
//! to named classes: reflexive pairs and `⊤` facts are dropped, `A ⊑ ⊥`
//! survives, and an existential whose tail is an auxiliary class is
//! reported against the named classes equivalent to that auxiliary.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use crate::ontology::{Axiom, ClassExpression, ClassId, RoleId};

use super::normalize::NormalizedAxiomSet;
use super::{Cls, Rol, BOT, BOTTOM_ID, TOP};

/// Entailed facts over the named input signature.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ClosureFacts {
    /// `(C, D)` for entailed `C ⊑ D`; `D` may be `owl:Nothing`.
    pub subsumptions: BTreeSet<(ClassId, ClassId)>,
    /// `(C, R, D)` for entailed `C ⊑ ∃R.D`.
    pub existentials: BTreeSet<(ClassId, RoleId, ClassId)>,
}

impl ClosureFacts {
    pub fn is_empty(&self) -> bool {
        self.subsumptions.is_empty() && self.existentials.is_empty()
    }

    pub fn len(&self) -> usize {
        self.subsumptions.len() + self.existentials.len()
    }

    pub fn contains_sub(&self, sub: &ClassId, sup: &ClassId) -> bool {
        self.subsumptions.contains(&(sub.clone(), sup.clone()))
    }

    pub fn contains_ex(&self, sub: &ClassId, role: &RoleId, filler: &ClassId) -> bool {
        self.existentials.contains(&(sub.clone(), role.clone(), filler.clone()))
    }

    pub fn is_subset_of(&self, other: &ClosureFacts) -> bool {
        self.subsumptions.is_subset(&other.subsumptions)
            && self.existentials.is_subset(&other.existentials)
    }

    /// `sub<TAB>C<TAB>D` and `ex<TAB>C<TAB>R<TAB>D` lines, sorted.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (c, d) in &self.subsumptions {
            out.push_str(&format!("sub\t{c}\t{d}\n"));
        }
        for (c, r, d) in &self.existentials {
            out.push_str(&format!("ex\t{c}\t{r}\t{d}\n"));
        }
        out
    }

    pub fn from_tsv(text: &str) -> Result<Self, String> {
        let mut facts = ClosureFacts::default();
        for (lineno, line) in text.lines().enumerate() {
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            match fields.as_slice() {
                ["sub", c, d] => {
                    facts.subsumptions.insert((ClassId::new(*c), ClassId::new(*d)));
                }
                ["ex", c, r, d] => {
                    facts.existentials.insert((
                        ClassId::new(*c),
                        RoleId::new(*r),
                        ClassId::new(*d),
                    ));
                }
                _ => return Err(format!("malformed closure line {}: {line}", lineno + 1)),
            }
        }
        Ok(facts)
    }
}

pub fn saturate(n: &NormalizedAxiomSet) -> ClosureFacts {
    let class_count = n.class_count();

    // Rule indexes.
    let mut subs_by_lhs: HashMap<Cls, Vec<Cls>> = HashMap::new();
    for &(a, b) in &n.subs {
        subs_by_lhs.entry(a).or_default().push(b);
    }
    let mut conjs_by_operand: HashMap<Cls, Vec<(Cls, Cls)>> = HashMap::new();
    for &(a1, a2, b) in &n.conjs {
        conjs_by_operand.entry(a1).or_default().push((a2, b));
        if a1 != a2 {
            conjs_by_operand.entry(a2).or_default().push((a1, b));
        }
    }
    let mut exrhs_by_lhs: HashMap<Cls, Vec<(Rol, Cls)>> = HashMap::new();
    for &(a, r, b) in &n.exists_rhs {
        exrhs_by_lhs.entry(a).or_default().push((r, b));
    }
    let mut exlhs_by_role_filler: HashMap<(Rol, Cls), Vec<Cls>> = HashMap::new();
    let mut exlhs_by_filler: HashMap<Cls, Vec<(Rol, Cls)>> = HashMap::new();
    for &(r, a, b) in &n.exists_lhs {
        exlhs_by_role_filler.entry((r, a)).or_default().push(b);
        exlhs_by_filler.entry(a).or_default().push((r, b));
    }
    let mut role_subs_by_sub: HashMap<Rol, Vec<Rol>> = HashMap::new();
    for &(r, s) in &n.role_subs {
        role_subs_by_sub.entry(r).or_default().push(s);
    }
    let mut chains_by_first: HashMap<Rol, Vec<(Rol, Rol)>> = HashMap::new();
    let mut chains_by_second: HashMap<Rol, Vec<(Rol, Rol)>> = HashMap::new();
    for &(r, s, t) in &n.role_chains {
        chains_by_first.entry(r).or_default().push((s, t));
        chains_by_second.entry(s).or_default().push((r, t));
    }

    // Fact stores with adjacency for premise joins.
    let mut sub_set: HashSet<(Cls, Cls)> = HashSet::new();
    let mut supers_of: HashMap<Cls, Vec<Cls>> = HashMap::new();
    let mut subs_of: HashMap<Cls, Vec<Cls>> = HashMap::new();
    let mut ex_set: HashSet<(Cls, Rol, Cls)> = HashSet::new();
    let mut ex_by_head: HashMap<Cls, Vec<(Rol, Cls)>> = HashMap::new();
    let mut ex_by_tail: HashMap<Cls, Vec<(Cls, Rol)>> = HashMap::new();

    #[derive(Clone, Copy)]
    enum Fact {
        Sub(Cls, Cls),
        Ex(Cls, Rol, Cls),
    }

    let mut queue: VecDeque<Fact> = VecDeque::new();
    let push_sub = |a: Cls,
                    b: Cls,
                    sub_set: &mut HashSet<(Cls, Cls)>,
                    queue: &mut VecDeque<Fact>| {
        if sub_set.insert((a, b)) {
            queue.push_back(Fact::Sub(a, b));
        }
    };
    let push_ex = |a: Cls,
                   r: Rol,
                   b: Cls,
                   ex_set: &mut HashSet<(Cls, Rol, Cls)>,
                   queue: &mut VecDeque<Fact>| {
        if ex_set.insert((a, r, b)) {
            queue.push_back(Fact::Ex(a, r, b));
        }
    };

    for i in 0..class_count {
        let c = Cls(i as u32);
        push_sub(c, c, &mut sub_set, &mut queue);
        push_sub(c, TOP, &mut sub_set, &mut queue);
    }

    while let Some(fact) = queue.pop_front() {
        match fact {
            Fact::Sub(x, a) => {
                supers_of.entry(x).or_default().push(a);
                subs_of.entry(a).or_default().push(x);
                // R1
                if let Some(bs) = subs_by_lhs.get(&a) {
                    for &b in bs {
                        push_sub(x, b, &mut sub_set, &mut queue);
                    }
                }
                // R2: the other operand must already be a superclass of x.
                if let Some(partners) = conjs_by_operand.get(&a) {
                    for &(other, b) in partners {
                        if sub_set.contains(&(x, other)) {
                            push_sub(x, b, &mut sub_set, &mut queue);
                        }
                    }
                }
                // R3a
                if let Some(restrictions) = exrhs_by_lhs.get(&a) {
                    for &(r, b) in restrictions {
                        push_ex(x, r, b, &mut ex_set, &mut queue);
                    }
                }
                // R3b, joining on newly learned sub(B,C): for every
                // ex(H, r, x) and rule ∃r.a ⊑ D.
                if let Some(rules) = exlhs_by_filler.get(&a) {
                    let heads = ex_by_tail.get(&x).cloned().unwrap_or_default();
                    for &(rule_role, d) in rules {
                        for &(h, r) in &heads {
                            if r == rule_role {
                                push_sub(h, d, &mut sub_set, &mut queue);
                            }
                        }
                    }
                }
                // RB, joining on newly learned sub(x, ⊥).
                if a == BOT {
                    let heads = ex_by_tail.get(&x).cloned().unwrap_or_default();
                    for &(h, _) in &heads {
                        push_sub(h, BOT, &mut sub_set, &mut queue);
                    }
                }
            }
            Fact::Ex(a, r, b) => {
                ex_by_head.entry(a).or_default().push((r, b));
                ex_by_tail.entry(b).or_default().push((a, r));
                // R3b, joining on the existential: every known sub(b, C)
                // with a rule ∃r.C ⊑ D.
                if let Some(cs) = supers_of.get(&b) {
                    let cs = cs.clone();
                    for c in cs {
                        if let Some(ds) = exlhs_by_role_filler.get(&(r, c)) {
                            for &d in ds {
                                push_sub(a, d, &mut sub_set, &mut queue);
                            }
                        }
                    }
                }
                // RB
                if sub_set.contains(&(b, BOT)) {
                    push_sub(a, BOT, &mut sub_set, &mut queue);
                }
                // R4
                if let Some(supers) = role_subs_by_sub.get(&r) {
                    for &s in supers {
                        push_ex(a, s, b, &mut ex_set, &mut queue);
                    }
                }
                // R5 with the new fact as first component.
                if let Some(seconds) = chains_by_first.get(&r) {
                    let tails = ex_by_head.get(&b).cloned().unwrap_or_default();
                    for &(s, t) in seconds {
                        for &(s2, c) in &tails {
                            if s2 == s {
                                push_ex(a, t, c, &mut ex_set, &mut queue);
                            }
                        }
                    }
                }
                // R5 with the new fact as second component.
                if let Some(firsts) = chains_by_second.get(&r) {
                    let heads = ex_by_tail.get(&a).cloned().unwrap_or_default();
                    for &(q, t) in firsts {
                        for &(h, q2) in &heads {
                            if q2 == q {
                                push_ex(h, t, b, &mut ex_set, &mut queue);
                            }
                        }
                    }
                }
            }
        }
    }

    facts_to_output(n, &sub_set, &ex_set)
}

/// Filters raw facts down to the named signature.
fn facts_to_output(
    n: &NormalizedAxiomSet,
    sub_set: &HashSet<(Cls, Cls)>,
    ex_set: &HashSet<(Cls, Rol, Cls)>,
) -> ClosureFacts {
    // Named classes equivalent to each auxiliary class (mutual subsumption).
    let mut equivalents: HashMap<Cls, Vec<Cls>> = HashMap::new();
    for &(a, b) in sub_set {
        if !n.is_named_class(a)
            && a != TOP
            && a != BOT
            && n.is_named_class(b)
            && sub_set.contains(&(b, a))
        {
            equivalents.entry(a).or_default().push(b);
        }
    }

    let mut out = ClosureFacts::default();
    for &(a, b) in sub_set {
        if !n.is_named_class(a) || a == b {
            continue;
        }
        if b == BOT {
            out.subsumptions
                .insert((ClassId::new(n.class_name(a)), ClassId::new(BOTTOM_ID)));
        } else if n.is_named_class(b) {
            out.subsumptions
                .insert((ClassId::new(n.class_name(a)), ClassId::new(n.class_name(b))));
        }
    }
    for &(a, r, b) in ex_set {
        if !n.is_named_class(a) || !n.is_named_role(r) {
            continue;
        }
        let head = ClassId::new(n.class_name(a));
        let role = RoleId::new(n.role_name(r));
        if n.is_named_class(b) {
            out.existentials.insert((head, role, ClassId::new(n.class_name(b))));
        } else if let Some(names) = equivalents.get(&b) {
            for &named in names {
                out.existentials.insert((
                    head.clone(),
                    role.clone(),
                    ClassId::new(n.class_name(named)),
                ));
            }
        }
    }
    out
}

/// Axioms of the requested pattern present in `full` but not in `reduced`,
/// in lexicographic identifier order.
pub fn closure_diff(
    full: &ClosureFacts,
    reduced: &ClosureFacts,
    pattern: crate::ontology::SplitPattern,
) -> Vec<Axiom> {
    match pattern {
        crate::ontology::SplitPattern::Sub => full
            .subsumptions
            .difference(&reduced.subsumptions)
            .filter(|(_, d)| d.as_str() != BOTTOM_ID)
            .map(|(c, d)| {
                Axiom::subclass(
                    ClassExpression::Named(c.clone()),
                    ClassExpression::Named(d.clone()),
                )
            })
            .collect(),
        crate::ontology::SplitPattern::Ex => full
            .existentials
            .difference(&reduced.existentials)
            .map(|(c, r, d)| {
                Axiom::subclass(
                    ClassExpression::Named(c.clone()),
                    ClassExpression::Exists(
                        r.clone(),
                        Box::new(ClassExpression::Named(d.clone())),
                    ),
                )
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::super::normalize;
    use super::*;
    use crate::ontology::{parse_ontology, SplitPattern};

    fn closure(text: &str) -> ClosureFacts {
        saturate(&normalize(&parse_ontology(text).unwrap()))
    }

    fn sub(c: &str, d: &str) -> (ClassId, ClassId) {
        (ClassId::new(c), ClassId::new(d))
    }

    #[test]
    fn transitivity() {
        let facts = closure("SubClassOf(:A :B)\nSubClassOf(:B :C)");
        assert!(facts.subsumptions.contains(&sub(":A", ":C")));
        assert!(!facts.subsumptions.contains(&sub(":A", ":A")));
    }

    #[test]
    fn go_worked_example() {
        // GO_2000859 ≡ GO_0065007 ⊓ ∃RO_0002212.GO_0035932, with a
        // subsumption path from GO_0065007 up to GO_0023051.
        let facts = closure(
            "EquivalentClasses(:GO_2000859 ObjectIntersectionOf(:GO_0065007 \
             ObjectSomeValuesFrom(:RO_0002212 :GO_0035932)))\n\
             SubClassOf(:GO_0065007 :GO_0050789)\n\
             SubClassOf(:GO_0050789 :GO_0023051)",
        );
        assert!(facts.subsumptions.contains(&sub(":GO_2000859", ":GO_0023051")));
        assert!(facts.existentials.contains(&(
            ClassId::new(":GO_2000859"),
            RoleId::new(":RO_0002212"),
            ClassId::new(":GO_0035932"),
        )));
    }

    #[test]
    fn conjunction_rule_fires() {
        let facts = closure(
            "SubClassOf(:A :B)\nSubClassOf(:A :C)\n\
             SubClassOf(ObjectIntersectionOf(:B :C) :D)",
        );
        assert!(facts.subsumptions.contains(&sub(":A", ":D")));
    }

    #[test]
    fn existential_premise_rule_fires() {
        let facts = closure(
            "SubClassOf(:A ObjectSomeValuesFrom(:R :B))\nSubClassOf(:B :C)\n\
             SubClassOf(ObjectSomeValuesFrom(:R :C) :D)",
        );
        assert!(facts.subsumptions.contains(&sub(":A", ":D")));
    }

    #[test]
    fn role_hierarchy_and_chain() {
        let facts = closure(
            "SubClassOf(:A ObjectSomeValuesFrom(:r :B))\n\
             SubObjectPropertyOf(:r :s)\n\
             SubClassOf(:B ObjectSomeValuesFrom(:s :C))\n\
             SubObjectPropertyOf(ObjectPropertyChain(:s :s) :t)",
        );
        assert!(facts.existentials.contains(&(
            ClassId::new(":A"),
            RoleId::new(":s"),
            ClassId::new(":B"),
        )));
        assert!(facts.existentials.contains(&(
            ClassId::new(":A"),
            RoleId::new(":t"),
            ClassId::new(":C"),
        )));
    }

    #[test]
    fn bottom_propagates_through_existentials() {
        let facts = closure(
            "SubClassOf(:A ObjectSomeValuesFrom(:R :B))\nSubClassOf(:B owl:Nothing)",
        );
        assert!(facts.subsumptions.contains(&sub(":A", BOTTOM_ID)));
        assert!(facts.subsumptions.contains(&sub(":B", BOTTOM_ID)));
    }

    #[test]
    fn named_definition_surfaces_existential() {
        // The aux filler introduced for ∃R.(B⊓C) is equivalent to the named
        // class X, so the existential is reported against X.
        let facts = closure(
            "SubClassOf(:A ObjectSomeValuesFrom(:R ObjectIntersectionOf(:B :C)))\n\
             EquivalentClasses(:X ObjectIntersectionOf(:B :C))",
        );
        assert!(facts.existentials.contains(&(
            ClassId::new(":A"),
            RoleId::new(":R"),
            ClassId::new(":X"),
        )));
    }

    #[test]
    fn diff_is_empty_for_identical_and_for_superset_reduced() {
        let full = closure("SubClassOf(:A :B)\nSubClassOf(:B :C)");
        let same = closure("SubClassOf(:A :B)\nSubClassOf(:B :C)");
        assert!(closure_diff(&full, &same, SplitPattern::Sub).is_empty());
        // diff of reduced against full is empty by monotonicity
        let reduced = closure("SubClassOf(:A :B)");
        assert!(closure_diff(&reduced, &full, SplitPattern::Sub).is_empty());
        let diff = closure_diff(&full, &reduced, SplitPattern::Sub);
        assert_eq!(diff.len(), 2); // B⊑C and A⊑C
    }

    #[test]
    fn tsv_round_trip() {
        let facts = closure(
            "SubClassOf(:A :B)\nSubClassOf(:A ObjectSomeValuesFrom(:R :C))",
        );
        let text = facts.to_tsv();
        assert_eq!(ClosureFacts::from_tsv(&text).unwrap(), facts);
    }
}
