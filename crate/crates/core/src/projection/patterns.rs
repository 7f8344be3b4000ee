//! Relational-pattern projection over the deductive closure.
//!
//! A pattern pairs an axiom template containing `?X`-style variables with
//! an output edge template. Subsumption and existential templates are
//! instantiated against the closure facts (so the reasoning step is what
//! distinguishes this method from a purely syntactic one); disjointness
//! and any other template shapes match asserted axioms syntactically.
//!
//! File format, one pattern per line:
//!
//! ```text
//! SubClassOf(?X ObjectSomeValuesFrom(?R ?Y)) => (?X ?R ?Y)
//! ```

use std::collections::{BTreeMap, BTreeSet};

use crate::ontology::{
    parse_ontology_with, Axiom, ClassExpression, ClassId, Ontology, ParserConfig, RoleId,
};
use crate::reasoner::{ClosureFacts, BOTTOM_ID};

use super::{Edge, EdgeAccumulator, MethodKind, ProjectionError, ProjectionResult};

/// An axiom template plus an output edge template. Identifiers starting
/// with `?` are variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationalPattern {
    pub template: Axiom,
    pub out_head: PatternTerm,
    pub out_label: PatternTerm,
    pub out_tail: PatternTerm,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PatternTerm {
    Var(String),
    Const(String),
}

impl PatternTerm {
    fn parse(token: &str) -> Self {
        if token.starts_with('?') && token.len() > 1 {
            PatternTerm::Var(token.to_owned())
        } else {
            PatternTerm::Const(token.to_owned())
        }
    }

    fn instantiate(&self, bindings: &Bindings) -> Option<String> {
        match self {
            PatternTerm::Const(c) => Some(c.clone()),
            PatternTerm::Var(v) => bindings.get(v).cloned(),
        }
    }
}

type Bindings = BTreeMap<String, String>;

/// The default pattern set: named subsumptions, existential restrictions,
/// and disjointness.
pub fn default_patterns() -> Vec<RelationalPattern> {
    vec![
        parse_pattern_line("SubClassOf(?X ?Y) => (?X subclassof ?Y)").unwrap(),
        parse_pattern_line("SubClassOf(?X ObjectSomeValuesFrom(?R ?Y)) => (?X ?R ?Y)").unwrap(),
        parse_pattern_line(
            "SubClassOf(ObjectIntersectionOf(?X ?Y) owl:Nothing) => (?X disjointwith ?Y)",
        )
        .unwrap(),
    ]
}

pub fn parse_pattern_file(text: &str) -> Result<Vec<RelationalPattern>, ProjectionError> {
    let mut patterns = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        patterns.push(parse_pattern_line(line)?);
    }
    if patterns.is_empty() {
        return Err(ProjectionError::InvalidPattern("pattern file is empty".into()));
    }
    Ok(patterns)
}

pub fn parse_pattern_line(line: &str) -> Result<RelationalPattern, ProjectionError> {
    let (template_text, edge_text) = line
        .split_once("=>")
        .ok_or_else(|| ProjectionError::InvalidPattern(format!("missing `=>` in `{line}`")))?;
    let config = ParserConfig { allow_variables: true, ..ParserConfig::default() };
    let template_ontology = parse_ontology_with(template_text.trim(), &config)
        .map_err(|e| ProjectionError::InvalidPattern(e.to_string()))?;
    let [template]: [Axiom; 1] = <[Axiom; 1]>::try_from(template_ontology.axioms)
        .map_err(|_| ProjectionError::InvalidPattern("expected exactly one template axiom".into()))?;

    let edge_text = edge_text.trim();
    let inner = edge_text
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| {
            ProjectionError::InvalidPattern(format!("edge template `{edge_text}` must be (h l t)"))
        })?;
    let terms: Vec<&str> = inner.split_whitespace().collect();
    let [head, label, tail] = terms.as_slice() else {
        return Err(ProjectionError::InvalidPattern(format!(
            "edge template `{edge_text}` must have three terms"
        )));
    };
    let pattern = RelationalPattern {
        template,
        out_head: PatternTerm::parse(head),
        out_label: PatternTerm::parse(label),
        out_tail: PatternTerm::parse(tail),
    };
    pattern.validate()?;
    Ok(pattern)
}

impl RelationalPattern {
    /// Every output variable must occur in the template.
    pub fn validate(&self) -> Result<(), ProjectionError> {
        let vars = template_variables(&self.template);
        for term in [&self.out_head, &self.out_label, &self.out_tail] {
            if let PatternTerm::Var(v) = term {
                if !vars.contains(v) {
                    return Err(ProjectionError::UnboundOutputVariable(v.clone()));
                }
            }
        }
        Ok(())
    }

    fn emit(&self, bindings: &Bindings) -> Option<Edge> {
        Some(Edge::new(
            self.out_head.instantiate(bindings)?,
            self.out_label.instantiate(bindings)?,
            self.out_tail.instantiate(bindings)?,
        ))
    }
}

fn template_variables(axiom: &Axiom) -> BTreeSet<String> {
    let mut vars = BTreeSet::new();
    let mut add = |s: &str| {
        if s.starts_with('?') {
            vars.insert(s.to_owned());
        }
    };
    fn walk_expr(expr: &ClassExpression, add: &mut impl FnMut(&str)) {
        match expr {
            ClassExpression::Named(id) => add(id.as_str()),
            ClassExpression::Top | ClassExpression::Bottom => {}
            ClassExpression::Not(inner) => walk_expr(inner, add),
            ClassExpression::And(ms) | ClassExpression::Or(ms) => {
                for m in ms {
                    walk_expr(m, add);
                }
            }
            ClassExpression::Exists(r, f) | ClassExpression::Forall(r, f) => {
                add(r.as_str());
                walk_expr(f, add);
            }
        }
    }
    match axiom {
        Axiom::SubClassOf { sub, sup } => {
            walk_expr(sub, &mut add);
            walk_expr(sup, &mut add);
        }
        Axiom::EquivalentClasses(ms) => {
            for m in ms {
                walk_expr(m, &mut add);
            }
        }
        Axiom::DisjointClasses(a, b) => {
            walk_expr(a, &mut add);
            walk_expr(b, &mut add);
        }
        Axiom::SubRoleOf { sub, sup } => {
            add(sub.as_str());
            add(sup.as_str());
        }
        Axiom::InverseRoles(a, b) => {
            add(a.as_str());
            add(b.as_str());
        }
        Axiom::RoleChain { chain, sup } => {
            for r in chain {
                add(r.as_str());
            }
            add(sup.as_str());
        }
        Axiom::Domain(r, c) | Axiom::Range(r, c) => {
            add(r.as_str());
            walk_expr(c, &mut add);
        }
        Axiom::ClassAssertion(c, i) => {
            walk_expr(c, &mut add);
            add(i.as_str());
        }
        Axiom::RoleAssertion(r, a, b) => {
            add(r.as_str());
            add(a.as_str());
            add(b.as_str());
        }
    }
    vars
}

/// How a template is evaluated.
enum TemplateClass<'a> {
    /// `SubClassOf(x, y)` over named terms: instantiated from closure
    /// subsumptions.
    Sub { x: &'a ClassId, y: &'a ClassId },
    /// `SubClassOf(x, ∃r.y)`: instantiated from closure existentials.
    Ex { x: &'a ClassId, role: &'a RoleId, y: &'a ClassId },
    /// Disjointness in either asserted form.
    Disjoint { x: &'a ClassId, y: &'a ClassId },
    /// Any other shape: unified syntactically against asserted axioms.
    General,
}

fn classify(template: &Axiom) -> TemplateClass<'_> {
    match template {
        Axiom::SubClassOf { sub: ClassExpression::Named(x), sup: ClassExpression::Named(y) } => {
            TemplateClass::Sub { x, y }
        }
        Axiom::SubClassOf { sub: ClassExpression::Named(x), sup: ClassExpression::Exists(r, f) } => {
            match f.as_ref() {
                ClassExpression::Named(y) => TemplateClass::Ex { x, role: r, y },
                _ => TemplateClass::General,
            }
        }
        Axiom::SubClassOf { sub: ClassExpression::And(members), sup: ClassExpression::Bottom } => {
            match members.as_slice() {
                [ClassExpression::Named(x), ClassExpression::Named(y)] => {
                    TemplateClass::Disjoint { x, y }
                }
                _ => TemplateClass::General,
            }
        }
        Axiom::DisjointClasses(ClassExpression::Named(x), ClassExpression::Named(y)) => {
            TemplateClass::Disjoint { x, y }
        }
        _ => TemplateClass::General,
    }
}

fn bind(term: &str, value: &str, bindings: &mut Bindings) -> bool {
    if term.starts_with('?') {
        match bindings.get(term) {
            Some(bound) => bound == value,
            None => {
                bindings.insert(term.to_owned(), value.to_owned());
                true
            }
        }
    } else {
        term == value
    }
}

pub fn project_patterns(
    ontology: &Ontology,
    closure: &ClosureFacts,
    patterns: &[RelationalPattern],
    conflate_quantifiers: bool,
) -> Result<ProjectionResult, ProjectionError> {
    if patterns.is_empty() {
        return Err(ProjectionError::InvalidPattern("pattern set is empty".into()));
    }
    for p in patterns {
        p.validate()?;
    }
    let mut acc = EdgeAccumulator::new(MethodKind::Patterns);

    for pattern in patterns {
        match classify(&pattern.template) {
            TemplateClass::Sub { x, y } => {
                for (c, d) in &closure.subsumptions {
                    if d.as_str() == BOTTOM_ID {
                        continue;
                    }
                    let mut bindings = Bindings::new();
                    if bind(x.as_str(), c.as_str(), &mut bindings)
                        && bind(y.as_str(), d.as_str(), &mut bindings)
                    {
                        if let Some(edge) = pattern.emit(&bindings) {
                            let fact = Axiom::subclass(
                                ClassExpression::Named(c.clone()),
                                ClassExpression::Named(d.clone()),
                            );
                            acc.add(&fact, edge);
                        }
                    }
                }
            }
            TemplateClass::Ex { x, role, y } => {
                for (c, r, d) in &closure.existentials {
                    let mut bindings = Bindings::new();
                    if bind(x.as_str(), c.as_str(), &mut bindings)
                        && bind(role.as_str(), r.as_str(), &mut bindings)
                        && bind(y.as_str(), d.as_str(), &mut bindings)
                    {
                        if let Some(edge) = pattern.emit(&bindings) {
                            let fact = Axiom::subclass(
                                ClassExpression::Named(c.clone()),
                                ClassExpression::Exists(
                                    r.clone(),
                                    Box::new(ClassExpression::Named(d.clone())),
                                ),
                            );
                            acc.add(&fact, edge);
                        }
                    }
                }
                if conflate_quantifiers {
                    // The non-injective variant also projects asserted
                    // universal restrictions onto the same edge shape.
                    for axiom in &ontology.axioms {
                        if let Axiom::SubClassOf {
                            sub: ClassExpression::Named(c),
                            sup: ClassExpression::Forall(r, filler),
                        } = axiom
                        {
                            if let ClassExpression::Named(d) = filler.as_ref() {
                                let mut bindings = Bindings::new();
                                if bind(x.as_str(), c.as_str(), &mut bindings)
                                    && bind(role.as_str(), r.as_str(), &mut bindings)
                                    && bind(y.as_str(), d.as_str(), &mut bindings)
                                {
                                    if let Some(edge) = pattern.emit(&bindings) {
                                        acc.add(axiom, edge);
                                    }
                                }
                            }
                        }
                    }
                }
            }
            TemplateClass::Disjoint { x, y } => {
                for axiom in &ontology.axioms {
                    if let Some((a, b)) = disjoint_operands(axiom) {
                        let mut bindings = Bindings::new();
                        if bind(x.as_str(), a.as_str(), &mut bindings)
                            && bind(y.as_str(), b.as_str(), &mut bindings)
                        {
                            if let Some(edge) = pattern.emit(&bindings) {
                                acc.add(axiom, edge);
                            }
                        }
                    }
                }
            }
            TemplateClass::General => {
                for axiom in &ontology.axioms {
                    for view in Ontology::expanded_views(axiom) {
                        if let Some(bindings) =
                            unify_axiom(&pattern.template, &view, conflate_quantifiers)
                        {
                            if let Some(edge) = pattern.emit(&bindings) {
                                acc.add(axiom, edge);
                            }
                        }
                    }
                }
            }
        }
    }

    let skipped = ontology
        .axioms
        .iter()
        .filter(|a| {
            syntactic_axiom_edges(a, patterns, conflate_quantifiers).is_empty()
        })
        .cloned()
        .collect();
    Ok(acc.finish(skipped))
}

/// Syntactic (query-time) projection of one axiom against the patterns.
pub(crate) fn syntactic_axiom_edges(
    axiom: &Axiom,
    patterns: &[RelationalPattern],
    conflate_quantifiers: bool,
) -> BTreeSet<Edge> {
    let mut edges = BTreeSet::new();
    for pattern in patterns {
        for view in Ontology::expanded_views(axiom) {
            // Disjointness templates accept both asserted forms.
            if let TemplateClass::Disjoint { x, y } = classify(&pattern.template) {
                if let Some((a, b)) = disjoint_operands(&view) {
                    let mut bindings = Bindings::new();
                    if bind(x.as_str(), a.as_str(), &mut bindings)
                        && bind(y.as_str(), b.as_str(), &mut bindings)
                    {
                        if let Some(edge) = pattern.emit(&bindings) {
                            edges.insert(edge);
                        }
                    }
                    continue;
                }
            }
            if let Some(bindings) = unify_axiom(&pattern.template, &view, conflate_quantifiers) {
                if let Some(edge) = pattern.emit(&bindings) {
                    edges.insert(edge);
                }
            }
        }
    }
    edges
}

fn disjoint_operands(axiom: &Axiom) -> Option<(&ClassId, &ClassId)> {
    match axiom {
        Axiom::DisjointClasses(ClassExpression::Named(a), ClassExpression::Named(b)) => {
            Some((a, b))
        }
        Axiom::SubClassOf { sub: ClassExpression::And(members), sup: ClassExpression::Bottom } => {
            match members.as_slice() {
                [ClassExpression::Named(a), ClassExpression::Named(b)] => Some((a, b)),
                _ => None,
            }
        }
        _ => None,
    }
}

fn unify_axiom(template: &Axiom, axiom: &Axiom, conflate: bool) -> Option<Bindings> {
    let mut bindings = Bindings::new();
    if unify_axiom_into(template, axiom, conflate, &mut bindings) {
        Some(bindings)
    } else {
        None
    }
}

fn unify_axiom_into(
    template: &Axiom,
    axiom: &Axiom,
    conflate: bool,
    bindings: &mut Bindings,
) -> bool {
    match (template, axiom) {
        (Axiom::SubClassOf { sub: ts, sup: tp }, Axiom::SubClassOf { sub: s, sup: p }) => {
            unify_expr(ts, s, conflate, bindings) && unify_expr(tp, p, conflate, bindings)
        }
        (Axiom::DisjointClasses(ta, tb), Axiom::DisjointClasses(a, b)) => {
            unify_expr(ta, a, conflate, bindings) && unify_expr(tb, b, conflate, bindings)
        }
        (Axiom::SubRoleOf { sub: ts, sup: tp }, Axiom::SubRoleOf { sub: s, sup: p }) => {
            bind(ts.as_str(), s.as_str(), bindings) && bind(tp.as_str(), p.as_str(), bindings)
        }
        (Axiom::InverseRoles(ta, tb), Axiom::InverseRoles(a, b)) => {
            bind(ta.as_str(), a.as_str(), bindings) && bind(tb.as_str(), b.as_str(), bindings)
        }
        (Axiom::RoleChain { chain: tc, sup: ts }, Axiom::RoleChain { chain, sup }) => {
            tc.len() == chain.len()
                && tc
                    .iter()
                    .zip(chain)
                    .all(|(t, r)| bind(t.as_str(), r.as_str(), bindings))
                && bind(ts.as_str(), sup.as_str(), bindings)
        }
        (Axiom::Domain(tr, tc), Axiom::Domain(r, c))
        | (Axiom::Range(tr, tc), Axiom::Range(r, c)) => {
            bind(tr.as_str(), r.as_str(), bindings) && unify_expr(tc, c, conflate, bindings)
        }
        (Axiom::ClassAssertion(tc, ti), Axiom::ClassAssertion(c, i)) => {
            unify_expr(tc, c, conflate, bindings) && bind(ti.as_str(), i.as_str(), bindings)
        }
        (Axiom::RoleAssertion(tr, ta, tb), Axiom::RoleAssertion(r, a, b)) => {
            bind(tr.as_str(), r.as_str(), bindings)
                && bind(ta.as_str(), a.as_str(), bindings)
                && bind(tb.as_str(), b.as_str(), bindings)
        }
        _ => false,
    }
}

fn unify_expr(
    template: &ClassExpression,
    expr: &ClassExpression,
    conflate: bool,
    bindings: &mut Bindings,
) -> bool {
    match (template, expr) {
        (ClassExpression::Named(t), ClassExpression::Named(e)) => {
            bind(t.as_str(), e.as_str(), bindings)
        }
        (ClassExpression::Top, ClassExpression::Top) => true,
        (ClassExpression::Bottom, ClassExpression::Bottom) => true,
        (ClassExpression::Not(t), ClassExpression::Not(e)) => {
            unify_expr(t, e, conflate, bindings)
        }
        (ClassExpression::And(ts), ClassExpression::And(es))
        | (ClassExpression::Or(ts), ClassExpression::Or(es)) => {
            ts.len() == es.len()
                && ts.iter().zip(es).all(|(t, e)| unify_expr(t, e, conflate, bindings))
        }
        (ClassExpression::Exists(tr, tf), ClassExpression::Exists(r, f))
        | (ClassExpression::Forall(tr, tf), ClassExpression::Forall(r, f)) => {
            bind(tr.as_str(), r.as_str(), bindings) && unify_expr(tf, f, conflate, bindings)
        }
        (ClassExpression::Exists(tr, tf), ClassExpression::Forall(r, f))
        | (ClassExpression::Forall(tr, tf), ClassExpression::Exists(r, f))
            if conflate =>
        {
            bind(tr.as_str(), r.as_str(), bindings) && unify_expr(tf, f, conflate, bindings)
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::parse_ontology;
    use crate::reasoner::{normalize, saturate};

    fn run(text: &str, conflate: bool) -> ProjectionResult {
        let o = parse_ontology(text).unwrap();
        let closure = saturate(&normalize(&o));
        project_patterns(&o, &closure, &default_patterns(), conflate).unwrap()
    }

    #[test]
    fn closure_edges_are_included() {
        let pr = run("SubClassOf(:A :B)\nSubClassOf(:B :C)", false);
        let got = pr.edge_set();
        assert!(got.contains(&Edge::new(":A", "subclassof", ":B")));
        assert!(got.contains(&Edge::new(":B", "subclassof", ":C")));
        assert!(got.contains(&Edge::new(":A", "subclassof", ":C")));
    }

    #[test]
    fn named_definition_is_queried() {
        let pr = run(
            "SubClassOf(:A ObjectSomeValuesFrom(:R ObjectIntersectionOf(:B :C)))\n\
             EquivalentClasses(:X1 ObjectIntersectionOf(:B :C))",
            false,
        );
        assert!(pr.edge_set().contains(&Edge::new(":A", ":R", ":X1")));
    }

    #[test]
    fn disjointness_pattern_matches_both_forms() {
        let pr = run("DisjointClasses(:C :D)", false);
        assert!(pr.edge_set().contains(&Edge::new(":C", "disjointwith", ":D")));
        let pr = run("SubClassOf(ObjectIntersectionOf(:C :D) owl:Nothing)", false);
        assert!(pr.edge_set().contains(&Edge::new(":C", "disjointwith", ":D")));
    }

    #[test]
    fn forall_is_skipped_unless_conflated() {
        let text = "SubClassOf(:A ObjectAllValuesFrom(:R :B))";
        let strict = run(text, false);
        assert!(strict.edge_set().is_empty());
        assert_eq!(strict.skipped.len(), 1);
        let conflated = run(text, true);
        assert!(conflated.edge_set().contains(&Edge::new(":A", ":R", ":B")));
        assert!(conflated.skipped.is_empty());
    }

    #[test]
    fn unbound_output_variable_is_rejected() {
        let err = parse_pattern_line("SubClassOf(?X ?Y) => (?X ?R ?Y)").unwrap_err();
        assert!(matches!(err, ProjectionError::UnboundOutputVariable(v) if v == "?R"));
    }

    #[test]
    fn constant_role_pattern_file() {
        let patterns = parse_pattern_file(
            "# part-of edges only\nSubClassOf(?X ObjectSomeValuesFrom(:partOf ?Y)) => (?X :partOf ?Y)\n",
        )
        .unwrap();
        let o = parse_ontology(
            "SubClassOf(:A ObjectSomeValuesFrom(:partOf :B))\n\
             SubClassOf(:A ObjectSomeValuesFrom(:otherRole :C))",
        )
        .unwrap();
        let closure = saturate(&normalize(&o));
        let pr = project_patterns(&o, &closure, &patterns, false).unwrap();
        assert_eq!(pr.edges, vec![Edge::new(":A", ":partOf", ":B")]);
        assert_eq!(pr.skipped.len(), 1);
    }
}
