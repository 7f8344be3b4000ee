//! The four ontology-to-graph projection methods, query-time projection of
//! single axioms, projection inversion, and formal-property analysis.

mod analyze;
mod invert;
mod owl2vecstar;
mod patterns;
mod rdf;
mod taxonomy;

pub use analyze::{analyze_properties, edge_stats, shared_edges, EdgeStats, PropertyReport};
pub use invert::invert_projection;
pub use owl2vecstar::project_owl2vecstar;
pub use patterns::{
    default_patterns, parse_pattern_file, parse_pattern_line, project_patterns, PatternTerm,
    RelationalPattern,
};
pub use rdf::project_rdf;
pub use taxonomy::project_taxonomy;

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use thiserror::Error;

use crate::ontology::{Axiom, Ontology};
use crate::reasoner::ClosureFacts;

/// Reserved edge labels. User roles are colon-prefixed tokens, so bare
/// names cannot clash with them.
pub mod labels {
    pub const SUBCLASSOF: &str = "subclassof";
    pub const SUBCLASSOF_INV: &str = "subclassof⁻¹";
    pub const TYPE: &str = "type";
    pub const TYPE_INV: &str = "type⁻¹";
    pub const DISJOINTWITH: &str = "disjointwith";
    pub const OBJECTPROPERTY: &str = "objectproperty";
    pub const SOMEVALUESFROM: &str = "somevaluesfrom";
    pub const ALLVALUESFROM: &str = "allvaluesfrom";
    pub const INTERSECTION: &str = "intersection";
    pub const UNION: &str = "union";
    pub const FIRST: &str = "first";
    pub const REST: &str = "rest";
    pub const COMPLEMENT: &str = "complement";
    pub const SUBPROPERTYOF: &str = "subpropertyof";
    pub const INVERSEOF: &str = "inverseof";
    pub const DOMAIN: &str = "domain";
    pub const RANGE: &str = "range";
    pub const PROPERTYCHAIN: &str = "propertychain";
}

/// Node identifiers for ⊤ and ⊥ in rendered graphs.
pub const TOP_NODE: &str = "owl:Thing";
pub const BOTTOM_NODE: &str = "owl:Nothing";

/// A labeled edge at the identifier level.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub head: String,
    pub label: String,
    pub tail: String,
}

impl Edge {
    pub fn new(
        head: impl Into<String>,
        label: impl Into<String>,
        tail: impl Into<String>,
    ) -> Self {
        Edge { head: head.into(), label: label.into(), tail: tail.into() }
    }

    pub fn is_blank_node(id: &str) -> bool {
        id.starts_with("_:")
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.head, self.label, self.tail)
    }
}

/// Which projection a result or error refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodKind {
    Taxonomy,
    Owl2VecStar,
    Rdf,
    Patterns,
}

impl fmt::Display for MethodKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            MethodKind::Taxonomy => "taxonomy",
            MethodKind::Owl2VecStar => "owl2vecstar",
            MethodKind::Rdf => "rdf",
            MethodKind::Patterns => "patterns",
        };
        f.write_str(name)
    }
}

/// A projection method with its options.
#[derive(Debug, Clone)]
pub enum Method {
    Taxonomy,
    Owl2VecStar {
        /// Emit `subclassof⁻¹` / `type⁻¹` mirror edges (on by default).
        inverse_edges: bool,
    },
    Rdf,
    Patterns {
        patterns: Vec<RelationalPattern>,
        /// Treat ∃ and ∀ as the same quantifier when matching, which makes
        /// the method non-injective.
        conflate_quantifiers: bool,
    },
}

impl Method {
    pub fn owl2vecstar() -> Self {
        Method::Owl2VecStar { inverse_edges: true }
    }

    pub fn patterns_default() -> Self {
        Method::Patterns { patterns: default_patterns(), conflate_quantifiers: false }
    }

    pub fn kind(&self) -> MethodKind {
        match self {
            Method::Taxonomy => MethodKind::Taxonomy,
            Method::Owl2VecStar { .. } => MethodKind::Owl2VecStar,
            Method::Rdf => MethodKind::Rdf,
            Method::Patterns { .. } => MethodKind::Patterns,
        }
    }
}

#[derive(Debug, Clone, Error)]
pub enum ProjectionError {
    #[error("axiom is outside the domain of the {method} projection: {axiom}")]
    Unprojectable { method: MethodKind, axiom: String },
    #[error("the patterns projection needs a deductive closure")]
    MissingClosure,
    #[error("pattern output variable `{0}` does not occur in the template")]
    UnboundOutputVariable(String),
    #[error("invalid pattern: {0}")]
    InvalidPattern(String),
    #[error("edge set is not a projectable {method} shape: {reason}")]
    UnrecognizedEdges { method: MethodKind, reason: String },
}

/// Result of projecting a whole ontology: deduplicated edges in a
/// deterministic emission order, the per-axiom edge attribution, and the
/// axioms the method could not use.
#[derive(Debug, Clone)]
pub struct ProjectionResult {
    pub method: MethodKind,
    pub edges: Vec<Edge>,
    pub per_axiom: BTreeMap<Axiom, BTreeSet<Edge>>,
    pub skipped: Vec<Axiom>,
}

impl ProjectionResult {
    pub fn edge_set(&self) -> BTreeSet<Edge> {
        self.edges.iter().cloned().collect()
    }

    /// Distinct blank nodes over all edges.
    pub fn blank_node_count(&self) -> usize {
        let mut blanks = BTreeSet::new();
        for edge in &self.edges {
            if Edge::is_blank_node(&edge.head) {
                blanks.insert(edge.head.as_str());
            }
            if Edge::is_blank_node(&edge.tail) {
                blanks.insert(edge.tail.as_str());
            }
        }
        blanks.len()
    }
}

/// Accumulates edges during a batch projection, preserving first-emission
/// order for reproducible vocabularies.
pub(crate) struct EdgeAccumulator {
    method: MethodKind,
    edges: Vec<Edge>,
    seen: HashSet<Edge>,
    per_axiom: BTreeMap<Axiom, BTreeSet<Edge>>,
}

impl EdgeAccumulator {
    pub(crate) fn new(method: MethodKind) -> Self {
        EdgeAccumulator {
            method,
            edges: Vec::new(),
            seen: HashSet::new(),
            per_axiom: BTreeMap::new(),
        }
    }

    pub(crate) fn add(&mut self, axiom: &Axiom, edge: Edge) -> bool {
        let new_edge = self.seen.insert(edge.clone());
        if new_edge {
            self.edges.push(edge.clone());
        }
        self.per_axiom.entry(axiom.clone()).or_default().insert(edge);
        new_edge
    }

    pub(crate) fn contributed(&self, axiom: &Axiom) -> bool {
        self.per_axiom.contains_key(axiom)
    }

    pub(crate) fn edges_with_label(&self, label: &str) -> Vec<Edge> {
        self.edges.iter().filter(|e| e.label == label).cloned().collect()
    }

    pub(crate) fn finish(self, skipped: Vec<Axiom>) -> ProjectionResult {
        ProjectionResult {
            method: self.method,
            edges: self.edges,
            per_axiom: self.per_axiom,
            skipped,
        }
    }
}

/// Batch projection dispatch. The closure is only consulted by the
/// patterns method.
pub fn project(
    method: &Method,
    ontology: &Ontology,
    closure: Option<&ClosureFacts>,
) -> Result<ProjectionResult, ProjectionError> {
    match method {
        Method::Taxonomy => Ok(project_taxonomy(ontology)),
        Method::Owl2VecStar { inverse_edges } => {
            Ok(project_owl2vecstar(ontology, *inverse_edges))
        }
        Method::Rdf => Ok(project_rdf(ontology)),
        Method::Patterns { patterns, conflate_quantifiers } => {
            let closure = closure.ok_or(ProjectionError::MissingClosure)?;
            patterns::project_patterns(ontology, closure, patterns, *conflate_quantifiers)
        }
    }
}

/// Projects a single query axiom. Context-dependent rules (subroles,
/// inverses, chains, domain/range pairing) need the rest of the ontology
/// and never fire here; axioms that only those rules cover are
/// unprojectable as queries.
pub fn project_axiom(method: &Method, axiom: &Axiom) -> Result<BTreeSet<Edge>, ProjectionError> {
    let edges = match method {
        Method::Taxonomy => taxonomy::taxonomy_axiom_edges(axiom),
        Method::Owl2VecStar { inverse_edges } => {
            owl2vecstar::context_free_edges(axiom, *inverse_edges)
        }
        Method::Rdf => return Ok(rdf::render_query_axiom(axiom)),
        Method::Patterns { patterns, conflate_quantifiers } => {
            patterns::syntactic_axiom_edges(axiom, patterns, *conflate_quantifiers)
        }
    };
    if edges.is_empty() {
        Err(ProjectionError::Unprojectable {
            method: method.kind(),
            axiom: crate::ontology::serialize_axiom(axiom),
        })
    } else {
        Ok(edges)
    }
}

/// Renames blank nodes to positional names (`_:n0`, `_:n1`, ...) so edge
/// sets from batch (`_:ax{i}_n{j}`) and query (`_:q_n{j}`) projections of
/// the same axiom can be compared. Both renderings allocate blanks in the
/// same structural order, so the trailing position is the canonical name.
pub fn canonicalize_blank_nodes(edges: &BTreeSet<Edge>) -> BTreeSet<Edge> {
    fn rename(id: &str) -> String {
        if !Edge::is_blank_node(id) {
            return id.to_owned();
        }
        match id.rfind("_n") {
            Some(at) => format!("_:n{}", &id[at + 2..]),
            None => id.to_owned(),
        }
    }
    edges
        .iter()
        .map(|edge| Edge {
            head: rename(&edge.head),
            label: edge.label.clone(),
            tail: rename(&edge.tail),
        })
        .collect()
}
