//! Description Logic ontologies, graph projections, translational embeddings
//! and axiom ranking.
//!
//! The pipeline runs in stages: parse an ontology from a functional-syntax
//! subset, saturate its EL fragment into a deductive closure, project axioms
//! into a relational graph with one of four projection methods, embed the
//! graph with TransE or TransR, and finally score and rank candidate axioms
//! by inverting the projection.

pub mod eval;
pub mod graph;
pub mod kge;
pub mod ontology;
pub mod projection;
pub mod reasoner;
