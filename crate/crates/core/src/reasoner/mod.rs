//! Desk-scale EL saturation: normalization into EL normal forms and a
//! worklist fixpoint over the standard completion rules.
//!
//! This stands in for a full OWL 2 EL reasoner. It derives entailed
//! `C ⊑ D` and `C ⊑ ∃R.D` facts over the named classes of the input
//! signature, which is the fragment the closure-based test sets and the
//! pattern projection consume.

mod normalize;
mod saturate;

pub use normalize::{normalize, NormalizedAxiomSet, RuleDump};
pub use saturate::{closure_diff, saturate, ClosureFacts};

/// Identifier used for ⊥ when it appears as the superclass of an output
/// subsumption.
pub const BOTTOM_ID: &str = "owl:Nothing";

/// Interned class index. `TOP` and `BOT` are fixed; named classes follow,
/// then auxiliary names introduced by normalization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct Cls(pub u32);

/// Interned role index; auxiliary roles come from chain binarization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct Rol(pub u32);

pub(crate) const TOP: Cls = Cls(0);
pub(crate) const BOT: Cls = Cls(1);
