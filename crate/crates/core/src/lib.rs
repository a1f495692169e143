//! A checking kernel for cyclic proofs in first-order arithmetic.
//!
//! The crate parses terms, formulas and proof trees; checks single inference
//! steps of the one-sided calculus; validates annotated cyclic proofs for the
//! systems `Sn`, `SPi n` and `SSigma n`; converts between cyclic proofs and
//! finitely presented regular proofs; and extracts induction invariants
//! (certificates) from cyclic proofs whose root lies on a cycle.

pub mod annotation;
pub mod builders;
pub mod calculus;
pub mod checker;
pub mod gen;
pub mod semantics;
pub mod sexpr;
pub mod syntax;
pub mod transform;
pub mod uncycle;

pub use syntax::{Formula, Term, Var, VarSet};
