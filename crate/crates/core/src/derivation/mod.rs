//! Symbolic derivation of square classes: expressions, knowledge bases,
//! sum-rule decompositions, fixpoint propagation, case splitting and
//! checkable proof traces.

pub mod constants;
pub mod engine;
pub mod expr;
pub mod kb;
pub mod parse;
pub mod scalar;
pub mod substitute;
pub mod trace;

pub use constants::scalar_class;
pub use engine::{
    decompose_step, propagate, prove, prove_obligations, prove_with_config, Obligation, PoolConfig, ProofResult,
    ProofStatus, ProveOutcome, Universe,
};
pub use expr::{verify_identity, Atom, Expr, Monomial, RatFunc};
pub use kb::KnowledgeBase;
pub use scalar::Scalar;
pub use substitute::substitute_transform;
pub use trace::{check_trace, ProofNode, ProofTrace, Step, TraceCheck};
