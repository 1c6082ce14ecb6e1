//! Square-class arithmetic, norm-group lattices, a case-splitting
//! derivation engine over the sum rule, and a 2-adic oracle that checks it.

pub mod demushkin;
pub mod derivation;
pub mod dyadic;
pub mod error;
pub mod normlattice;
pub mod replay;
pub mod scenario;
pub mod squareclass;

pub use derivation::{Expr, KnowledgeBase, Obligation, ProofStatus, ProofTrace, Scalar};
pub use dyadic::Dyadic;
pub use error::{ClassError, DerivationError, DyadicError, ParseError, ReplayError};
pub use normlattice::{lattice, verify_lattice, LatticeReport, LatticeScenario, NormLattice};
pub use scenario::Scenario;
pub use squareclass::{ClassGroup, ClassSet, SquareClass};
