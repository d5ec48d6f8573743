//! Exact ring of differential polynomials and the algebra of matrix
//! differential operators carrying the Poisson pencils.

pub mod evolution;
pub mod matop;
pub mod miura;
pub mod op;
pub mod poly;

pub use evolution::{frechet, lie_derivative, prolong_apply, EvolutionaryField};
pub use matop::MatDiffOp;
pub use miura::{miura_apply, MiuraApplied, MiuraMap};
pub use op::DiffOp;
pub use poly::{parse_upoly, DiffPoly, Monomial};
