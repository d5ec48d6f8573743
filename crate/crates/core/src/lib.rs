//! Exact symbolic computation for local Poisson pencils on loop algebras:
//! construction of Drinfeld-Sokolov-type pencils, bi-Hamiltonian (Dirac)
//! reduction on transversal gauge slices, and pencil invariants
//! (characteristic polynomials, lambda-root expansions, canonical
//! coordinates, central invariants, exactness checks).
//!
//! All core arithmetic is exact over arbitrary-precision rationals; the
//! only floating point lives in the optional numeric layers (root
//! expansions at irrational points, eigenvalue scaling checks).

pub mod algebra;
pub mod diffring;
pub mod error;
pub mod invariants;
pub mod io;
pub mod linalg;
pub mod numeric;
pub mod pencils;
pub mod rational;
pub mod reduction;

pub use error::Error;
pub use rational::Rat;
