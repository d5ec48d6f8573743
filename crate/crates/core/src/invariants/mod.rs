//! Pencil invariants: symbols, characteristic polynomials, lambda-root
//! expansions, canonical coordinates, central invariants, and the
//! eigenvalue-scaling checks.

pub mod central;
pub mod charpoly;
pub mod eigenscale;
pub mod hydro;
pub mod roots;
pub mod symbol;

pub use central::{
    canonical_data, central_invariants, ds_predicted_ci, prediction_gap, CentralInvariantReport,
};
pub use charpoly::{char_poly, charpoly_ratio, lambda_degree_check, CharPoly, CharpolyRatio};
pub use eigenscale::{eigen_scaling_check, EigenScaleReport};
pub use hydro::{hydro_limit, HydroData};
pub use roots::{lambda_roots, NumValue, RootExpansion, RootSeries};
pub use symbol::{symbol_matrix, SymbolMatrix};
