//! Numeric support: high-precision dyadic floats and seeded rational
//! sampling.

pub mod bigfloat;
pub mod polyroots;
pub mod sample;

pub use bigfloat::{BigFloat, DEFAULT_PREC};
pub use sample::PointSampler;
