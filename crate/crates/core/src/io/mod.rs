//! Serialization: JSON schemas ("ppl/1"), LaTeX emission, pencil files.

pub mod json;
pub mod latex;
pub mod pencil_file;

pub use json::{lie_to_json, matop_from_json, matop_to_json, op_to_json, poly_to_json};
pub use latex::{matop_latex, op_latex, poly_latex};
pub use pencil_file::{load_pencil_file, load_pencil_value};
