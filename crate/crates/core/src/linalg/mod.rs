//! Exact integer linear algebra.

mod hermite;
mod homology;
mod matrix;
mod snf;
mod sparse;

pub use hermite::hermite_basis;
pub use homology::{homology_of_pair, FGAbelianGroup};
pub use matrix::IntegerMatrix;
pub use snf::{smith_normal_form, solve_integer_linear, SmithForm};
pub use sparse::SparseSystem;
