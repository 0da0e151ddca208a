pub mod algebra;
pub mod builtin;
pub mod duality;
pub mod error;
pub mod group;
pub mod linalg;
mod pairs;
pub mod resolution;

pub use error::{Error, Result};
