pub mod connections;
pub mod error;
pub mod expr;
pub mod geodesy;
pub mod jets;
mod linalg;
pub mod sampling;
pub mod selftest;
pub mod symmetry;

pub use error::{Error, Result};
