pub mod cli;
pub mod complex;
pub mod cone;
mod dd;
pub mod error;
pub mod fan;
pub mod fixtures;
pub mod lattice;
pub mod matrix;
pub mod monoid;
pub mod reduction;

pub use error::{Error, Result};
