pub mod builder;
pub mod cli;
pub mod envelope;
pub mod exits;
pub mod error;
pub mod lattice;
pub mod lines;
pub mod poly;
pub mod quadric;
pub mod subdivision;
pub mod surface;

pub use error::{Error, Result};
