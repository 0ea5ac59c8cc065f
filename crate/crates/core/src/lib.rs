pub mod cli;
pub mod crossed;
pub mod error;
pub mod format;
pub mod gaussian;
pub mod hecke;
pub mod lattice;
pub mod oracle;
pub mod pair;
pub mod quad;
pub mod rational;
pub mod selftest;

pub use error::{Error, Result};
