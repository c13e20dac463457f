pub mod catalog;
pub mod config;
pub mod cubic;
pub mod error;
pub mod field;
pub mod intlin;
pub mod lattice;
pub mod orbit;
pub mod poly;
pub mod residue;
pub mod weyl;

pub use error::{Error, Result};
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
