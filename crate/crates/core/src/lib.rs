pub mod character;
pub mod error;
pub mod graph;
pub mod lattice;
pub mod poly;
pub mod quantum;
pub mod random;
pub mod seed;
pub mod suite;
pub mod tropical;

pub use error::{Error, Result};
