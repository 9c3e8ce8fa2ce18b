pub mod error;
pub mod experiment;
pub mod fock;
pub mod linalg;
pub mod lindblad;
pub mod model;
pub mod phase_space;
pub mod sensing;
pub mod units;
pub(crate) mod sparse;

pub use error::{Error, Result};
