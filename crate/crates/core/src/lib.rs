pub mod classical;
pub mod cli;
pub mod duality;
pub mod error;
pub mod qtorus;
pub mod skein;
pub mod lamination;
pub mod surface;

pub use error::{Error, Result};
