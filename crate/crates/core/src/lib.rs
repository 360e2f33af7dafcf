pub mod cli;
pub mod error;
pub mod generators;
pub mod porosity;
pub mod pretangent;
pub mod report;
pub mod scaleset;

pub use error::{Error, Result};
