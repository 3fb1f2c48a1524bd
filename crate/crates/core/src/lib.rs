pub mod abelian;
pub mod classes;
pub mod classifier;
pub mod cli;
pub mod dyadic;
pub mod error;
pub mod fixtures;
pub mod forms;
pub mod gaussian;
pub mod group;
pub mod scan;
pub mod symbols;
pub mod unit_index;
pub mod units;

pub use error::{Error, Result};
