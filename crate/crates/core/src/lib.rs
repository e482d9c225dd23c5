//! Inferring development priorities from a budget-allocation game played on a
//! network of spillovers between policy issues.

pub mod analysis;
pub mod calibration;
pub mod country;
pub mod data;
pub mod error;
pub mod estimation;
pub mod model;
pub mod seeds;
pub mod stats;
pub mod synthetic;

pub use error::{Error, Result};
