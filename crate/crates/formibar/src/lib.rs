//! Formigrams and zigzag clustering barcodes for dynamic graphs and dynamic
//! metric spaces, with smoothing, Reeb graphs and interleaving distances.

pub mod base;
pub mod cli;
pub mod clustering;
pub mod dms;
mod error;
pub mod fixtures;
pub mod metrics;
pub mod reeb;
pub mod smoothing;
pub mod zigzag;

pub use base::*;
pub use error::{Error, Result};
