//! Risk-utility evaluation of synthetic microdata. Synthetic files are scored
//! for disclosure risk (TCAP) and utility (ROC and confidence-interval
//! overlap), then placed on a reference curve built from random samples of
//! the original so each can be read as an equivalent sample fraction.

pub mod binning;
pub mod commands;
pub mod config;
pub mod data;
pub mod equivalence;
pub mod error;
pub mod evaluate;
pub mod fixture;
pub mod report;
pub mod risk;
pub mod rumap;
pub mod sampling;
pub mod seed;
pub mod synth;
pub mod tabulate;
pub mod utility;

pub use error::{Error, Result};
