//! Flow-record intrusion detection.
//!
//! Loads labelled network-flow CSVs, one-hot encodes the categorical
//! columns, splits them with a seeded shuffle, trains a logistic regression
//! and a random forest, evaluates both and renders SVG figures. Every step
//! is deterministic for a given seed.

pub mod dataframe;
pub mod error;
pub mod forest;
pub mod linear;
pub mod metrics;
pub mod pipeline;
pub mod preprocess;
pub mod report;
pub mod rng;

pub use error::{Error, Result};
