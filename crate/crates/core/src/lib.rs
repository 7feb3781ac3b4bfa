//! Sampling, entropy, symmetry and compression for the SW(a, b) small-world
//! random graph model.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod codec;
pub mod entropy;
pub mod error;
pub mod experiment;
pub mod graph;
pub mod model;
pub mod moments;
pub mod rng;
pub mod series;
pub mod symmetry;

pub use error::{Error, Result};
pub use graph::LabelledGraph;
pub use model::ModelParams;
