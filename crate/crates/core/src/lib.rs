//! Quantization of symmetric integral Poisson-CGL extensions over `Q[q, q^-1]`.

#![allow(clippy::needless_range_loop)]

pub mod commutative;
pub mod error;
pub mod exec;
pub mod fixtures;
pub mod ore;
pub mod pipeline;
pub mod poisson;
pub mod quantizer;
pub mod quantum;
pub mod report;
pub mod scalars;
pub mod terms;
pub mod text;
pub mod verifier;

pub use error::{Error, Result};
