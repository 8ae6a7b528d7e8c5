//! Generator-based (non-Diophantine) arithmetic and calculus.

// `!(a > b)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod arithmetic;
pub mod calculus;
pub mod cli;
pub mod cantor;
pub mod error;
pub mod functions;
pub mod generators;
pub mod physics;
pub mod stats;

pub use arithmetic::{Generator, Interval, Scalar};
pub use error::{Error, Result};
pub use generators::GeneratorSpec;
