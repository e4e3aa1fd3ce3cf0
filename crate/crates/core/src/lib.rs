#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod acceptance;
pub mod algebra;
pub mod classifier;
pub mod cli;
pub mod curve;
pub mod error;
pub mod frame;
pub mod jet;
pub mod scalar;
pub mod surface;

pub use error::{Error, Result};
