//! Compass navigations on random point sets and their deterministic limits.

// `!(x > 0.0)` is how parameter checks reject NaN along with non-positive values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod geometry;
pub mod harness;
pub mod limits;
pub mod navigation;
pub mod point_process;
pub mod svg;

pub use error::{Error, Result};
