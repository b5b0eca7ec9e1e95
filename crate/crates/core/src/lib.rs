//! Axisymmetric beam-pattern design in `D >= 2` dimensions: ultraspherical
//! polynomials, order-weight designs, pattern metrics and t-design checks.

// Index loops mirror the matrix formulas; `!(x > 0.0)` deliberately rejects NaN.
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
mod dd;
pub mod designs;
pub mod error;
pub mod linalg;
pub mod metrics;
pub mod quadrature;
pub mod sampling;
pub mod special;

pub use error::{Error, Result};
