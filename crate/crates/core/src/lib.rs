//! Fractional Lévy processes driven by compound Poisson noise, built with the
//! Molchan-Golosov and Mandelbrot-Van Ness kernels.

#![allow(
    clippy::excessive_precision,
    clippy::neg_cmp_op_on_partial_ord,
    clippy::too_many_arguments
)]

pub mod analyze;
pub mod error;
pub mod kernels;
pub mod levy;
pub mod quad;
pub mod rng;
pub mod simulate;
pub mod specfun;
pub mod wiener;

pub use error::{Error, Result};
