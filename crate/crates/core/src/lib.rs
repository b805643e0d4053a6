//! Reduced Koopman models for nonlinear model predictive control.
//!
//! The crate covers the full workflow: simulate an input-affine plant,
//! sample trajectories under a stabilizing base layer, fit a Wiener-type
//! Koopman model (encoder MLP, linear latent dynamics, decoder MLP) by
//! backpropagation through the unrolled predictions, and close the loop
//! with an NMPC whose derivatives exploit the fixed block structure of the
//! model. A full-order single-shooting NMPC serves as the CPU baseline.

pub mod dataset;
pub mod error;
pub mod plant;
pub mod util;

pub use error::{Error, Result};
