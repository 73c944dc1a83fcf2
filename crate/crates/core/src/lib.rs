//! Random graphs obtained by thresholding edge weights drawn from
//! logconcave distributions on the positive orthant.
//!
//! The crate is generic over the floating point type through [`Scalar`];
//! the `*64` aliases below fix it to `f64`, which is what the experiment
//! harness and the command line use.

// `!(x >= 0)` style checks are used so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod atsp;
pub mod error;
pub mod experiments;
pub mod graph;
pub mod model;
pub mod oracle;
pub mod quadrature;
pub mod sampling;
pub mod scalar;
pub mod stats;

pub use atsp::{CostMatrix, Tour};
pub use error::{Error, Result};
pub use model::{threshold, DecomposableWeights, EdgeSpace, SimplexModel, ThresholdGraph, WeightVector};
pub use sampling::{DensityModel, OrthantBall, SeededRng};
pub use scalar::Scalar;

pub type SimplexModel64 = SimplexModel<f64>;
pub type DecomposableWeights64 = DecomposableWeights<f64>;
pub type WeightVector64 = WeightVector<f64>;
pub type DensityModel64 = DensityModel<f64>;
pub type CostMatrix64 = CostMatrix<f64>;
