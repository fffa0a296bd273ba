//! Explicit Radon measure solutions for hypersonic flow past slender 2-D wedges
//! and 3-D axisymmetric cones, with numerical certificates: weak-form residuals,
//! Radon-Nikodym constraints, similarity-law convergence and the eigenstructure
//! of the hypersonic small-disturbance system.

// NaN-propagating comparisons like `!(x > 0.0)` are deliberate throughout
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::too_many_arguments, clippy::type_complexity)]

pub mod analysis;
pub mod cli;
pub mod closed_forms;
pub mod error;
pub mod flow_state;
pub mod geometry;
pub mod measure;
pub mod output;
pub mod quadrature;
pub mod verifier;

pub use error::{Error, Result};
