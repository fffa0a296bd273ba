//! Similarity-law convergence and the small-disturbance eigenstructure.

pub mod convergence;
pub mod hsd;

pub use convergence::{
    converge, default_grid, fitted_rate, scaled_trace_a, scaled_trace_a3, strictly_decreasing, trace_defects,
    ConvergenceReport, ConvergenceSweep, Quantity, TraceDefects,
};
pub use hsd::{
    characteristic_field_class, char_poly, eigenvalues, eigenvectors, hsd_eigen, hsd_flux_jacobians, random_states,
    CharField, EigenReport, FieldClass, HsdState,
};
