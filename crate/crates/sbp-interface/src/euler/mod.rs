//! Compressible Euler equations on the coarse/fine two-block grid.

pub mod convergence;
pub mod solver;
pub mod vortex;

pub use convergence::{
    convergence_rate, refinement_study, refinement_study_with_fields, run_vortex, ConvergenceReport, ConvergenceRow,
};
pub use solver::{jacobian_split, EulerConfig, EulerSolver, EulerState, OrderSpec};
pub use vortex::{vortex_state, Primitive, VortexParams};
