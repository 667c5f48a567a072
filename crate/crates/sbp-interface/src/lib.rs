//! Summation-by-parts (SBP) finite-difference operators, SBP-preserving interpolation
//! across nonconforming 2:1 block interfaces, and the SAT penalty couplings that
//! make the resulting multi-block schemes energy stable.
//!
//! The pieces, from the bottom up:
//!
//! * [`sbp`]: diagonal-norm first-derivative operators of order 2, 4, 6 and 8.
//! * [`interp`]: tabulated interface interpolation pairs and their checks.
//! * [`builder`]: constructs new interpolation pairs from two norms.
//! * [`tensor`]: Kronecker lifting of 1-D operators to 2-D blocks.
//! * [`sat`]: interface, outer boundary and viscous penalty terms.
//! * [`spectrum`]: two-block model problems, eigenvalue spectra and energy matrices.
//! * [`euler`]: a two-block compressible Euler solver driven by an isentropic vortex.
//! * [`config`]: JSON run configurations used by the command line tool.

pub mod builder;
pub mod config;
pub mod euler;
pub mod interp;
pub mod linalg;
pub mod report;
pub mod sat;
pub mod sbp;
pub mod spectrum;
pub mod tensor;

pub use interp::{InterpKind, InterpolationPair};
pub use linalg::Matrix;
pub use report::VerificationReport;
pub use sbp::{DiagonalNorm, SbpOperator1D};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("unsupported order {0}")]
    UnsupportedOrder(usize),
    #[error("grid too small: {0}")]
    GridTooSmall(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("infeasible system: {0}")]
    Infeasible(String),
    #[error("eigensolver failure: {0}")]
    Eigen(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("unsupported boundary condition: {0}")]
    UnsupportedBc(String),
    #[error("nonphysical state: {0}")]
    Nonphysical(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
