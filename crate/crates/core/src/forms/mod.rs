//! Gaussian exponential forms: Q-function parameters, phase-space Gaussian
//! states and the block-structured process operator.

mod matrix;
mod process;
mod qform;
mod state;

pub use matrix::{HermitianMatrix, SymmetricMatrix};
pub use process::ProcessState;
pub use qform::{QForm, RealQuadratic, NORMALIZABLE_TOL};
pub use state::{GaussianState, PHYSICALITY_TOL, SINGULAR_COV_TOL};

pub(crate) use state::qform_from_moments;
