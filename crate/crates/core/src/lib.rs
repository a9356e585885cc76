//! Group-sparse regularized learning with the half-space stochastic projected
//! gradient method (HSPG) and three proximal baselines: Prox-SG, RDA and
//! Prox-SVRG.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`). The aliases
//! at the crate root fix the scalar to `f64`, which is what the command-line
//! harness uses.

pub mod cli;
pub mod data;
pub mod error;
pub mod groups;
pub mod metrics;
pub mod problems;
pub mod regularizer;
pub mod scalar;
pub mod solvers;
pub mod verify;

pub use error::{Error, Result};
pub use groups::{support_of, GroupPartition, GroupSupport};
pub use scalar::Real;
pub use solvers::{SolverConfig, SolverKind, Stage, StepSchedule, SwitchRule};

pub type Params = regularizer::Parameters<f64>;
pub type LeastSquares = problems::LeastSquaresProblem<f64>;
pub type Logistic = problems::LogisticProblem<f64>;
pub type Synthetic = data::SyntheticInstance<f64>;
pub type State = solvers::SolverState<f64>;
