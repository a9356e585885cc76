//! The two-stage HSPG loop and the proximal baselines it is compared with.
//!
//! HSPG runs proximal stochastic gradient steps until its switch rule fires
//! and half-space steps afterwards. It never switches back. Prox-SG, RDA and
//! Prox-SVRG are provided as standalone solvers sharing the same
//! configuration, batch schedule and trace format.

mod config;
mod pgd;
mod rda;
mod runner;
mod steps;
mod svrg;
mod tuning;

pub use config::{step_from_lipschitz, SolverConfig, SolverKind, StepSchedule, SwitchRule};
pub use pgd::{proximal_gradient_descent, PgdOutcome};
pub use rda::RdaState;
pub use runner::{run, run_observed, SolverState};
pub use steps::{half_space_step, objective, prox_sg_step, Objective};
pub use svrg::prox_svrg_run;
pub use tuning::{stationarity_switch_test, tune_epsilon, EpsilonSearch, EpsilonTuning};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Initialization,
    GroupSparsity,
}

impl Stage {
    pub fn as_str(self) -> &'static str {
        match self {
            Stage::Initialization => "initialization",
            Stage::GroupSparsity => "group_sparsity",
        }
    }
}
