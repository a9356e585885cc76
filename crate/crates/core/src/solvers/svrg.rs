use std::time::Instant;

use super::config::{SolverConfig, SolverKind};
use super::runner::{epoch_record, new_trace, SolverState};
use super::Stage;
use crate::data::{BatchCursor, BatchSchedule};
use crate::error::{Error, Result};
use crate::groups::GroupPartition;
use crate::metrics::RunTrace;
use crate::problems::Problem;
use crate::regularizer::{prox_group_l2_in_place, Parameters};
use crate::scalar::Real;

/// Runs Prox-SVRG; each outer loop counts as one epoch of the trace.
pub fn prox_svrg_run<F: Real, P: Problem<F> + ?Sized>(
    config: &SolverConfig,
    problem: &P,
    partition: &GroupPartition,
    x0: &Parameters<F>,
) -> Result<(Parameters<F>, RunTrace)> {
    if config.kind != SolverKind::ProxSvrg {
        return Err(Error::Config(format!("expected prox_svrg config, got {}", config.kind.as_str())));
    }
    super::run(config, problem, partition, x0)
}

pub(super) fn run_svrg<F: Real, P: Problem<F> + ?Sized>(
    config: &SolverConfig,
    problem: &P,
    partition: &GroupPartition,
    x0: &Parameters<F>,
    mut observer: impl FnMut(&SolverState<F>),
) -> Result<(Parameters<F>, RunTrace)> {
    let started = Instant::now();
    let schedule = BatchSchedule::new(problem.num_instances(), config.batch_size, config.seed)?;
    let inner = config.inner_loop_length.unwrap_or_else(|| schedule.steps_per_epoch());
    let lambda = F::lit(config.lambda);
    let mut cursor = BatchCursor::new(schedule);
    let mut trace = new_trace(config);
    trace.metadata.notes.insert("inner_loop_length".into(), inner.to_string());
    let mut state = SolverState::new(x0.clone());
    let alpha0 = F::lit(config.step.alpha_at(0));
    trace.records.push(epoch_record(problem, partition, &state.x, lambda, alpha0, 0, Stage::Initialization, started)?);

    for epoch in 0..config.max_epochs as u64 {
        let alpha = F::lit(config.step.alpha_at(epoch));
        let anchor = state.x.clone();
        let (_, mu) = problem.full_value_grad(&anchor)?;
        for _ in 0..inner {
            let batch = cursor.next_batch();
            let g_x = problem.batch_gradient(&state.x, batch)?;
            let g_anchor = problem.batch_gradient(&anchor, batch)?;
            let mut v = g_x;
            v.axpy(-F::one(), &g_anchor);
            v.axpy(F::one(), &mu);
            state.x.axpy(-alpha, &v);
            prox_group_l2_in_place(&mut state.x.x, partition, alpha * lambda);
            state.k += 1;
        }
        state.svrg_anchor = Some((anchor, mu));
        state.epoch = epoch + 1;
        trace.records.push(epoch_record(
            problem,
            partition,
            &state.x,
            lambda,
            alpha,
            state.epoch,
            Stage::Initialization,
            started,
        )?);
        observer(&state);
    }
    Ok((state.x, trace))
}
