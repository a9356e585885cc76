use std::time::Instant;

use super::config::{SolverConfig, SolverKind, SwitchRule};
use super::rda::RdaState;
use super::steps::{half_space_step, objective, prox_sg_step};
use super::tuning::{stationarity_switch_test, tune_epsilon};
use super::{svrg, Stage};
use crate::data::BatchSchedule;
use crate::error::{Error, Result};
use crate::groups::GroupPartition;
use crate::metrics::{group_sparsity_ratio, EpochRecord, RunTrace, TraceMetadata};
use crate::problems::Problem;
use crate::regularizer::{gradient_mapping, Parameters};
use crate::scalar::Real;

/// Mutable state of one solver run.
#[derive(Debug, Clone)]
pub struct SolverState<F> {
    pub x: Parameters<F>,
    /// Global step counter.
    pub k: u64,
    /// Completed epochs.
    pub epoch: u64,
    pub stage: Stage,
    /// RDA only.
    pub rda: Option<RdaState<F>>,
    /// Prox-SVRG only: snapshot point and its full gradient.
    pub svrg_anchor: Option<(Parameters<F>, Parameters<F>)>,
}

impl<F: Real> SolverState<F> {
    pub fn new(x0: Parameters<F>) -> Self {
        Self { x: x0, k: 0, epoch: 0, stage: Stage::Initialization, rda: None, svrg_anchor: None }
    }
}

/// Runs the configured solver for `max_epochs` epochs from `x0`.
pub fn run<F: Real, P: Problem<F> + ?Sized>(
    config: &SolverConfig,
    problem: &P,
    partition: &GroupPartition,
    x0: &Parameters<F>,
) -> Result<(Parameters<F>, RunTrace)> {
    run_observed(config, problem, partition, x0, |_| {})
}

/// Like [`run`], calling `observer` with the state after every epoch.
pub fn run_observed<F: Real, P: Problem<F> + ?Sized>(
    config: &SolverConfig,
    problem: &P,
    partition: &GroupPartition,
    x0: &Parameters<F>,
    observer: impl FnMut(&SolverState<F>),
) -> Result<(Parameters<F>, RunTrace)> {
    config.validate()?;
    partition.check_dim(x0.dim())?;
    if problem.dim() != partition.dim() {
        return Err(Error::DimensionMismatch { expected: partition.dim(), actual: problem.dim() });
    }
    if problem.has_bias() && x0.bias.is_none() {
        return Err(Error::Config("problem fits a bias but the initial point has none".into()));
    }
    match config.kind {
        SolverKind::Hspg | SolverKind::ProxSg => run_two_stage(config, problem, partition, x0, observer),
        SolverKind::Rda => super::rda::run_rda(config, problem, partition, x0, observer),
        SolverKind::ProxSvrg => svrg::run_svrg(config, problem, partition, x0, observer),
    }
}

pub(super) fn new_trace(config: &SolverConfig) -> RunTrace {
    let mut metadata = TraceMetadata {
        solver_kind: config.kind.as_str().to_string(),
        seed: config.seed,
        lambda: config.lambda,
        config: serde_json::to_value(config).unwrap_or_default(),
        ..TraceMetadata::default()
    };
    metadata.notes.insert("sampling".into(), "shuffled-epoch (ChaCha8, stream = epoch)".into());
    RunTrace { metadata, records: Vec::new() }
}

/// Evaluates the full objective, sparsity and gradient-mapping norm at `x`.
pub(super) fn epoch_record<F: Real, P: Problem<F> + ?Sized>(
    problem: &P,
    partition: &GroupPartition,
    x: &Parameters<F>,
    lambda: F,
    eta: F,
    epoch: u64,
    stage: Stage,
    started: Instant,
) -> Result<EpochRecord> {
    let obj = objective(problem, partition, x, lambda)?;
    let (_, grad) = problem.full_value_grad(x)?;
    let xi = gradient_mapping(x, eta, &grad, partition, lambda)?;
    Ok(EpochRecord {
        epoch,
        stage,
        psi: obj.psi.as_f64(),
        f: obj.f.as_f64(),
        omega: obj.omega.as_f64(),
        group_sparsity: group_sparsity_ratio(x, partition),
        grad_map_norm: xi.norm().as_f64(),
        wall_seconds: started.elapsed().as_secs_f64(),
    })
}

/// True when some group that is zero in `before` is nonzero in `after`.
pub(super) fn support_shrank<F: Real>(partition: &GroupPartition, before: &[F], after: &[F]) -> bool {
    (0..partition.num_groups())
        .any(|g| partition.group_is_zero(before, g) && !partition.group_is_zero(after, g))
}

fn run_two_stage<F: Real, P: Problem<F> + ?Sized>(
    config: &SolverConfig,
    problem: &P,
    partition: &GroupPartition,
    x0: &Parameters<F>,
    mut observer: impl FnMut(&SolverState<F>),
) -> Result<(Parameters<F>, RunTrace)> {
    let started = Instant::now();
    let n_instances = problem.num_instances();
    let schedule = BatchSchedule::new(n_instances, config.batch_size, config.seed)?;
    let lambda = F::lit(config.lambda);
    let mut epsilon = F::lit(config.epsilon_or_zero());
    let switch = match config.kind {
        SolverKind::Hspg => config.switch.unwrap_or(SwitchRule::Never),
        _ => SwitchRule::Never,
    };

    let mut trace = new_trace(config);
    let mut state = SolverState::new(x0.clone());
    let mut stationary = false;
    let mut switch_epoch = 0u64;
    let mut switch_alpha = config.step.alpha_at(0);

    trace.records.push(epoch_record(
        problem,
        partition,
        &state.x,
        lambda,
        F::lit(config.step.alpha_at(0)),
        0,
        state.stage,
        started,
    )?);

    for epoch in 0..config.max_epochs as u64 {
        let mut alpha = config.step.alpha_at(epoch);
        let mut batch_size = schedule.batch_size;
        if config.theoretical_stage2 && state.stage == Stage::GroupSparsity {
            let t = epoch - switch_epoch + 1;
            alpha = switch_alpha / t as f64;
            batch_size = (schedule.batch_size * t as usize).min(n_instances);
        }
        let alpha_f = F::lit(alpha);
        let perm = schedule.permutation(epoch);
        for batch in perm.chunks(batch_size) {
            if state.stage == Stage::Initialization {
                let fire = match switch {
                    SwitchRule::AtStep(n_p) => state.k >= n_p,
                    SwitchRule::Stationarity { .. } => stationary,
                    SwitchRule::Never => false,
                };
                if fire {
                    state.stage = Stage::GroupSparsity;
                    trace.metadata.switch_step = Some(state.k);
                    switch_epoch = epoch + 1;
                    switch_alpha = alpha;
                    if let Some(search) = config.epsilon_tuning {
                        let tuning = tune_epsilon(problem, partition, config, &state, &search)?;
                        epsilon = F::lit(tuning.chosen);
                        trace.metadata.notes.insert("epsilon_tuned".into(), tuning.chosen.to_string());
                        trace.metadata.notes.insert(
                            "epsilon_trials".into(),
                            serde_json::to_string(&tuning.trials).unwrap_or_default(),
                        );
                    }
                }
            }
            let next = match state.stage {
                Stage::Initialization => prox_sg_step(&state.x, problem, partition, alpha_f, lambda, batch)?,
                Stage::GroupSparsity => {
                    let next = half_space_step(&state.x, problem, partition, alpha_f, lambda, epsilon, batch)?;
                    if support_shrank(partition, &state.x.x, &next.x) {
                        trace.metadata.support_violations += 1;
                    }
                    next
                }
            };
            state.x = next;
            state.k += 1;
        }
        state.epoch = epoch + 1;
        trace.records.push(epoch_record(
            problem,
            partition,
            &state.x,
            lambda,
            alpha_f,
            state.epoch,
            state.stage,
            started,
        )?);
        if let SwitchRule::Stationarity { window, rtol } = switch {
            if state.stage == Stage::Initialization {
                let history: Vec<f64> = trace.records.iter().map(|r| r.psi).collect();
                stationary = stationarity_switch_test(&history, window, rtol);
            }
        }
        observer(&state);
    }
    Ok((state.x, trace))
}
