use std::time::Instant;

use super::config::SolverConfig;
use super::runner::{epoch_record, new_trace, SolverState};
use super::Stage;
use crate::data::BatchSchedule;
use crate::error::{invalid, Result};
use crate::groups::GroupPartition;
use crate::metrics::RunTrace;
use crate::problems::Problem;
use crate::regularizer::Parameters;
use crate::scalar::{norm, Real};

/// Running average of the stochastic gradients seen so far.
#[derive(Debug, Clone, PartialEq)]
pub struct RdaState<F> {
    pub gbar: Parameters<F>,
    /// Number of gradients averaged into `gbar`.
    pub k: u64,
}

impl<F: Real> RdaState<F> {
    pub fn new(like: &Parameters<F>) -> Self {
        Self { gbar: like.zeros_like(), k: 0 }
    }

    /// Folds in one gradient and returns the next iterate
    /// `x_g = -(sqrt(k)/gamma) * max(0, 1 - lambda/||gbar_g||) * gbar_g`.
    /// The bias follows `b = -(sqrt(k)/gamma) * gbar_b`.
    pub fn step(&mut self, grad: &Parameters<F>, partition: &GroupPartition, lambda: F, gamma: F) -> Result<Parameters<F>> {
        if !(gamma > F::zero()) || !gamma.is_finite() {
            return Err(invalid(format!("gamma must be positive, got {gamma}")));
        }
        partition.check_dim(grad.dim())?;
        self.k += 1;
        let k = F::lit(self.k as f64);
        let keep = (k - F::one()) / k;
        self.gbar.scale(keep);
        self.gbar.axpy(F::one() / k, grad);

        let scale = -k.sqrt() / gamma;
        let mut next = self.gbar.clone();
        for range in partition.ranges() {
            let n = norm(&self.gbar.x[range.clone()]);
            let factor = if n <= lambda { F::zero() } else { F::one() - lambda / n };
            next.x[range].iter_mut().for_each(|v| *v = *v * factor * scale);
        }
        if let Some(b) = next.bias.as_mut() {
            *b = *b * scale;
        }
        Ok(next)
    }
}

pub(super) fn run_rda<F: Real, P: Problem<F> + ?Sized>(
    config: &SolverConfig,
    problem: &P,
    partition: &GroupPartition,
    x0: &Parameters<F>,
    mut observer: impl FnMut(&SolverState<F>),
) -> Result<(Parameters<F>, RunTrace)> {
    let started = Instant::now();
    let schedule = BatchSchedule::new(problem.num_instances(), config.batch_size, config.seed)?;
    let lambda = F::lit(config.lambda);
    let gamma = F::lit(config.gamma.unwrap_or(1.0));
    let mut trace = new_trace(config);
    trace.metadata.notes.insert(
        "rda_variant".into(),
        "x_{k+1} = -(sqrt(k)/gamma) * groupwise soft-threshold(gbar_k, lambda); bias -(sqrt(k)/gamma) * gbar_b".into(),
    );
    let mut state = SolverState::new(x0.clone());
    state.rda = Some(RdaState::new(x0));
    let eta = F::lit(config.step.alpha_at(0));
    trace.records.push(epoch_record(problem, partition, &state.x, lambda, eta, 0, Stage::Initialization, started)?);

    for epoch in 0..config.max_epochs as u64 {
        for batch in schedule.permutation(epoch).chunks(schedule.batch_size) {
            let grad = problem.batch_gradient(&state.x, batch)?;
            let rda = state.rda.as_mut().expect("rda state");
            state.x = rda.step(&grad, partition, lambda, gamma)?;
            state.k += 1;
        }
        state.epoch = epoch + 1;
        trace.records.push(epoch_record(
            problem,
            partition,
            &state.x,
            lambda,
            eta,
            state.epoch,
            Stage::Initialization,
            started,
        )?);
        observer(&state);
    }
    Ok((state.x, trace))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_step_closed_form() {
        let p = GroupPartition::equal(2, 1).unwrap();
        let lambda = 0.3f64;
        let x0 = Parameters::new(vec![0.0, 0.0]);
        let mut s = RdaState::new(&x0);
        let next = s.step(&Parameters::new(vec![2.0 * lambda, 0.0]), &p, lambda, 1.0).unwrap();
        assert!((next.x[0] + lambda).abs() < 1e-15);
        assert_eq!(next.x[1], 0.0);
    }

    #[test]
    fn small_average_is_thresholded() {
        let p = GroupPartition::equal(2, 1).unwrap();
        let mut s = RdaState::new(&Parameters::<f64>::zeros(2));
        let next = s.step(&Parameters::new(vec![0.3, 0.4]), &p, 0.5, 1.0).unwrap();
        assert_eq!(next.x, vec![0.0, 0.0]);
    }

    #[test]
    fn no_regularization_scales_with_sqrt_k() {
        let p = GroupPartition::equal(2, 2).unwrap();
        let g = Parameters::new(vec![1.5, -0.5]);
        let mut s = RdaState::new(&Parameters::<f64>::zeros(2));
        for k in 1..=9u32 {
            let next = s.step(&g, &p, 0.0, 1.0).unwrap();
            let r = (k as f64).sqrt();
            assert!((next.x[0] + r * 1.5).abs() < 1e-12);
            assert!((next.x[1] - r * 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn bias_is_dual_averaged() {
        let p = GroupPartition::equal(1, 1).unwrap();
        let mut s = RdaState::new(&Parameters::with_bias(vec![0.0], 0.0));
        s.step(&Parameters::with_bias(vec![0.0], 1.0), &p, 0.1, 2.0).unwrap();
        let next = s.step(&Parameters::with_bias(vec![0.0], 3.0), &p, 0.1, 2.0).unwrap();
        assert!((next.bias.unwrap() + 2f64.sqrt() / 2.0 * 2.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_nonpositive_gamma() {
        let p = GroupPartition::equal(1, 1).unwrap();
        let mut s = RdaState::new(&Parameters::<f64>::zeros(1));
        assert!(s.step(&Parameters::new(vec![1.0]), &p, 0.1, 0.0).is_err());
    }
}
