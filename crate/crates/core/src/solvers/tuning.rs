use serde::{Deserialize, Serialize};

use super::config::SolverConfig;
use super::runner::SolverState;
use super::steps::{half_space_step, objective};
use crate::data::BatchSchedule;
use crate::error::{invalid, Result};
use crate::groups::GroupPartition;
use crate::problems::Problem;
use crate::scalar::Real;

/// Grid search over `epsilon = 0, 0.01, 0.02, ..., cap`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpsilonSearch {
    /// Allowed relative increase of the first-step objective over `epsilon = 0`.
    pub rho: f64,
    pub cap: f64,
}

impl Default for EpsilonSearch {
    fn default() -> Self {
        Self { rho: 0.01, cap: 0.2 }
    }
}

impl EpsilonSearch {
    /// The candidate grid, `i / 100` for `i = 0..`.
    pub fn candidates(&self) -> Vec<f64> {
        let last = (self.cap * 100.0 + 1e-9).floor() as usize;
        (0..=last).map(|i| i as f64 / 100.0).filter(|e| *e < 1.0).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpsilonTuning {
    pub chosen: f64,
    /// `(epsilon, psi after one half-space step)` for every candidate.
    pub trials: Vec<(f64, f64)>,
}

/// Picks the largest `epsilon` whose first half-space step from `warm` raises
/// the full objective by at most `rho` relative to `epsilon = 0`.
///
/// Every candidate uses the batch the run would draw next.
pub fn tune_epsilon<F: Real, P: Problem<F> + ?Sized>(
    problem: &P,
    partition: &GroupPartition,
    config: &SolverConfig,
    warm: &SolverState<F>,
    search: &EpsilonSearch,
) -> Result<EpsilonTuning> {
    if !(search.rho >= 0.0) || !(search.cap >= 0.0) {
        return Err(invalid("rho and cap must be nonnegative"));
    }
    let schedule = BatchSchedule::new(problem.num_instances(), config.batch_size, config.seed)?;
    let spe = schedule.steps_per_epoch() as u64;
    let step = warm.k.saturating_sub(warm.epoch * spe).min(spe - 1) as usize;
    let batch = schedule.next_batch(warm.epoch, step)?;
    let alpha = F::lit(config.step.alpha_at(warm.epoch));
    let lambda = F::lit(config.lambda);

    let mut trials = Vec::new();
    for eps in search.candidates() {
        let next = half_space_step(&warm.x, problem, partition, alpha, lambda, F::lit(eps), &batch)?;
        trials.push((eps, objective(problem, partition, &next, lambda)?.psi.as_f64()));
    }
    let base = trials[0].1;
    let limit = base + search.rho * base.abs();
    let chosen = trials.iter().filter(|(_, psi)| *psi <= limit).map(|(e, _)| *e).fold(0.0, f64::max);
    Ok(EpsilonTuning { chosen, trials })
}

/// True when the mean of the last `window` values is within `rtol`
/// (relative) of the mean of the `window` values before; false when fewer
/// than `2 * window` values are available.
pub fn stationarity_switch_test(values: &[f64], window: usize, rtol: f64) -> bool {
    if window == 0 || values.len() < 2 * window {
        return false;
    }
    let mean = |s: &[f64]| s.iter().sum::<f64>() / s.len() as f64;
    let end = values.len();
    let last = mean(&values[end - window..]);
    let prev = mean(&values[end - 2 * window..end - window]);
    (last - prev).abs() <= rtol * prev.abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::LeastSquaresProblem;
    use crate::regularizer::Parameters;
    use crate::solvers::SwitchRule;

    #[test]
    fn grid_is_centesimal() {
        let c = EpsilonSearch::default().candidates();
        assert_eq!(c.len(), 21);
        assert_eq!(c[0], 0.0);
        assert_eq!(c[1], 0.01);
        assert_eq!(c[7], 0.07);
        assert_eq!(c[20], 0.2);
    }

    #[test]
    fn stationarity_examples() {
        assert!(stationarity_switch_test(&[2.0; 6], 3, 0.0));
        let geo: Vec<f64> = (0..20).map(|i| 0.5f64.powi(i)).collect();
        assert!(!stationarity_switch_test(&geo, 5, 0.01));
        assert!(stationarity_switch_test(&[5.0, 1.0, 1.0], 1, 0.0));
        assert!(!stationarity_switch_test(&[1.0, 1.0, 1.0], 2, 0.5));
    }

    #[test]
    fn optimum_accepts_whole_grid() {
        // f = 1/2 (x - c)^2 per coordinate, warm start at the optimum, lambda = 0.
        let a = vec![1.0, 0.0, 0.0, 1.0];
        let p = LeastSquaresProblem::new(a, 2, 2, vec![1.0, -2.0]).unwrap();
        let part = GroupPartition::equal(2, 2).unwrap();
        let cfg = SolverConfig::hspg(0.0, 0.5, 2, 1, SwitchRule::AtStep(0), 0.0);
        let warm = SolverState::new(Parameters::new(vec![1.0, -2.0]));
        let t = tune_epsilon(&p, &part, &cfg, &warm, &EpsilonSearch::default()).unwrap();
        assert_eq!(t.chosen, 0.2);
        assert_eq!(t.trials.len(), 21);
    }

    #[test]
    fn zero_rho_keeps_no_worse_candidates() {
        let a = vec![1.0, 0.0, 0.0, 1.0];
        let p = LeastSquaresProblem::new(a, 2, 2, vec![1.0, 0.05]).unwrap();
        let part = GroupPartition::equal(2, 2).unwrap();
        let cfg = SolverConfig::hspg(0.01, 0.5, 2, 1, SwitchRule::AtStep(0), 0.0);
        let warm = SolverState::new(Parameters::new(vec![1.0, 0.05]));
        let search = EpsilonSearch { rho: 0.0, cap: 0.2 };
        let t = tune_epsilon(&p, &part, &cfg, &warm, &search).unwrap();
        let base = t.trials[0].1;
        let expect = t.trials.iter().filter(|(_, v)| *v <= base).map(|(e, _)| *e).fold(0.0, f64::max);
        assert_eq!(t.chosen, expect);
        let loose = tune_epsilon(&p, &part, &cfg, &warm, &EpsilonSearch { rho: 1e9, cap: 0.2 }).unwrap();
        assert_eq!(loose.chosen, 0.2);
    }
}
