use serde::{Deserialize, Serialize};

use super::tuning::EpsilonSearch;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverKind {
    Hspg,
    ProxSg,
    Rda,
    ProxSvrg,
}

impl SolverKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SolverKind::Hspg => "hspg",
            SolverKind::ProxSg => "prox_sg",
            SolverKind::Rda => "rda",
            SolverKind::ProxSvrg => "prox_svrg",
        }
    }
}

impl std::str::FromStr for SolverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "hspg" => Ok(SolverKind::Hspg),
            "prox_sg" | "proxsg" => Ok(SolverKind::ProxSg),
            "rda" => Ok(SolverKind::Rda),
            "prox_svrg" | "proxsvrg" => Ok(SolverKind::ProxSvrg),
            other => Err(Error::Config(format!("unknown solver '{other}'"))),
        }
    }
}

/// Step size as a function of the epoch; changes only at epoch boundaries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepSchedule {
    Constant { alpha: f64 },
    /// `initial * factor^(epoch / period)`.
    PiecewiseDecay { initial: f64, factor: f64, period: usize },
}

impl StepSchedule {
    pub fn alpha_at(&self, epoch: u64) -> f64 {
        match *self {
            StepSchedule::Constant { alpha } => alpha,
            StepSchedule::PiecewiseDecay { initial, factor, period } => {
                initial * factor.powi((epoch / period.max(1) as u64) as i32)
            }
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            StepSchedule::Constant { alpha } => alpha > 0.0 && alpha.is_finite(),
            StepSchedule::PiecewiseDecay { initial, factor, period } => {
                initial > 0.0 && initial.is_finite() && factor > 0.0 && period > 0
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!("step sizes must stay positive: {self:?}")))
        }
    }
}

/// `1 / L`, or `fallback` when the Lipschitz estimate is zero or not finite.
pub fn step_from_lipschitz(lipschitz: f64, fallback: f64) -> f64 {
    if lipschitz > 0.0 && lipschitz.is_finite() {
        1.0 / lipschitz
    } else {
        fallback
    }
}

/// When HSPG leaves the proximal stage.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SwitchRule {
    /// Half-space steps from global step `n_p` on.
    AtStep(u64),
    /// Switch at the first epoch boundary where the mean objective of the
    /// last `window` epochs is within `rtol` (relative) of the window before.
    Stationarity { window: usize, rtol: f64 },
    /// Never switch; HSPG then coincides with Prox-SG.
    Never,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub kind: SolverKind,
    pub lambda: f64,
    pub step: StepSchedule,
    pub batch_size: usize,
    pub max_epochs: usize,
    pub seed: u64,
    /// HSPG only.
    pub epsilon: Option<f64>,
    /// HSPG only.
    pub switch: Option<SwitchRule>,
    /// HSPG only: in the group-sparsity stage use `alpha_t = alpha / t` and
    /// batch size `t * batch_size` in its `t`-th epoch.
    #[serde(default)]
    pub theoretical_stage2: bool,
    /// HSPG only: re-pick `epsilon` with this search when the switch fires.
    #[serde(default)]
    pub epsilon_tuning: Option<EpsilonSearch>,
    /// RDA only.
    pub gamma: Option<f64>,
    /// Prox-SVRG only; defaults to one epoch of batches.
    pub inner_loop_length: Option<usize>,
}

impl SolverConfig {
    fn base(kind: SolverKind, lambda: f64, alpha: f64, batch_size: usize, max_epochs: usize) -> Self {
        Self {
            kind,
            lambda,
            step: StepSchedule::Constant { alpha },
            batch_size,
            max_epochs,
            seed: 0,
            epsilon: None,
            switch: None,
            theoretical_stage2: false,
            epsilon_tuning: None,
            gamma: None,
            inner_loop_length: None,
        }
    }

    pub fn hspg(lambda: f64, alpha: f64, batch_size: usize, max_epochs: usize, switch: SwitchRule, epsilon: f64) -> Self {
        Self { epsilon: Some(epsilon), switch: Some(switch), ..Self::base(SolverKind::Hspg, lambda, alpha, batch_size, max_epochs) }
    }

    pub fn prox_sg(lambda: f64, alpha: f64, batch_size: usize, max_epochs: usize) -> Self {
        Self::base(SolverKind::ProxSg, lambda, alpha, batch_size, max_epochs)
    }

    pub fn rda(lambda: f64, gamma: f64, batch_size: usize, max_epochs: usize) -> Self {
        // RDA's step is driven by gamma; the schedule is only used for the
        // gradient-mapping diagnostic.
        Self { gamma: Some(gamma), ..Self::base(SolverKind::Rda, lambda, 1.0 / gamma, batch_size, max_epochs) }
    }

    pub fn prox_svrg(lambda: f64, alpha: f64, batch_size: usize, max_epochs: usize) -> Self {
        Self::base(SolverKind::ProxSvrg, lambda, alpha, batch_size, max_epochs)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_step(mut self, step: StepSchedule) -> Self {
        self.step = step;
        self
    }

    pub fn epsilon_or_zero(&self) -> f64 {
        self.epsilon.unwrap_or(0.0)
    }

    /// Checks value ranges and that only fields of the selected solver are set.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return bad(format!("lambda must be finite and nonnegative, got {}", self.lambda));
        }
        if self.batch_size == 0 {
            return bad("batch size must be positive".into());
        }
        self.step.validate()?;
        let kind = self.kind.as_str();
        let is_hspg = self.kind == SolverKind::Hspg;
        if !is_hspg && (self.epsilon.is_some() || self.switch.is_some() || self.theoretical_stage2 || self.epsilon_tuning.is_some()) {
            return bad(format!("{kind} does not take HSPG fields (epsilon, switch, theoretical_stage2, epsilon_tuning)"));
        }
        if self.kind != SolverKind::Rda && self.gamma.is_some() {
            return bad(format!("{kind} does not take gamma"));
        }
        if self.kind != SolverKind::ProxSvrg && self.inner_loop_length.is_some() {
            return bad(format!("{kind} does not take inner_loop_length"));
        }
        match self.kind {
            SolverKind::Hspg => {
                let eps = self.epsilon.unwrap_or(0.0);
                if !(0.0..1.0).contains(&eps) {
                    return bad(format!("epsilon must lie in [0, 1), got {eps}"));
                }
                if let Some(search) = self.epsilon_tuning {
                    if !(search.rho >= 0.0) || !(0.0..1.0).contains(&search.cap) {
                        return bad(format!("epsilon search needs rho >= 0 and cap in [0, 1), got {search:?}"));
                    }
                }
                if let Some(SwitchRule::Stationarity { window, rtol }) = self.switch {
                    if window == 0 || !(rtol >= 0.0) {
                        return bad("stationarity switch needs window > 0 and rtol >= 0".into());
                    }
                }
            }
            SolverKind::Rda => match self.gamma {
                Some(g) if g > 0.0 && g.is_finite() => {}
                other => return bad(format!("rda needs gamma > 0, got {other:?}")),
            },
            SolverKind::ProxSvrg => {
                if self.inner_loop_length == Some(0) {
                    return bad("inner_loop_length must be at least 1".into());
                }
            }
            SolverKind::ProxSg => {}
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decay_schedule() {
        let s = StepSchedule::PiecewiseDecay { initial: 1.0, factor: 0.5, period: 10 };
        assert_eq!(s.alpha_at(0), 1.0);
        assert_eq!(s.alpha_at(9), 1.0);
        assert_eq!(s.alpha_at(10), 0.5);
        assert_eq!(s.alpha_at(25), 0.25);
    }

    #[test]
    fn lipschitz_guard() {
        assert_eq!(step_from_lipschitz(4.0, 0.1), 0.25);
        assert_eq!(step_from_lipschitz(0.0, 0.1), 0.1);
    }

    #[test]
    fn rejects_mixed_fields() {
        let mut c = SolverConfig::rda(0.1, 1.0, 8, 2);
        c.epsilon = Some(0.05);
        assert!(matches!(c.validate(), Err(Error::Config(_))));
        let mut c = SolverConfig::prox_sg(0.1, 0.1, 8, 2);
        c.gamma = Some(1.0);
        assert!(c.validate().is_err());
        let mut c = SolverConfig::hspg(0.1, 0.1, 8, 2, SwitchRule::Never, 0.0);
        c.inner_loop_length = Some(3);
        assert!(c.validate().is_err());
    }

    #[test]
    fn rejects_bad_values() {
        assert!(SolverConfig::hspg(0.1, 0.1, 8, 2, SwitchRule::Never, 1.0).validate().is_err());
        assert!(SolverConfig::prox_sg(-0.1, 0.1, 8, 2).validate().is_err());
        assert!(SolverConfig::prox_sg(0.1, 0.0, 8, 2).validate().is_err());
        assert!(SolverConfig::prox_sg(0.1, 0.1, 0, 2).validate().is_err());
        assert!(SolverConfig::rda(0.1, -1.0, 8, 2).validate().is_err());
        assert!(SolverConfig::prox_sg(0.1, 0.1, 8, 2).validate().is_ok());
    }

    #[test]
    fn parses_solver_names() {
        assert_eq!("prox-sg".parse::<SolverKind>().unwrap(), SolverKind::ProxSg);
        assert_eq!("HSPG".parse::<SolverKind>().unwrap(), SolverKind::Hspg);
        assert!("saga".parse::<SolverKind>().is_err());
    }
}
