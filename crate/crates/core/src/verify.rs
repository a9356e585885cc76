//! Randomized property suites for the operators and steps.
//!
//! Each suite draws its cases from a fixed seed and reports how many trials
//! violated the property together with the worst observed violation.

use rand::RngCore;
use rand_chacha::ChaCha8Rng;

use crate::data::gen_binary_logistic;
use crate::data::rng::{bounded, seeded, symmetric, unit};
use crate::error::{Error, Result};
use crate::groups::GroupPartition;
use crate::problems::{check_batch, LeastSquaresProblem, LogisticProblem, Problem};
use crate::regularizer::{grad_omega_on_support, omega, prox_group_l2, Parameters};
use crate::scalar::norm;
use crate::solvers::{
    half_space_step, proximal_gradient_descent, run_observed, SolverConfig, SwitchRule,
};

pub const SUITES: &[&str] =
    &["prox_oracle", "nonexpansive", "superset", "descent", "identification", "gradcheck", "equivalence"];

/// Signature of the regularizer gradient used by the gradient-check suite.
pub type GradOmegaFn = fn(&Parameters<f64>, &GroupPartition) -> Parameters<f64>;

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Logistic problem for the sufficient-decrease suite; a generated
    /// binary-feature problem is used when absent.
    pub logistic: Option<LogisticProblem<f64>>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { seed: 2024, logistic: None }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub trials: usize,
    pub failures: usize,
    /// Largest violation seen, in the suite's own units.
    pub worst: f64,
    pub detail: String,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.trials > 0 && self.failures == 0
    }
}

/// Runs one named suite.
pub fn run_suite(name: &str, opts: &VerifyOptions) -> Result<SuiteReport> {
    match name {
        "prox_oracle" => Ok(prox_oracle(opts.seed, 1000)),
        "nonexpansive" => Ok(nonexpansive(opts.seed, 1000)),
        "superset" => superset(opts.seed, 10_000),
        "descent" => match &opts.logistic {
            Some(p) => descent(p, 100),
            None => descent(&gen_binary_logistic(2000, 123, 14, opts.seed)?, 100),
        },
        "identification" => identification(opts.seed, 100),
        "gradcheck" => gradcheck(opts.seed, 100, grad_omega_on_support),
        "equivalence" => equivalence(opts.seed),
        other => Err(Error::Config(format!("unknown suite '{other}' (known: {})", SUITES.join(", ")))),
    }
}

pub fn run_all(opts: &VerifyOptions) -> Result<Vec<SuiteReport>> {
    SUITES.iter().map(|s| run_suite(s, opts)).collect()
}

fn random_partition(rng: &mut ChaCha8Rng, max_groups: usize) -> GroupPartition {
    let k = 1 + bounded(rng, max_groups);
    let sizes: Vec<usize> = (0..k).map(|_| 1 + bounded(rng, 5)).collect();
    GroupPartition::from_sizes(&sizes).expect("positive sizes")
}

fn uniform(rng: &mut impl RngCore, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * unit(rng)
}

fn random_vec(rng: &mut impl RngCore, n: usize, scale: f64) -> Vec<f64> {
    (0..n).map(|_| scale * symmetric(rng)).collect()
}

/// Golden-section minimizer of a unimodal function on `[lo, hi]`.
pub fn golden_section(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, iters: usize) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - r * (hi - lo);
    let mut b = lo + r * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    for _ in 0..iters {
        if fa <= fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - r * (hi - lo);
            fa = f(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + r * (hi - lo);
            fb = f(b);
        }
    }
    0.5 * (lo + hi)
}

/// The group subproblem `min (1/2 eta)||z - x_hat||^2 + lambda ||z||`, solved by
/// a scalar search along the ray through `x_hat` (the minimizer lies on it).
fn prox_by_search(x_hat: &[f64], eta: f64, lambda: f64) -> Vec<f64> {
    let r = norm(x_hat);
    if r == 0.0 {
        return vec![0.0; x_hat.len()];
    }
    let phi = |s: f64| (s - r).powi(2) / (2.0 * eta) + lambda * s;
    let s = golden_section(phi, 0.0, r, 200);
    // The bracket never contains the endpoint exactly; snap to it when the
    // endpoint is at least as good.
    let s = if phi(0.0) <= phi(s) { 0.0 } else { s };
    x_hat.iter().map(|v| v * s / r).collect()
}

fn prox_oracle(seed: u64, trials: usize) -> SuiteReport {
    let mut rng = seeded(seed);
    let mut failures = 0;
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let part = random_partition(&mut rng, 4);
        let x_hat = Parameters::new(random_vec(&mut rng, part.dim(), 2.0));
        let lambda = uniform(&mut rng, 0.0, 2.0);
        let eta = uniform(&mut rng, 0.05, 2.0);
        let got = prox_group_l2(&x_hat, &part, eta * lambda).expect("valid threshold");
        let mut err: f64 = 0.0;
        for range in part.ranges() {
            let expect = prox_by_search(&x_hat.x[range.clone()], eta, lambda);
            for (a, b) in got.x[range].iter().zip(&expect) {
                err = err.max((a - b).abs());
            }
        }
        worst = worst.max(err);
        if err > 1e-6 {
            failures += 1;
        }
    }
    SuiteReport {
        name: "prox_oracle",
        trials,
        failures,
        worst,
        detail: format!("max |prox - scalar search| = {worst:.3e} (tolerance 1e-6)"),
    }
}

fn nonexpansive(seed: u64, trials: usize) -> SuiteReport {
    let mut rng = seeded(seed ^ 0x9e37);
    let mut failures = 0;
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..trials {
        let part = random_partition(&mut rng, 4);
        let a = Parameters::new(random_vec(&mut rng, part.dim(), 2.0));
        let b = Parameters::new(random_vec(&mut rng, part.dim(), 2.0));
        let t = uniform(&mut rng, 0.0, 2.0);
        let pa = prox_group_l2(&a, &part, t).expect("valid threshold");
        let pb = prox_group_l2(&b, &part, t).expect("valid threshold");
        let excess = pa.distance(&pb) - a.distance(&b);
        worst = worst.max(excess);
        if excess > 1e-12 {
            failures += 1;
        }
    }
    SuiteReport {
        name: "nonexpansive",
        trials,
        failures,
        worst,
        detail: format!("max ||Pa - Pb|| - ||a - b|| = {worst:.3e}"),
    }
}

/// `f(x) = c^T x`: a problem whose gradient is the constant `c`.
#[derive(Debug, Clone)]
pub struct LinearProblem {
    pub c: Parameters<f64>,
}

impl Problem<f64> for LinearProblem {
    fn num_instances(&self) -> usize {
        1
    }

    fn dim(&self) -> usize {
        self.c.dim()
    }

    fn has_bias(&self) -> bool {
        self.c.bias.is_some()
    }

    fn batch_value_grad(&self, x: &Parameters<f64>, batch: &[usize]) -> Result<(f64, Parameters<f64>)> {
        check_batch(batch, 1)?;
        Ok((self.c.dot(x), self.c.clone()))
    }

    fn lipschitz_estimate(&self) -> Result<f64> {
        Ok(0.0)
    }
}

/// `f(x) = 1/2 ||x - c||^2`, with unit Lipschitz constant.
#[derive(Debug, Clone)]
pub struct QuadraticProblem {
    pub c: Vec<f64>,
}

impl Problem<f64> for QuadraticProblem {
    fn num_instances(&self) -> usize {
        1
    }

    fn dim(&self) -> usize {
        self.c.len()
    }

    fn batch_value_grad(&self, x: &Parameters<f64>, batch: &[usize]) -> Result<(f64, Parameters<f64>)> {
        check_batch(batch, 1)?;
        if x.dim() != self.c.len() {
            return Err(Error::DimensionMismatch { expected: self.c.len(), actual: x.dim() });
        }
        let r: Vec<f64> = x.x.iter().zip(&self.c).map(|(a, b)| a - b).collect();
        let value = 0.5 * r.iter().map(|v| v * v).sum::<f64>();
        Ok((value, Parameters { x: r, bias: x.bias.map(|_| 0.0) }))
    }

    fn lipschitz_estimate(&self) -> Result<f64> {
        Ok(1.0)
    }
}

fn superset(seed: u64, trials: usize) -> Result<SuiteReport> {
    let mut rng = seeded(seed ^ 0x51ed);
    let mut failures = 0;
    let mut checked = 0;
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let part = random_partition(&mut rng, 5);
        let alpha = uniform(&mut rng, 0.01, 1.0);
        let lambda = uniform(&mut rng, 0.01, 1.0);
        let eps = uniform(&mut rng, 0.0, 0.999);
        let mut x = random_vec(&mut rng, part.dim(), 1.0);
        let mut c = random_vec(&mut rng, part.dim(), 1.0);
        let g = bounded(&mut rng, part.num_groups());
        let range = part.range(g);
        if norm(&x[range.clone()]) == 0.0 {
            x[range.start] = 1.0;
        }
        // Place x_hat_g = x_g - alpha c_g strictly inside the ball of radius alpha*lambda.
        let dir = random_vec(&mut rng, range.len(), 1.0);
        let dn = norm(&dir).max(f64::MIN_POSITIVE);
        let radius = 0.999 * alpha * lambda * unit(&mut rng);
        for (k, i) in range.clone().enumerate() {
            let target = dir[k] / dn * radius;
            c[i] = (x[i] - target) / alpha;
        }
        let xp = Parameters::new(x);
        let x_hat: Vec<f64> = range.clone().map(|i| xp.x[i] - alpha * c[i]).collect();
        if norm(&x_hat) > alpha * lambda {
            continue;
        }
        checked += 1;
        let problem = LinearProblem { c: Parameters::new(c) };
        let next = half_space_step(&xp, &problem, &part, alpha, lambda, eps, &[0])?;
        if !part.group_is_zero(&next.x, g) {
            failures += 1;
            worst = worst.max(norm(&next.x[range]));
        }
    }
    Ok(SuiteReport {
        name: "superset",
        trials: checked,
        failures,
        worst,
        detail: format!("{checked} draws with ||x_hat_g|| <= alpha*lambda; {failures} groups survived"),
    })
}

fn descent(problem: &LogisticProblem<f64>, steps: usize) -> Result<SuiteReport> {
    let n_inst = problem.num_instances();
    let part = GroupPartition::equal(problem.dim(), 10.min(problem.dim()))?;
    let lambda = 100.0 / n_inst as f64;
    let bias_term = if problem.has_bias() { 1.0 } else { 0.0 };
    let l = (0..n_inst)
        .map(|i| crate::scalar::norm_sq(problem.row(i).1) + bias_term)
        .fold(0.0f64, f64::max)
        / 4.0;
    let l = if l > 0.0 { l } else { 1.0 };
    let all: Vec<usize> = (0..n_inst).collect();
    let x0 = problem.zero_parameters();
    let warm = proximal_gradient_descent(problem, &part, &x0, 1.0 / l, lambda, 20, 0.0, false)?.x;

    let mut trials = 0;
    let mut failures = 0;
    let mut worst_slack = f64::INFINITY;
    let mut worst_descent = f64::NEG_INFINITY;
    for eps in [0.0, 0.05] {
        let alpha = 0.9 * (2.0 * (1.0 - eps) / l).min(1.0 / l);
        let mut x = warm.clone();
        for _ in 0..steps {
            let (f0, grad) = problem.batch_value_grad(&x, &all)?;
            let psi0 = f0 + lambda * omega(&x, &part)?;
            let next = half_space_step(&x, problem, &part, alpha, lambda, eps, &all)?;
            let psi1 = problem.batch_value(&next, &all)? + lambda * omega(&next, &part)?;

            let unit_dir = grad_omega_on_support(&x, &part);
            let mut kept = 0.0;
            let mut dropped = 0.0;
            let mut d_dot = 0.0;
            let mut d_norm = 0.0;
            for (g, range) in part.ranges().enumerate() {
                if part.group_is_zero(&x.x, g) {
                    continue;
                }
                let gpsi: Vec<f64> = range.clone().map(|i| grad.x[i] + lambda * unit_dir.x[i]).collect();
                if part.group_is_zero(&next.x, g) {
                    dropped += crate::scalar::norm_sq(&x.x[range.clone()]);
                } else {
                    kept += crate::scalar::norm_sq(&gpsi);
                }
                for (k, i) in range.enumerate() {
                    let d = next.x[i] - x.x[i];
                    d_dot += d * gpsi[k];
                    d_norm += d * d;
                }
            }
            if let (Some(b0), Some(b1), Some(gb)) = (x.bias, next.bias, grad.bias) {
                kept += gb * gb;
                d_dot += (b1 - b0) * gb;
                d_norm += (b1 - b0) * (b1 - b0);
            }
            let bound = psi0 - (alpha - alpha * alpha * l / 2.0) * kept - ((1.0 - eps) / alpha - l / 2.0) * dropped;
            let slack = bound - psi1;
            worst_slack = worst_slack.min(slack);
            let mut bad = slack < -1e-9;
            if d_norm > 0.0 {
                worst_descent = worst_descent.max(d_dot);
                bad |= d_dot >= 0.0;
            }
            trials += 1;
            if bad {
                failures += 1;
            }
            x = next;
        }
    }
    Ok(SuiteReport {
        name: "descent",
        trials,
        failures,
        worst: -worst_slack,
        detail: format!(
            "min slack {worst_slack:.3e} (>= -1e-9 required), max d'grad {worst_descent:.3e} (< 0 required), L = {l:.4}"
        ),
    })
}

/// A constructed instance with known solution for the identification suite.
#[derive(Debug, Clone)]
pub struct IdentificationCase {
    pub partition: GroupPartition,
    pub problem: QuadraticProblem,
    pub x_star: Parameters<f64>,
    pub zero_groups: Vec<usize>,
    pub lambda: f64,
    pub delta3: f64,
}

/// Draws a group-sparse `x*` and a centre `c` so that `x*` minimizes
/// `1/2 ||x - c||^2 + lambda * Omega(x)` with strict complementarity.
pub fn identification_case(rng: &mut ChaCha8Rng) -> IdentificationCase {
    let k = 2 + bounded(rng, 6);
    let sizes: Vec<usize> = (0..k).map(|_| 1 + bounded(rng, 5)).collect();
    let partition = GroupPartition::from_sizes(&sizes).expect("positive sizes");
    let lambda = uniform(rng, 0.1, 1.0);
    let mut zero: Vec<bool> = (0..k).map(|_| unit(rng) < 0.5).collect();
    zero[0] = true;
    zero[k - 1] = false;
    let mut x = vec![0.0; partition.dim()];
    let mut c = vec![0.0; partition.dim()];
    let mut delta3 = f64::INFINITY;
    for (g, range) in partition.ranges().enumerate() {
        let dir = random_vec(rng, range.len(), 1.0);
        let dn = norm(&dir).max(1e-3);
        if zero[g] {
            let r = lambda * uniform(rng, 0.0, 0.9);
            for (k, i) in range.enumerate() {
                c[i] = dir[k] / dn * r;
            }
            delta3 = delta3.min((lambda - r) / 2.0);
        } else {
            let r = uniform(rng, 0.2, 2.0);
            for (k, i) in range.enumerate() {
                x[i] = dir[k] / dn * r;
                c[i] = x[i] * (1.0 + lambda / r);
            }
        }
    }
    let zero_groups = (0..k).filter(|&g| zero[g]).collect();
    IdentificationCase {
        partition,
        problem: QuadraticProblem { c },
        x_star: Parameters::new(x),
        zero_groups,
        lambda,
        delta3,
    }
}

fn identification(seed: u64, instances: usize) -> Result<SuiteReport> {
    let mut rng = seeded(seed ^ 0x7333);
    let mut trials = 0;
    let mut failures = 0;
    for _ in 0..instances {
        let case = identification_case(&mut rng);
        let n = case.partition.dim();
        for _ in 0..10 {
            let alpha = uniform(&mut rng, 0.05, 1.0);
            let eps = uniform(&mut rng, 0.0, 0.5);
            let radius = 2.0 * alpha * case.delta3 / (1.0 - eps + alpha);
            let dir = random_vec(&mut rng, n, 1.0);
            let dn = norm(&dir).max(1e-12);
            let r = radius * (1.0 - 1e-9) * unit(&mut rng).powf(1.0 / n as f64);
            let xk = Parameters::new(case.x_star.x.iter().zip(&dir).map(|(a, d)| a + d / dn * r).collect());
            let next = half_space_step(&xk, &case.problem, &case.partition, alpha, case.lambda, eps, &[0])?;
            trials += 1;
            if case.zero_groups.iter().any(|&g| !case.partition.group_is_zero(&next.x, g)) {
                failures += 1;
            }
        }
    }
    Ok(SuiteReport {
        name: "identification",
        trials,
        failures,
        worst: failures as f64,
        detail: format!("{trials} placements inside the identification ball, {failures} missed a zero group"),
    })
}

fn rel_err(a: &[f64], b: &[f64]) -> f64 {
    let diff: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    diff / norm(a).max(norm(b)).max(1e-12)
}

/// Central differences of `f` at `x` over coordinates and bias.
fn finite_difference(f: impl Fn(&Parameters<f64>) -> f64, x: &Parameters<f64>) -> Vec<f64> {
    let mut out = Vec::with_capacity(x.dim() + 1);
    let mut probe = x.clone();
    for i in 0..x.dim() {
        let h = 1e-6 * x.x[i].abs().max(1.0);
        probe.x[i] = x.x[i] + h;
        let up = f(&probe);
        probe.x[i] = x.x[i] - h;
        let down = f(&probe);
        probe.x[i] = x.x[i];
        out.push((up - down) / (2.0 * h));
    }
    if let Some(b) = x.bias {
        let h = 1e-6 * b.abs().max(1.0);
        probe.bias = Some(b + h);
        let up = f(&probe);
        probe.bias = Some(b - h);
        let down = f(&probe);
        out.push((up - down) / (2.0 * h));
    }
    out
}

fn flatten(p: &Parameters<f64>) -> Vec<f64> {
    p.x.iter().copied().chain(p.bias).collect()
}

fn random_batch(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let size = 1 + bounded(rng, n);
    (0..size).map(|_| bounded(rng, n)).collect()
}

/// Gradient checks for both losses and for the composite objective on its
/// smooth region, with `grad_omega` supplying the regularizer gradient.
pub fn gradcheck(seed: u64, instances: usize, grad_omega: GradOmegaFn) -> Result<SuiteReport> {
    let mut rng = seeded(seed ^ 0x6ad);
    let mut failures = 0;
    let mut worst: f64 = 0.0;
    let mut record = |e: f64| {
        worst = worst.max(e);
        if !(e < 1e-5) {
            failures += 1;
        }
    };
    for _ in 0..instances {
        let rows = 2 + bounded(&mut rng, 8);
        let cols = 1 + bounded(&mut rng, 10);
        let a = random_vec(&mut rng, rows * cols, 1.0);
        let y = random_vec(&mut rng, rows, 1.0);
        let p = LeastSquaresProblem::new(a, rows, cols, y)?;
        let x = Parameters::new(random_vec(&mut rng, cols, 1.0));
        let batch = random_batch(&mut rng, rows);
        let analytic = flatten(&p.batch_gradient(&x, &batch)?);
        let numeric = finite_difference(|z| p.batch_value(z, &batch).expect("valid batch"), &x);
        record(rel_err(&analytic, &numeric));
    }
    for _ in 0..instances {
        let n_inst = 2 + bounded(&mut rng, 8);
        let n = 1 + bounded(&mut rng, 10);
        let mut rows: Vec<Vec<(usize, f64)>> = Vec::with_capacity(n_inst);
        for _ in 0..n_inst {
            let mut row = Vec::new();
            for j in 0..n {
                if unit(&mut rng) < 0.6 {
                    row.push((j, 2.0 * symmetric(&mut rng)));
                }
            }
            rows.push(row);
        }
        let labels = (0..n_inst).map(|_| if unit(&mut rng) < 0.5 { 1.0 } else { -1.0 }).collect();
        let p = LogisticProblem::from_rows(rows, labels, n, true)?;
        let x = Parameters::with_bias(random_vec(&mut rng, n, 1.5), symmetric(&mut rng));
        let batch = random_batch(&mut rng, n_inst);
        let analytic = flatten(&p.batch_gradient(&x, &batch)?);
        let numeric = finite_difference(|z| p.batch_value(z, &batch).expect("valid batch"), &x);
        record(rel_err(&analytic, &numeric));
    }
    for _ in 0..instances {
        let part = random_partition(&mut rng, 4);
        let n = part.dim();
        let rows = 2 + bounded(&mut rng, 8);
        let p = LeastSquaresProblem::new(random_vec(&mut rng, rows * n, 1.0), rows, n, random_vec(&mut rng, rows, 1.0))?;
        let mut x = Parameters::new(random_vec(&mut rng, n, 1.0));
        for range in part.ranges() {
            if norm(&x.x[range.clone()]) < 0.1 {
                x.x[range.start] += 0.5;
            }
        }
        let lambda = uniform(&mut rng, 0.05, 1.0);
        let all: Vec<usize> = (0..rows).collect();
        let mut analytic = p.batch_gradient(&x, &all)?;
        analytic.axpy(lambda, &grad_omega(&x, &part));
        let psi = |z: &Parameters<f64>| {
            p.batch_value(z, &all).expect("valid batch") + lambda * omega(z, &part).expect("matching dims")
        };
        record(rel_err(&flatten(&analytic), &finite_difference(psi, &x)));
    }
    Ok(SuiteReport {
        name: "gradcheck",
        trials: 3 * instances,
        failures,
        worst,
        detail: format!("max relative error {worst:.3e} (tolerance 1e-5)"),
    })
}

fn equivalence(seed: u64) -> Result<SuiteReport> {
    let inst = crate::data::gen_synthetic::<f64>(60, 12, 4, 0.5, seed)?;
    let (p, part) = (&inst.problem, &inst.partition);
    let lambda = 0.05;
    let alpha = 1.0 / p.lipschitz();
    let x0 = Parameters::zeros(12);

    let cfg = SolverConfig::prox_svrg(lambda, alpha, 60, 50).with_seed(seed);
    let mut svrg = Vec::new();
    run_observed(&cfg, p, part, &x0, |s| svrg.push(s.x.clone()))?;
    let pgd = proximal_gradient_descent(p, part, &x0, alpha, lambda, 50, 0.0, true)?;
    let mut gap: f64 = 0.0;
    for (a, b) in svrg.iter().zip(&pgd.iterates) {
        for (u, v) in a.x.iter().zip(&b.x) {
            gap = gap.max((u - v).abs());
        }
    }
    let svrg_ok = svrg.len() == 50 && pgd.iterates.len() == 50 && gap <= 1e-12;

    let hspg = SolverConfig::hspg(lambda, 0.05, 8, 10, SwitchRule::Never, 0.05).with_seed(seed);
    let prox = SolverConfig::prox_sg(lambda, 0.05, 8, 10).with_seed(seed);
    let mut a = Vec::new();
    let mut b = Vec::new();
    let (xa, _) = run_observed(&hspg, p, part, &x0, |s| a.push(s.x.clone()))?;
    let (xb, _) = run_observed(&prox, p, part, &x0, |s| b.push(s.x.clone()))?;
    let bitwise = xa.x.iter().map(|v| v.to_bits()).eq(xb.x.iter().map(|v| v.to_bits())) && a == b;

    Ok(SuiteReport {
        name: "equivalence",
        trials: 2,
        failures: usize::from(!svrg_ok) + usize::from(!bitwise),
        worst: gap,
        detail: format!(
            "full-batch Prox-SVRG vs proximal gradient: max gap {gap:.3e} over {} iterates; HSPG without switch == Prox-SG bitwise: {bitwise}",
            svrg.len()
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_section_finds_parabola_minimum() {
        let s = golden_section(|t| (t - 0.3).powi(2), 0.0, 1.0, 100);
        assert!((s - 0.3).abs() < 1e-9);
    }

    #[test]
    fn every_suite_passes_at_default_seed() {
        let opts = VerifyOptions::default();
        for name in SUITES {
            let r = run_suite(name, &opts).unwrap();
            assert!(r.passed(), "{name}: {}", r.detail);
        }
    }

    #[test]
    fn sign_flipped_regularizer_gradient_is_caught() {
        fn flipped(x: &Parameters<f64>, p: &GroupPartition) -> Parameters<f64> {
            let mut g = grad_omega_on_support(x, p);
            g.scale(-1.0);
            g
        }
        let r = gradcheck(7, 20, flipped).unwrap();
        assert!(!r.passed());
        assert!(r.failures >= 20);
    }

    #[test]
    fn unknown_suite_is_rejected() {
        assert!(matches!(run_suite("nope", &VerifyOptions::default()), Err(Error::Config(_))));
    }
}
