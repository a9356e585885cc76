use crate::error::Result;
use crate::groups::GroupPartition;
use crate::problems::Problem;
use crate::regularizer::{
    check_epsilon, grad_omega_on_support, half_space_project_group, omega_slice, prox_group_l2_in_place,
    Parameters,
};
use crate::scalar::Real;

/// One proximal stochastic gradient step:
/// `x+ = prox_{alpha*lambda}(x - alpha * grad f_B(x))`, with a plain gradient
/// step on the bias.
pub fn prox_sg_step<F: Real, P: Problem<F> + ?Sized>(
    x: &Parameters<F>,
    problem: &P,
    partition: &GroupPartition,
    alpha: F,
    lambda: F,
    batch: &[usize],
) -> Result<Parameters<F>> {
    let grad = problem.batch_gradient(x, batch)?;
    let mut next = x.clone();
    next.axpy(-alpha, &grad);
    prox_group_l2_in_place(&mut next.x, partition, alpha * lambda);
    Ok(next)
}

/// One half-space step.
///
/// On the nonzero groups of `x` the trial point is
/// `x - alpha * (grad f_B(x) + lambda * x_g/||x_g||)`; zero groups stay zero.
/// Each nonzero group of the trial point is then kept if its inner product
/// with `x_g` is at least `epsilon * ||x_g||^2` and zeroed otherwise. Zero
/// groups of `x` are therefore zero in the result.
pub fn half_space_step<F: Real, P: Problem<F> + ?Sized>(
    x: &Parameters<F>,
    problem: &P,
    partition: &GroupPartition,
    alpha: F,
    lambda: F,
    epsilon: F,
    batch: &[usize],
) -> Result<Parameters<F>> {
    check_epsilon(epsilon)?;
    let grad = problem.batch_gradient(x, batch)?;
    let unit = grad_omega_on_support(x, partition);
    let mut next = x.clone();
    for g in 0..partition.num_groups() {
        if partition.group_is_zero(&x.x, g) {
            next.x[partition.range(g)].iter_mut().for_each(|v| *v = F::zero());
            continue;
        }
        for i in partition.range(g) {
            next.x[i] = x.x[i] - alpha * (grad.x[i] + lambda * unit.x[i]);
        }
        half_space_project_group(&mut next.x, &x.x, partition, g, epsilon);
    }
    if let (Some(b), Some(gb)) = (next.bias.as_mut(), grad.bias) {
        *b = *b - alpha * gb;
    }
    Ok(next)
}

/// Objective pieces at one point: `psi = f + lambda * omega`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Objective<F> {
    pub psi: F,
    pub f: F,
    pub omega: F,
}

/// Full-data objective.
pub fn objective<F: Real, P: Problem<F> + ?Sized>(
    problem: &P,
    partition: &GroupPartition,
    x: &Parameters<F>,
    lambda: F,
) -> Result<Objective<F>> {
    partition.check_dim(x.dim())?;
    let f = problem.full_value(x)?;
    let omega = omega_slice(&x.x, partition);
    Ok(Objective { psi: f + lambda * omega, f, omega })
}
