use crate::error::{invalid, Result};
use crate::groups::GroupPartition;
use crate::problems::Problem;
use crate::regularizer::{gradient_mapping, prox_group_l2_in_place, Parameters};
use crate::scalar::Real;

#[derive(Debug, Clone)]
pub struct PgdOutcome<F> {
    pub x: Parameters<F>,
    /// `x_1, x_2, ...` when requested; empty otherwise.
    pub iterates: Vec<Parameters<F>>,
    pub iterations: usize,
    /// Gradient-mapping norm at the returned point.
    pub grad_map_norm: F,
}

/// Deterministic full-batch proximal gradient descent with fixed step `eta`.
///
/// Stops after `max_iter` steps or once the gradient-mapping norm drops
/// below `tol`.
pub fn proximal_gradient_descent<F: Real, P: Problem<F> + ?Sized>(
    problem: &P,
    partition: &GroupPartition,
    x0: &Parameters<F>,
    eta: F,
    lambda: F,
    max_iter: usize,
    tol: F,
    keep_iterates: bool,
) -> Result<PgdOutcome<F>> {
    if !(eta > F::zero()) {
        return Err(invalid(format!("eta must be positive, got {eta}")));
    }
    partition.check_dim(x0.dim())?;
    let mut x = x0.clone();
    let mut iterates = Vec::new();
    let mut iterations = 0;
    loop {
        let (_, grad) = problem.full_value_grad(&x)?;
        let xi = gradient_mapping(&x, eta, &grad, partition, lambda)?.norm();
        if xi < tol || iterations == max_iter {
            return Ok(PgdOutcome { x, iterates, iterations, grad_map_norm: xi });
        }
        x.axpy(-eta, &grad);
        prox_group_l2_in_place(&mut x.x, partition, eta * lambda);
        iterations += 1;
        if keep_iterates {
            iterates.push(x.clone());
        }
    }
}
