//! The mixed l1/l2 group penalty and the group operators built on it:
//! group soft-thresholding (the proximal map), half-space projection, the
//! on-support penalty gradient, and the prox-gradient residual.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::groups::GroupPartition;
use crate::scalar::{dot, norm, norm_sq, Real};

/// Dense iterate: regularized coordinates plus an optional unregularized bias.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Parameters<F> {
    pub x: Vec<F>,
    pub bias: Option<F>,
}

impl<F: Real> Parameters<F> {
    pub fn new(x: Vec<F>) -> Self {
        Self { x, bias: None }
    }

    pub fn with_bias(x: Vec<F>, bias: F) -> Self {
        Self { x, bias: Some(bias) }
    }

    pub fn zeros(n: usize) -> Self {
        Self::new(vec![F::zero(); n])
    }

    /// Same shape as `self` (including the presence of a bias), all zeros.
    pub fn zeros_like(&self) -> Self {
        Self { x: vec![F::zero(); self.x.len()], bias: self.bias.map(|_| F::zero()) }
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    /// `self += a * other`, bias included when both carry one.
    pub fn axpy(&mut self, a: F, other: &Parameters<F>) {
        debug_assert_eq!(self.x.len(), other.x.len());
        for (u, &v) in self.x.iter_mut().zip(&other.x) {
            *u = *u + a * v;
        }
        if let (Some(b), Some(ob)) = (self.bias.as_mut(), other.bias) {
            *b = *b + a * ob;
        }
    }

    pub fn scale(&mut self, a: F) {
        self.x.iter_mut().for_each(|u| *u = *u * a);
        if let Some(b) = self.bias.as_mut() {
            *b = *b * a;
        }
    }

    /// Euclidean norm over all coordinates, bias included.
    pub fn norm(&self) -> F {
        let b = self.bias.unwrap_or_else(F::zero);
        (norm_sq(&self.x) + b * b).sqrt()
    }

    /// Euclidean distance, bias included.
    pub fn distance(&self, other: &Parameters<F>) -> F {
        let mut acc = self.x.iter().zip(&other.x).fold(F::zero(), |acc, (&u, &v)| acc + (u - v) * (u - v));
        if let (Some(a), Some(b)) = (self.bias, other.bias) {
            acc = acc + (a - b) * (a - b);
        }
        acc.sqrt()
    }

    /// Inner product, bias included.
    pub fn dot(&self, other: &Parameters<F>) -> F {
        let mut acc = dot(&self.x, &other.x);
        if let (Some(a), Some(b)) = (self.bias, other.bias) {
            acc = acc + a * b;
        }
        acc
    }

    /// Converts every coordinate to another scalar type.
    pub fn cast<G: Real>(&self) -> Parameters<G> {
        Parameters {
            x: self.x.iter().map(|v| G::lit(v.as_f64())).collect(),
            bias: self.bias.map(|b| G::lit(b.as_f64())),
        }
    }
}

/// `sum_g ||x_g||_2`; the bias is not penalized.
pub fn omega<F: Real>(x: &Parameters<F>, partition: &GroupPartition) -> Result<F> {
    partition.check_dim(x.dim())?;
    Ok(omega_slice(&x.x, partition))
}

pub(crate) fn omega_slice<F: Real>(x: &[F], partition: &GroupPartition) -> F {
    partition.ranges().map(|r| norm(&x[r])).fold(F::zero(), |a, b| a + b)
}

/// Group soft-thresholding: each group is scaled by `max(0, 1 - threshold/||g||)`.
/// Groups with norm at or below the threshold become exact zeros.
pub fn prox_group_l2<F: Real>(
    x_hat: &Parameters<F>,
    partition: &GroupPartition,
    threshold: F,
) -> Result<Parameters<F>> {
    partition.check_dim(x_hat.dim())?;
    if !(threshold >= F::zero()) {
        return Err(invalid(format!("prox threshold must be nonnegative, got {threshold}")));
    }
    let mut out = x_hat.clone();
    prox_group_l2_in_place(&mut out.x, partition, threshold);
    Ok(out)
}

pub(crate) fn prox_group_l2_in_place<F: Real>(x: &mut [F], partition: &GroupPartition, threshold: F) {
    for r in partition.ranges() {
        let group = &mut x[r];
        let nrm = norm(group);
        if nrm <= threshold {
            group.iter_mut().for_each(|v| *v = F::zero());
        } else if threshold > F::zero() {
            let factor = F::one() - threshold / nrm;
            group.iter_mut().for_each(|v| *v = *v * factor);
        }
    }
}

/// Half-space projection anchored at `x_ref`: group `g` of `z` is kept when
/// `z_g . x_ref_g >= epsilon * ||x_ref_g||^2` and zeroed otherwise.
///
/// Groups where `x_ref` is zero pass the test trivially. Callers that want
/// those groups pinned at zero must zero them in `z` first.
pub fn half_space_project<F: Real>(
    z: &Parameters<F>,
    x_ref: &Parameters<F>,
    partition: &GroupPartition,
    epsilon: F,
) -> Result<Parameters<F>> {
    partition.check_dim(z.dim())?;
    partition.check_dim(x_ref.dim())?;
    check_epsilon(epsilon)?;
    let mut out = z.clone();
    for g in 0..partition.num_groups() {
        half_space_project_group(&mut out.x, &x_ref.x, partition, g, epsilon);
    }
    Ok(out)
}

/// Applies the half-space rule to one group in place. Returns true when the
/// group was projected to zero.
#[inline]
pub(crate) fn half_space_project_group<F: Real>(
    z: &mut [F],
    x_ref: &[F],
    partition: &GroupPartition,
    g: usize,
    epsilon: F,
) -> bool {
    let r = partition.range(g);
    let xr = &x_ref[r.clone()];
    if dot(&z[r.clone()], xr) < epsilon * norm_sq(xr) {
        z[r].iter_mut().for_each(|v| *v = F::zero());
        true
    } else {
        false
    }
}

pub(crate) fn check_epsilon<F: Real>(epsilon: F) -> Result<()> {
    if !(epsilon >= F::zero() && epsilon < F::one()) {
        return Err(invalid(format!("epsilon must lie in [0, 1), got {epsilon}")));
    }
    Ok(())
}

/// `x_g / ||x_g||` on nonzero groups and zero on zero groups; the bias
/// component (if any) is zero.
pub fn grad_omega_on_support<F: Real>(x: &Parameters<F>, partition: &GroupPartition) -> Parameters<F> {
    let mut out = x.zeros_like();
    for r in partition.ranges() {
        let nrm = norm(&x.x[r.clone()]);
        if nrm > F::zero() {
            for i in r {
                out.x[i] = x.x[i] / nrm;
            }
        }
    }
    out
}

/// Prox-gradient residual `(x - prox_{eta*lambda}(x - eta*grad_f)) / eta`.
/// It vanishes exactly at fixed points of the proximal gradient update.
pub fn gradient_mapping<F: Real>(
    x: &Parameters<F>,
    eta: F,
    grad_f: &Parameters<F>,
    partition: &GroupPartition,
    lambda: F,
) -> Result<Parameters<F>> {
    if !(eta > F::zero()) {
        return Err(invalid(format!("eta must be positive, got {eta}")));
    }
    if !(lambda >= F::zero()) {
        return Err(invalid(format!("lambda must be nonnegative, got {lambda}")));
    }
    partition.check_dim(x.dim())?;
    if grad_f.dim() != x.dim() {
        return Err(Error::DimensionMismatch { expected: x.dim(), actual: grad_f.dim() });
    }
    let mut trial = x.clone();
    trial.axpy(-eta, grad_f);
    prox_group_l2_in_place(&mut trial.x, partition, eta * lambda);
    let mut xi = x.clone();
    xi.axpy(-F::one(), &trial);
    xi.scale(F::one() / eta);
    Ok(xi)
}
