//! Finite-sum objectives `f = (1/N) sum_i f_i` with closed-form batch
//! gradients.
//!
//! Batch evaluations visit instances in the order given by the batch slice
//! and accumulate sequentially, so results are bit-reproducible for a fixed
//! batch sequence.

use crate::error::{invalid, Error, Result};
use crate::regularizer::Parameters;
use crate::scalar::{dot, norm_sq, Real};

/// A smooth finite-sum loss evaluated over mini-batches of instance indices.
pub trait Problem<F: Real>: Sync {
    /// Number of instances `N`.
    fn num_instances(&self) -> usize;

    /// Regularized dimension `n`.
    fn dim(&self) -> usize;

    /// Whether the model carries an unregularized intercept.
    fn has_bias(&self) -> bool {
        false
    }

    /// Average loss and gradient over `batch`.
    fn batch_value_grad(&self, x: &Parameters<F>, batch: &[usize]) -> Result<(F, Parameters<F>)>;

    fn batch_value(&self, x: &Parameters<F>, batch: &[usize]) -> Result<F> {
        self.batch_value_grad(x, batch).map(|(v, _)| v)
    }

    fn batch_gradient(&self, x: &Parameters<F>, batch: &[usize]) -> Result<Parameters<F>> {
        self.batch_value_grad(x, batch).map(|(_, g)| g)
    }

    /// Upper bound on the gradient Lipschitz constant of every `f_i`.
    fn lipschitz_estimate(&self) -> Result<F>;

    fn full_value_grad(&self, x: &Parameters<F>) -> Result<(F, Parameters<F>)> {
        let all: Vec<usize> = (0..self.num_instances()).collect();
        self.batch_value_grad(x, &all)
    }

    fn full_value(&self, x: &Parameters<F>) -> Result<F> {
        self.full_value_grad(x).map(|(v, _)| v)
    }

    /// A zero iterate of the right shape for this problem.
    fn zero_parameters(&self) -> Parameters<F> {
        if self.has_bias() {
            Parameters::with_bias(vec![F::zero(); self.dim()], F::zero())
        } else {
            Parameters::zeros(self.dim())
        }
    }
}

/// Rejects empty batches and out-of-range instance indices.
pub fn check_batch(batch: &[usize], len: usize) -> Result<()> {
    if batch.is_empty() {
        return Err(Error::EmptyBatch);
    }
    if let Some(&index) = batch.iter().find(|&&i| i >= len) {
        return Err(Error::IndexOutOfRange { index, len });
    }
    Ok(())
}

fn check_params<F: Real>(x: &Parameters<F>, n: usize) -> Result<()> {
    if x.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, actual: x.dim() });
    }
    Ok(())
}

/// Least squares with dense rows: `f_i(x) = (a_i . x - y_i)^2 / 2`.
#[derive(Debug, Clone)]
pub struct LeastSquaresProblem<F> {
    /// Row-major `N x n` design matrix.
    a: Vec<F>,
    y: Vec<F>,
    rows: usize,
    cols: usize,
}

impl<F: Real> LeastSquaresProblem<F> {
    pub fn new(a: Vec<F>, rows: usize, cols: usize, y: Vec<F>) -> Result<Self> {
        if rows == 0 {
            return Err(Error::NoInstances);
        }
        if cols == 0 {
            return Err(invalid("least squares needs at least one column"));
        }
        if a.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, actual: a.len() });
        }
        if y.len() != rows {
            return Err(Error::DimensionMismatch { expected: rows, actual: y.len() });
        }
        Ok(Self { a, y, rows, cols })
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[F] {
        &self.a[i * self.cols..(i + 1) * self.cols]
    }

    pub fn targets(&self) -> &[F] {
        &self.y
    }

    pub fn matrix(&self) -> &[F] {
        &self.a
    }

    /// `max_i ||a_i||^2`.
    pub fn lipschitz(&self) -> F {
        (0..self.rows).map(|i| norm_sq(self.row(i))).fold(F::zero(), F::max)
    }
}

impl<F: Real> Problem<F> for LeastSquaresProblem<F> {
    fn num_instances(&self) -> usize {
        self.rows
    }

    fn dim(&self) -> usize {
        self.cols
    }

    fn batch_value_grad(&self, x: &Parameters<F>, batch: &[usize]) -> Result<(F, Parameters<F>)> {
        check_batch(batch, self.rows)?;
        check_params(x, self.cols)?;
        let mut grad = vec![F::zero(); self.cols];
        let mut value = F::zero();
        for &i in batch {
            let row = self.row(i);
            let r = dot(row, &x.x) - self.y[i];
            value = value + r * r;
            for (g, &a) in grad.iter_mut().zip(row) {
                *g = *g + r * a;
            }
        }
        let inv = F::one() / F::lit(batch.len() as f64);
        grad.iter_mut().for_each(|g| *g = *g * inv);
        let mut out = Parameters::new(grad);
        if x.bias.is_some() {
            out.bias = Some(F::zero());
        }
        Ok((value * inv / F::lit(2.0), out))
    }

    fn lipschitz_estimate(&self) -> Result<F> {
        Ok(self.lipschitz())
    }
}

/// Binary logistic regression on sparse rows with labels in {-1, +1}:
/// `f_i(x, b) = log(1 + exp(-l_i (x . d_i + b)))`.
#[derive(Debug, Clone)]
pub struct LogisticProblem<F> {
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<F>,
    labels: Vec<F>,
    n: usize,
    has_bias: bool,
}

impl<F: Real> LogisticProblem<F> {
    /// Builds a problem from sparse rows of `(column, value)` pairs.
    pub fn from_rows(rows: Vec<Vec<(usize, F)>>, labels: Vec<F>, n: usize, has_bias: bool) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::NoInstances);
        }
        if rows.len() != labels.len() {
            return Err(Error::DimensionMismatch { expected: rows.len(), actual: labels.len() });
        }
        if let Some(&l) = labels.iter().find(|&&l| l != F::one() && l != -F::one()) {
            return Err(Error::InvalidLabel(l.as_f64()));
        }
        let mut indptr = Vec::with_capacity(rows.len() + 1);
        let mut indices = Vec::new();
        let mut values = Vec::new();
        indptr.push(0);
        for row in rows {
            for (j, v) in row {
                if j >= n {
                    return Err(Error::DimensionMismatch { expected: n, actual: j + 1 });
                }
                indices.push(j);
                values.push(v);
            }
            indptr.push(indices.len());
        }
        Ok(Self { indptr, indices, values, labels, n, has_bias })
    }

    /// Sparse row `i` as parallel `(columns, values)` slices.
    #[inline]
    pub fn row(&self, i: usize) -> (&[usize], &[F]) {
        let r = self.indptr[i]..self.indptr[i + 1];
        (&self.indices[r.clone()], &self.values[r])
    }

    pub fn labels(&self) -> &[F] {
        &self.labels
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Raises the feature dimension (never lowers it).
    pub fn with_dim(mut self, n: usize) -> Result<Self> {
        if n < self.n {
            return Err(invalid(format!("cannot shrink dimension from {} to {n}", self.n)));
        }
        self.n = n;
        Ok(self)
    }

    pub fn set_bias(&mut self, has_bias: bool) {
        self.has_bias = has_bias;
    }

    /// `max_i ||d_i||^2 / 4`, bias feature excluded.
    pub fn lipschitz(&self) -> Result<F> {
        if self.labels.is_empty() {
            return Err(Error::NoInstances);
        }
        let max_sq = (0..self.labels.len()).map(|i| norm_sq(self.row(i).1)).fold(F::zero(), F::max);
        Ok(max_sq / F::lit(4.0))
    }

    #[inline]
    fn margin(&self, x: &Parameters<F>, i: usize) -> F {
        let (cols, vals) = self.row(i);
        let mut m = cols.iter().zip(vals).fold(F::zero(), |acc, (&j, &v)| acc + x.x[j] * v);
        if self.has_bias {
            m = m + x.bias.unwrap_or_else(F::zero);
        }
        m
    }
}

/// `log(1 + exp(-z))` without overflow.
#[inline]
pub(crate) fn softplus_neg<F: Real>(z: F) -> F {
    (-z).max(F::zero()) + (-z.abs()).exp().ln_1p()
}

/// `1 / (1 + exp(z))`, the logistic of `-z`, without overflow.
#[inline]
pub(crate) fn sigmoid_neg<F: Real>(z: F) -> F {
    if z >= F::zero() {
        let e = (-z).exp();
        e / (F::one() + e)
    } else {
        F::one() / (F::one() + z.exp())
    }
}

impl<F: Real> Problem<F> for LogisticProblem<F> {
    fn num_instances(&self) -> usize {
        self.labels.len()
    }

    fn dim(&self) -> usize {
        self.n
    }

    fn has_bias(&self) -> bool {
        self.has_bias
    }

    fn batch_value_grad(&self, x: &Parameters<F>, batch: &[usize]) -> Result<(F, Parameters<F>)> {
        check_batch(batch, self.labels.len())?;
        check_params(x, self.n)?;
        if self.has_bias && x.bias.is_none() {
            return Err(invalid("logistic problem with bias needs parameters carrying a bias"));
        }
        let mut grad = vec![F::zero(); self.n];
        let mut grad_b = F::zero();
        let mut value = F::zero();
        for &i in batch {
            let l = self.labels[i];
            let z = l * self.margin(x, i);
            value = value + softplus_neg(z);
            let coef = -l * sigmoid_neg(z);
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                grad[j] = grad[j] + coef * v;
            }
            grad_b = grad_b + coef;
        }
        let inv = F::one() / F::lit(batch.len() as f64);
        grad.iter_mut().for_each(|g| *g = *g * inv);
        let bias = match (self.has_bias, x.bias) {
            (true, _) => Some(grad_b * inv),
            (false, Some(_)) => Some(F::zero()),
            (false, None) => None,
        };
        Ok((value * inv, Parameters { x: grad, bias }))
    }

    fn lipschitz_estimate(&self) -> Result<F> {
        self.lipschitz()
    }
}
