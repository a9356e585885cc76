//! Disjoint, contiguous group partitions of the regularized coordinates and
//! the zero / nonzero group index sets they induce.

use std::collections::BTreeSet;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::regularizer::Parameters;
use crate::scalar::Real;

/// A fixed partition of `0..n` into contiguous, nonempty groups.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupPartition {
    /// `(start, length)` of each group, in coordinate order.
    group_offsets: Vec<(usize, usize)>,
    n: usize,
}

impl GroupPartition {
    /// Builds a partition from consecutive group sizes.
    pub fn from_sizes(sizes: &[usize]) -> Result<Self> {
        if sizes.is_empty() {
            return Err(invalid("a partition needs at least one group"));
        }
        let mut group_offsets = Vec::with_capacity(sizes.len());
        let mut start = 0;
        for (g, &len) in sizes.iter().enumerate() {
            if len == 0 {
                return Err(invalid(format!("group {g} is empty")));
            }
            group_offsets.push((start, len));
            start += len;
        }
        Ok(Self { group_offsets, n: start })
    }

    /// Splits `0..n` into `num_groups` contiguous groups whose sizes differ by
    /// at most one; the first `n % num_groups` groups get the extra coordinate.
    pub fn equal(n: usize, num_groups: usize) -> Result<Self> {
        if n == 0 || num_groups == 0 {
            return Err(invalid("n and num_groups must be positive"));
        }
        if num_groups > n {
            return Err(invalid(format!("num_groups ({num_groups}) exceeds n ({n})")));
        }
        let base = n / num_groups;
        let extra = n % num_groups;
        let sizes: Vec<usize> = (0..num_groups).map(|g| base + usize::from(g < extra)).collect();
        Self::from_sizes(&sizes)
    }

    /// Total regularized dimension.
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn num_groups(&self) -> usize {
        self.group_offsets.len()
    }

    /// Coordinate range of group `g`.
    #[inline]
    pub fn range(&self, g: usize) -> Range<usize> {
        let (start, len) = self.group_offsets[g];
        start..start + len
    }

    pub fn offsets(&self) -> &[(usize, usize)] {
        &self.group_offsets
    }

    /// Iterates over the coordinate ranges of all groups.
    pub fn ranges(&self) -> impl Iterator<Item = Range<usize>> + '_ {
        self.group_offsets.iter().map(|&(s, l)| s..s + l)
    }

    /// True iff every coordinate of group `g` in `x` is exactly zero.
    #[inline]
    pub fn group_is_zero<F: Real>(&self, x: &[F], g: usize) -> bool {
        x[self.range(g)].iter().all(|v| *v == F::zero())
    }

    /// Exact-zero mask over groups.
    pub fn zero_mask<F: Real>(&self, x: &[F]) -> Vec<bool> {
        (0..self.num_groups()).map(|g| self.group_is_zero(x, g)).collect()
    }

    pub(crate) fn check_dim(&self, len: usize) -> Result<()> {
        if len != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, actual: len });
        }
        Ok(())
    }
}

/// Group ids split into the exactly-zero groups and the rest.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct GroupSupport {
    pub zero_groups: BTreeSet<usize>,
    pub nonzero_groups: BTreeSet<usize>,
}

impl GroupSupport {
    pub fn num_groups(&self) -> usize {
        self.zero_groups.len() + self.nonzero_groups.len()
    }

    /// Builds a support from a set of zero group ids over `num_groups` groups.
    pub fn from_zero_groups(zero: impl IntoIterator<Item = usize>, num_groups: usize) -> Self {
        let zero_groups: BTreeSet<usize> = zero.into_iter().collect();
        let nonzero_groups = (0..num_groups).filter(|g| !zero_groups.contains(g)).collect();
        Self { zero_groups, nonzero_groups }
    }
}

/// Computes the zero / nonzero group sets of `x`. A group is zero only when
/// every coordinate is exactly `0.0`.
pub fn support_of<F: Real>(x: &Parameters<F>, partition: &GroupPartition) -> Result<GroupSupport> {
    partition.check_dim(x.x.len())?;
    let mut support = GroupSupport::default();
    for g in 0..partition.num_groups() {
        if partition.group_is_zero(&x.x, g) {
            support.zero_groups.insert(g);
        } else {
            support.nonzero_groups.insert(g);
        }
    }
    Ok(support)
}
