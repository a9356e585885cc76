use std::collections::BTreeSet;
use std::io::{Read, Write};

use super::rng::{bounded, seeded, shuffle, symmetric, unit};
use crate::error::{invalid, Error, Result};
use crate::groups::{GroupPartition, GroupSupport};
use crate::problems::{LeastSquaresProblem, LogisticProblem};
use crate::regularizer::Parameters;
use crate::scalar::{dot, Real};

/// A noiseless group-sparse least-squares instance with its ground truth.
#[derive(Debug, Clone)]
pub struct SyntheticInstance<F> {
    pub problem: LeastSquaresProblem<F>,
    pub partition: GroupPartition,
    pub x_star: Parameters<F>,
    pub true_zero_groups: BTreeSet<usize>,
}

impl<F: Real> SyntheticInstance<F> {
    pub fn truth_support(&self) -> GroupSupport {
        GroupSupport::from_zero_groups(self.true_zero_groups.iter().copied(), self.partition.num_groups())
    }
}

/// Draws `A` and `x*` with iid entries uniform on `[-1, 1)`, zeroes
/// `round(sparsity_ratio * num_groups)` groups of `x*` chosen uniformly
/// without replacement, and sets `y = A x*`.
///
/// Draw order from the seeded stream: `A` row-major, then `x*`, then one
/// shuffle of the group ids whose first entries become the zero groups.
pub fn gen_synthetic<F: Real>(
    num_instances: usize,
    n: usize,
    num_groups: usize,
    sparsity_ratio: f64,
    seed: u64,
) -> Result<SyntheticInstance<F>> {
    if num_instances == 0 || n == 0 {
        return Err(invalid("synthetic dimensions must be positive"));
    }
    if !(0.0..=1.0).contains(&sparsity_ratio) {
        return Err(invalid(format!("sparsity ratio must lie in [0, 1], got {sparsity_ratio}")));
    }
    let partition = GroupPartition::equal(n, num_groups)?;
    let mut rng = seeded(seed);

    let a: Vec<F> = (0..num_instances * n).map(|_| F::lit(symmetric(&mut rng))).collect();
    let mut x: Vec<F> = (0..n).map(|_| F::lit(symmetric(&mut rng))).collect();

    let num_zero = (sparsity_ratio * num_groups as f64).round() as usize;
    let mut ids: Vec<usize> = (0..num_groups).collect();
    shuffle(&mut ids, &mut rng);
    let true_zero_groups: BTreeSet<usize> = ids[..num_zero].iter().copied().collect();
    for &g in &true_zero_groups {
        x[partition.range(g)].iter_mut().for_each(|v| *v = F::zero());
    }

    let y: Vec<F> = a.chunks_exact(n).map(|row| dot(row, &x)).collect();
    let problem = LeastSquaresProblem::new(a, num_instances, n, y)?;
    Ok(SyntheticInstance { problem, partition, x_star: Parameters::new(x), true_zero_groups })
}

/// A binary-feature logistic problem with one-hot fields, shaped like the
/// categorical encodings common in LIBSVM collections.
///
/// The `n` features are cut into `fields` contiguous blocks; every instance
/// activates exactly one feature per block. Labels are drawn from a logistic
/// model whose weights are uniform on `[-1, 1)` on the first half of the
/// blocks and zero elsewhere. The problem carries a bias.
pub fn gen_binary_logistic<F: Real>(
    num_instances: usize,
    n: usize,
    fields: usize,
    seed: u64,
) -> Result<LogisticProblem<F>> {
    if num_instances == 0 {
        return Err(Error::NoInstances);
    }
    let blocks = GroupPartition::equal(n, fields)?;
    let mut rng = seeded(seed);
    let w: Vec<f64> = (0..n)
        .map(|j| {
            let v = symmetric(&mut rng);
            if j < blocks.range(fields / 2).start.max(1) { v } else { 0.0 }
        })
        .collect();
    let mut rows = Vec::with_capacity(num_instances);
    let mut labels = Vec::with_capacity(num_instances);
    for _ in 0..num_instances {
        let row: Vec<(usize, F)> = blocks
            .ranges()
            .map(|r| (r.start + bounded(&mut rng, r.len()), F::one()))
            .collect();
        let margin: f64 = row.iter().map(|&(j, _)| w[j]).sum();
        let p = 1.0 / (1.0 + (-margin).exp());
        labels.push(if unit(&mut rng) < p { F::one() } else { -F::one() });
        rows.push(row);
    }
    LogisticProblem::from_rows(rows, labels, n, true)
}

const DUMP_MAGIC: &[u8; 8] = b"HSPGSYN1";

/// Writes a little-endian binary dump:
/// magic `HSPGSYN1`, then `u64` N, n, num_groups, number of zero groups,
/// the zero group ids (`u64` each), then `f64` x* (n values), y (N values)
/// and A (N*n values, row-major). Groups are the equal contiguous split.
pub fn write_dump<F: Real>(inst: &SyntheticInstance<F>, mut w: impl Write) -> Result<()> {
    use crate::problems::Problem;
    let rows = inst.problem.num_instances();
    let n = inst.problem.dim();
    w.write_all(DUMP_MAGIC)?;
    for v in [rows, n, inst.partition.num_groups(), inst.true_zero_groups.len()] {
        w.write_all(&(v as u64).to_le_bytes())?;
    }
    for &g in &inst.true_zero_groups {
        w.write_all(&(g as u64).to_le_bytes())?;
    }
    let values = inst.x_star.x.iter().chain(inst.problem.targets()).chain(inst.problem.matrix());
    for v in values {
        w.write_all(&v.as_f64().to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a dump written by [`write_dump`].
pub fn read_dump<F: Real>(mut r: impl Read) -> Result<SyntheticInstance<F>> {
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != DUMP_MAGIC {
        return Err(Error::Parse { line: 0, message: "not a synthetic instance dump".into() });
    }
    let mut word = [0u8; 8];
    let mut next_u64 = |r: &mut dyn Read| -> Result<u64> {
        r.read_exact(&mut word)?;
        Ok(u64::from_le_bytes(word))
    };
    let rows = next_u64(&mut r)? as usize;
    let n = next_u64(&mut r)? as usize;
    let num_groups = next_u64(&mut r)? as usize;
    let num_zero = next_u64(&mut r)? as usize;
    let mut true_zero_groups = BTreeSet::new();
    for _ in 0..num_zero {
        true_zero_groups.insert(next_u64(&mut r)? as usize);
    }
    let read_f = |count: usize, r: &mut dyn Read| -> Result<Vec<F>> {
        let mut out = Vec::with_capacity(count);
        let mut buf = [0u8; 8];
        for _ in 0..count {
            r.read_exact(&mut buf)?;
            out.push(F::lit(f64::from_le_bytes(buf)));
        }
        Ok(out)
    };
    let x = read_f(n, &mut r)?;
    let y = read_f(rows, &mut r)?;
    let a = read_f(rows * n, &mut r)?;
    Ok(SyntheticInstance {
        problem: LeastSquaresProblem::new(a, rows, n, y)?,
        partition: GroupPartition::equal(n, num_groups)?,
        x_star: Parameters::new(x),
        true_zero_groups,
    })
}
