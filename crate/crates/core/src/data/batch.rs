use serde::{Deserialize, Serialize};

use super::rng::{seeded_stream, shuffle};
use crate::error::{invalid, Result};

/// Shuffled-epoch sampling: each epoch draws a fresh permutation of
/// `0..N` from `(seed, epoch)` and cuts it into consecutive batches; the last
/// batch of an epoch may be short.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatchSchedule {
    pub num_instances: usize,
    pub batch_size: usize,
    pub seed: u64,
}

impl BatchSchedule {
    pub fn new(num_instances: usize, batch_size: usize, seed: u64) -> Result<Self> {
        if num_instances == 0 || batch_size == 0 {
            return Err(invalid("num_instances and batch_size must be positive"));
        }
        Ok(Self { num_instances, batch_size: batch_size.min(num_instances), seed })
    }

    pub fn steps_per_epoch(&self) -> usize {
        self.num_instances.div_ceil(self.batch_size)
    }

    /// The epoch's permutation of instance indices.
    pub fn permutation(&self, epoch: u64) -> Vec<usize> {
        let mut perm: Vec<usize> = (0..self.num_instances).collect();
        let mut rng = seeded_stream(self.seed, epoch);
        shuffle(&mut perm, &mut rng);
        perm
    }

    /// Batch `step` of `epoch`.
    pub fn next_batch(&self, epoch: u64, step: usize) -> Result<Vec<usize>> {
        if step >= self.steps_per_epoch() {
            return Err(invalid(format!("step {step} beyond {} steps per epoch", self.steps_per_epoch())));
        }
        let perm = self.permutation(epoch);
        let start = step * self.batch_size;
        let end = (start + self.batch_size).min(self.num_instances);
        Ok(perm[start..end].to_vec())
    }
}

/// Walks a schedule batch by batch, rolling into the next epoch's
/// permutation when the current one is exhausted.
#[derive(Debug, Clone)]
pub struct BatchCursor {
    schedule: BatchSchedule,
    epoch: u64,
    step: usize,
    perm: Vec<usize>,
}

impl BatchCursor {
    pub fn new(schedule: BatchSchedule) -> Self {
        Self::at_epoch(schedule, 0)
    }

    pub fn at_epoch(schedule: BatchSchedule, epoch: u64) -> Self {
        let perm = schedule.permutation(epoch);
        Self { schedule, epoch, step: 0, perm }
    }

    /// Epoch the next batch will come from.
    pub fn epoch(&self) -> u64 {
        self.epoch
    }

    /// Step within the current epoch of the next batch.
    pub fn step(&self) -> usize {
        self.step
    }

    pub fn schedule(&self) -> &BatchSchedule {
        &self.schedule
    }

    /// Returns the next batch and advances.
    pub fn next_batch(&mut self) -> &[usize] {
        if self.step >= self.schedule.steps_per_epoch() {
            self.epoch += 1;
            self.step = 0;
            self.perm = self.schedule.permutation(self.epoch);
        }
        let start = self.step * self.schedule.batch_size;
        let end = (start + self.schedule.batch_size).min(self.schedule.num_instances);
        self.step += 1;
        &self.perm[start..end]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn four_by_two_covers_everything() {
        let s = BatchSchedule::new(4, 2, 7).unwrap();
        let mut all: Vec<usize> = (0..2).flat_map(|k| s.next_batch(0, k).unwrap()).collect();
        all.sort_unstable();
        assert_eq!(all, vec![0, 1, 2, 3]);
    }

    #[test]
    fn same_seed_same_permutation() {
        let s = BatchSchedule::new(50, 8, 99).unwrap();
        assert_eq!(s.permutation(3), s.permutation(3));
        assert_ne!(s.permutation(3), s.permutation(4));
    }

    #[test]
    fn short_last_batch() {
        let s = BatchSchedule::new(5, 2, 0).unwrap();
        let sizes: Vec<usize> = (0..s.steps_per_epoch()).map(|k| s.next_batch(0, k).unwrap().len()).collect();
        assert_eq!(sizes, vec![2, 2, 1]);
        assert!(s.next_batch(0, 3).is_err());
    }

    #[test]
    fn cursor_matches_schedule() {
        let s = BatchSchedule::new(7, 3, 11).unwrap();
        let mut c = BatchCursor::new(s);
        for epoch in 0..3 {
            for step in 0..s.steps_per_epoch() {
                assert_eq!(c.next_batch().to_vec(), s.next_batch(epoch, step).unwrap());
            }
        }
    }

    proptest! {
        #[test]
        fn epoch_is_a_partition(n in 1usize..200, b in 1usize..50, seed in any::<u64>(), epoch in 0u64..20) {
            let s = BatchSchedule::new(n, b, seed).unwrap();
            let mut seen = vec![0u8; n];
            for k in 0..s.steps_per_epoch() {
                for i in s.next_batch(epoch, k).unwrap() { seen[i] += 1; }
            }
            prop_assert!(seen.iter().all(|&c| c == 1));
        }
    }
}
