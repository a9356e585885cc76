//! Portable random primitives.
//!
//! All randomness comes from `ChaCha8Rng` (ChaCha with 8 rounds, as
//! implemented by `rand_chacha`), consumed 64 bits at a time through the
//! helpers below so that the derivation of every sample is fully specified:
//!
//! * unit uniform: `(next_u64 >> 11) * 2^-53`, in `[0, 1)`
//! * symmetric uniform: `2u - 1`, in `[-1, 1)`
//! * bounded integer in `0..k`: `(next_u64 * k) >> 64` (128-bit product)
//! * shuffle: Fisher-Yates from the last index down, swapping `i` with a
//!   bounded draw in `0..=i`

use rand::RngCore;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Generator for an independent stream of the same seed.
pub fn seeded_stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[inline]
pub fn unit(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

#[inline]
pub fn symmetric(rng: &mut impl RngCore) -> f64 {
    2.0 * unit(rng) - 1.0
}

#[inline]
pub fn bounded(rng: &mut impl RngCore, k: usize) -> usize {
    ((rng.next_u64() as u128 * k as u128) >> 64) as usize
}

pub fn shuffle<T>(items: &mut [T], rng: &mut impl RngCore) {
    for i in (1..items.len()).rev() {
        let j = bounded(rng, i + 1);
        items.swap(i, j);
    }
}
