//! Seedable random streams.
//!
//! A [`RandomSource`] is a ChaCha8 generator keyed by a 64-bit seed and positioned on
//! one of its 2^64 independent streams. ChaCha output is fully specified, so an
//! identical `(seed, stream)` pair yields identical draws on every platform.
//! Substreams are derived from `(seed, stream, index)` only and never from the
//! parent's consumption state, so a child stream is the same no matter how many
//! draws the parent has already made.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// A deterministic, single-owner random stream.
#[derive(Clone, Debug)]
pub struct RandomSource {
    seed: u64,
    stream: u64,
    rng: ChaCha8Rng,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl RandomSource {
    /// Root stream for `seed`.
    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    /// Stream `stream` of the generator keyed by `seed`.
    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { seed, stream, rng }
    }

    /// Derive the substream with the given index.
    ///
    /// The child is keyed by a mix of this source's seed and stream, and positioned on
    /// stream `index`, so nested derivations never collide with their parents.
    pub fn derive(&self, index: u64) -> Self {
        let child_seed = splitmix64(self.seed ^ splitmix64(self.stream));
        Self::with_stream(child_seed, index)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Uniform draw in `[0, 1)` with 53 bits of precision.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// Uniform draw in `[low, high)`.
    pub fn uniform_in(&mut self, low: f64, high: f64) -> f64 {
        low + (high - low) * self.uniform()
    }

    /// Uniform index in `0..n`. Sampled over `u64` so the result does not depend on
    /// the platform's pointer width.
    ///
    /// Panics if `n == 0`.
    pub fn index(&mut self, n: usize) -> usize {
        assert!(n > 0, "index() needs a non-empty range");
        self.rng.random_range(0..n as u64) as usize
    }

    /// `true` with probability `p`.
    pub fn chance(&mut self, p: f64) -> bool {
        self.uniform() < p
    }
}

impl RngCore for RandomSource {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    fn draws(src: &mut RandomSource, n: usize) -> Vec<f64> {
        (0..n).map(|_| src.uniform()).collect()
    }

    #[test]
    fn derive_is_deterministic() {
        let root = RandomSource::new(7);
        let a = draws(&mut root.derive(0), 100);
        let b = draws(&mut root.derive(0), 100);
        assert_eq!(a, b);
    }

    #[test]
    fn distinct_indices_give_distinct_streams() {
        let root = RandomSource::new(7);
        let a = draws(&mut root.derive(0), 100);
        let b = draws(&mut root.derive(1), 100);
        assert_ne!(a, b);
        assert_ne!(a[0], b[0]);
    }

    #[test]
    fn derive_ignores_parent_consumption() {
        let mut root = RandomSource::new(11);
        let before = draws(&mut root.derive(3), 10);
        let _ = draws(&mut root, 57);
        let after = draws(&mut root.derive(3), 10);
        assert_eq!(before, after);
    }

    #[test]
    fn nested_derivation_differs_from_parent() {
        let root = RandomSource::new(5);
        let child = root.derive(0);
        assert_ne!(draws(&mut child.clone(), 20), draws(&mut root.clone(), 20));
        assert_ne!(
            draws(&mut child.derive(0), 20),
            draws(&mut child.clone(), 20)
        );
    }

    #[test]
    fn uniform_stays_in_half_open_unit_interval() {
        let mut src = RandomSource::new(7);
        let mut sum = 0.0;
        for _ in 0..1_000_000 {
            let v = src.uniform();
            assert!((0.0..1.0).contains(&v), "draw {v} outside [0, 1)");
            sum += v;
        }
        assert!((sum / 1e6 - 0.5).abs() < 2e-3);
    }

    #[test]
    fn index_covers_range() {
        let mut src = RandomSource::new(1);
        let mut seen = [0u32; 5];
        for _ in 0..5000 {
            seen[src.index(5)] += 1;
        }
        assert!(seen.iter().all(|&c| c > 800));
    }
}
