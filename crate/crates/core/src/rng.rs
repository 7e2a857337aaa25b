use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seeded source of uniform variates.
///
/// Backed by ChaCha8 seeded through `seed_from_u64`, so a seed yields the
/// same stream on every platform for a given version of `rand_chacha`.
/// Implements [`RngCore`] so it can drive `rand_distr` samplers directly.
#[derive(Debug, Clone)]
pub struct RandomStream {
    inner: ChaCha8Rng,
}

impl RandomStream {
    pub fn from_seed(seed: u64) -> Self {
        Self {
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Uniform variate in `[0, 1)` with 53 bits of precision.
    pub fn next_uniform(&mut self) -> f64 {
        (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

impl RngCore for RandomStream {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for one run of a sweep, a function of the master seed and the
/// run's (sweep index, replicate index) only.
pub fn derive_seed(master_seed: u64, sweep_index: u64, replicate: u64) -> u64 {
    mix64(mix64(mix64(master_seed) ^ sweep_index) ^ replicate.rotate_left(32))
}
