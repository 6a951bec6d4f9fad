use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seeded, platform-independent generator owned by one engine.
#[derive(Clone, Debug)]
pub struct RandomSource {
    rng: ChaCha8Rng,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        RandomSource { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// Exactly uniform on `[0, k)`; `rand` rejects out-of-zone draws instead of reducing modulo `k`.
    pub fn uniform_below(&mut self, k: usize) -> usize {
        assert!(k > 0, "uniform_below(0)");
        self.rng.random_range(0..k)
    }
}
