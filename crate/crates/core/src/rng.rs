use rand::seq::SliceRandom;
use rand::{Rng as _, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::SolveError;
use crate::set::IndexSet;

/// Seeded, splittable random source. Identical seeds and call sequences give
/// identical streams.
#[derive(Debug, Clone)]
pub struct Rng {
    seed: u64,
    inner: ChaCha8Rng,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng { seed, inner: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// A child generator whose seed is drawn from this stream.
    pub fn split(&mut self) -> Rng {
        Rng::new(self.inner.next_u64())
    }

    /// Uniform in `0..n`.
    pub fn below(&mut self, n: usize) -> usize {
        self.inner.gen_range(0..n)
    }

    /// Uniform in `lo..=hi`.
    pub fn range_u64(&mut self, lo: u64, hi: u64) -> u64 {
        self.inner.gen_range(lo..=hi)
    }

    /// Uniform in `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        self.inner.gen::<f64>()
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        items.shuffle(&mut self.inner);
    }
}

impl RngCore for Rng {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }
    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }
    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.inner.fill_bytes(dest)
    }
    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), rand::Error> {
        self.inner.try_fill_bytes(dest)
    }
}

/// Uniformly random `k`-subset of `universe`.
pub fn random_subset(rng: &mut Rng, universe: IndexSet, k: usize) -> Result<IndexSet, SolveError> {
    let mut elems: Vec<usize> = universe.iter().collect();
    if k > elems.len() {
        return Err(SolveError::TooLarge { what: "subset size", value: k, limit: elems.len() });
    }
    let (chosen, _) = elems.partial_shuffle(&mut rng.inner, k);
    Ok(chosen.iter().copied().collect())
}
