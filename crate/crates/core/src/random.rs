//! Seeded random words for the randomized checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::word::{Generator, Letter, Word};

/// Deterministic source of random words over a fixed alphabet.
pub struct WordSampler {
    rng: ChaCha8Rng,
    alphabet: Vec<Generator>,
}

impl WordSampler {
    pub fn new(seed: u64, alphabet: Vec<Generator>) -> Self {
        WordSampler { rng: ChaCha8Rng::seed_from_u64(seed), alphabet }
    }

    /// Independent sampler for sub-task `stream` of the same seed.
    pub fn split(seed: u64, stream: u64, alphabet: Vec<Generator>) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        WordSampler { rng, alphabet }
    }

    /// Reduced word obtained from `len ≤ max_len` uniformly chosen letters.
    pub fn word(&mut self, max_len: usize) -> Word {
        if self.alphabet.is_empty() {
            return Word::identity();
        }
        let len = self.rng.random_range(0..=max_len);
        let letters: Vec<Letter> = (0..len)
            .map(|_| {
                let g = self.alphabet[self.rng.random_range(0..self.alphabet.len())];
                Letter::new(g, if self.rng.random_bool(0.5) { 1 } else { -1 })
            })
            .collect();
        Word::reduce(letters)
    }
}
