//! Lead and random reference summarizers.
//!
//! The random baseline is reproducible across implementations: the
//! generator is ChaCha8 seeded through `SeedableRng::seed_from_u64`, the
//! permutation is a Fisher–Yates shuffle running from the last position
//! down, and each bounded draw takes `next_u64` values, rejecting those at
//! or above the largest multiple of the bound, and reduces modulo the bound.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::preprocess::Sentence;
use crate::scorer::{take_budget, CompressionSpec, Summary};

/// Identifier of the sampling procedure described in the module docs.
pub const RANDOM_BASELINE_ALGORITHM: &str = "chacha8-fisher-yates-rejection-v1";

/// The first sentences of the document, up to the budget.
pub fn lead_baseline(sentences: &[Sentence], budget: CompressionSpec) -> Summary {
    let order: Vec<usize> = (0..sentences.len()).collect();
    Summary::assemble(take_budget(&order, sentences, budget), sentences, budget)
}

/// A uniformly random set of sentences within the budget, in source order.
pub fn random_baseline(sentences: &[Sentence], budget: CompressionSpec, seed: u64) -> Summary {
    let order = shuffled_indices(sentences.len(), seed);
    Summary::assemble(take_budget(&order, sentences, budget), sentences, budget)
}

fn below(rng: &mut ChaCha8Rng, bound: u64) -> u64 {
    debug_assert!(bound > 0);
    let zone = u64::MAX - u64::MAX % bound;
    loop {
        let v = rng.next_u64();
        if v < zone {
            return v % bound;
        }
    }
}

pub(crate) fn shuffled_indices(len: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..len).collect();
    for i in (1..len).rev() {
        let j = below(&mut rng, i as u64 + 1) as usize;
        order.swap(i, j);
    }
    order
}
