//! Seeded randomness shared by the estimators and the Monte Carlo harness.
//!
//! The generator is fixed here and nowhere else. ChaCha8 output is specified
//! bit-for-bit, so seeded runs reproduce across platforms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

/// The generator every simulation uses.
pub type SimRng = ChaCha8Rng;

/// Recorded in run manifests.
pub const GENERATOR_ID: &str = "ChaCha8Rng (rand_chacha 0.9) via SeedableRng::seed_from_u64";

/// Weyl increment used to spread trial indices across the seed space.
pub const SEED_SPREAD: u64 = 0x9E37_79B9_7F4A_7C15;

/// Below this many trials a binomial is drawn by summing Bernoulli trials.
pub const BERNOULLI_SUM_LIMIT: u64 = 64;

pub fn rng_from_seed(seed: u64) -> SimRng {
    SimRng::seed_from_u64(seed)
}

/// Seed of trial `index` under `master`.
pub fn trial_seed(master: u64, index: u64) -> u64 {
    master ^ index.wrapping_mul(SEED_SPREAD)
}

/// Seed of parallel task `index` under `master`.
pub fn task_seed(master: u64, index: u64) -> u64 {
    master ^ index
}

/// One draw from `Binomial(trials, prob)`.
///
/// `prob` outside `[0, 1]` is clamped so degenerate success probabilities
/// never touch the generator.
pub fn draw_binomial<R: Rng + ?Sized>(rng: &mut R, trials: u64, prob: f64) -> u64 {
    if trials == 0 || prob <= 0.0 {
        return 0;
    }
    if prob >= 1.0 {
        return trials;
    }
    if trials < BERNOULLI_SUM_LIMIT {
        (0..trials).filter(|_| rng.random::<f64>() < prob).count() as u64
    } else {
        // Valid for prob in (0, 1), checked above.
        Binomial::new(trials, prob)
            .expect("binomial parameters validated")
            .sample(rng)
    }
}

/// One draw from `Multinomial(trials, probs)`, realised as conditional
/// binomials in the order given.
///
/// The last category takes whatever remains, so `probs` only needs to sum
/// to one up to rounding.
pub fn draw_multinomial<R: Rng + ?Sized, const K: usize>(rng: &mut R, trials: u64, probs: [f64; K]) -> [u64; K] {
    let mut counts = [0u64; K];
    let mut remaining = trials;
    let mut mass = 1.0f64;
    for (k, &prob) in probs.iter().enumerate().take(K.saturating_sub(1)) {
        let conditional = if mass > 0.0 { (prob / mass).clamp(0.0, 1.0) } else { 0.0 };
        let drawn = draw_binomial(rng, remaining, conditional);
        counts[k] = drawn;
        remaining -= drawn;
        mass -= prob;
    }
    if K > 0 {
        counts[K - 1] = remaining;
    }
    counts
}
