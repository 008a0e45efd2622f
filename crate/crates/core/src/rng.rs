//! Seeded random streams and inverse-CDF sampling.
//!
//! Every random consumer derives its own ChaCha stream from a master seed,
//! a domain tag, and an index, so results do not depend on the order in
//! which parallel work is scheduled.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

pub type StreamRng = ChaCha8Rng;

/// Domain tags for [`substream`].
pub mod domain {
    pub const TRIAL: u64 = 1;
    pub const CODEBOOK: u64 = 2;
    pub const RESTART: u64 = 3;
    pub const STRATEGY_SAMPLE: u64 = 4;
    pub const CHANNEL: u64 = 5;
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes `(master, domain, index)` into a 64-bit seed.
pub fn derive_seed(master: u64, domain: u64, index: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ domain) ^ index)
}

pub fn substream(master: u64, domain: u64, index: u64) -> StreamRng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, domain, index))
}

/// Draws an index from `probs` by inverse CDF over the stored order.
///
/// Entries equal to zero are never returned, even under rounding.
pub fn sample_index<R: Rng + ?Sized>(probs: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    let mut last = None;
    for (i, &p) in probs.iter().enumerate() {
        if p > 0.0 {
            acc += p;
            last = Some(i);
            if u < acc {
                return i;
            }
        }
    }
    last.expect("distribution has positive mass")
}

/// A draw from the symmetric Dirichlet(1) law on `n` points.
pub fn dirichlet_ones<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let draws: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = draws.iter().sum();
    draws.into_iter().map(|d| d / total).collect()
}
