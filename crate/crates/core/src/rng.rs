//! Reproducible per-trial random sources.
//!
//! Trial `i` of a run with master seed `s` always draws from ChaCha8 seeded
//! with `s` on stream `i`, so results do not depend on thread count or on
//! the order in which trials are scheduled.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::groups::HeisenbergPoly;

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// `len` integers drawn uniformly from `[-height, height]`.
pub fn random_coeffs(rng: &mut impl Rng, len: usize, height: i64) -> Vec<BigInt> {
    (0..len)
        .map(|_| BigInt::from(rng.gen_range(-height..=height)))
        .collect()
}

pub fn random_heisenberg(rng: &mut impl Rng, p: u32, height: i64) -> Result<HeisenbergPoly> {
    let len = (p as usize).pow(3);
    HeisenbergPoly::from_flat(p, random_coeffs(rng, len, height))
}
