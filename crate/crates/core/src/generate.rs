//! Seeded random instances.
//!
//! The stream is SplitMix64 seeded directly with the user seed. One draw is
//! consumed per (agent, good) pair in row-major order (agent outer, good
//! inner); the pair is big iff `draw / 2^64 < num / den`.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use thiserror::Error;

use crate::error::CoreError;
use crate::instance::Instance;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("probability {num}/{den} not in [0, 1]")]
    BadProbability { num: u64, den: u64 },
    #[error("generator requires m >= n (n={n}, m={m})")]
    TooFewGoods { n: usize, m: usize },
    #[error(transparent)]
    Core(#[from] CoreError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenParams {
    pub n: usize,
    pub m: usize,
    pub p: u64,
    pub q: u64,
    /// Probability numerator and denominator.
    pub big_prob: (u64, u64),
    pub seed: u64,
}

pub fn random_instance(params: &GenParams) -> Result<Instance, GenerateError> {
    let (num, den) = params.big_prob;
    if den == 0 || num > den {
        return Err(GenerateError::BadProbability { num, den });
    }
    if params.m < params.n {
        return Err(GenerateError::TooFewGoods {
            n: params.n,
            m: params.m,
        });
    }
    let mut rng = SplitMix64::seed_from_u64(params.seed);
    let threshold = (num as u128) << 64;
    let mut sets = vec![Vec::new(); params.n];
    for set in sets.iter_mut() {
        for good in 0..params.m {
            let draw = rng.next_u64() as u128;
            if draw * (den as u128) < threshold {
                set.push(good);
            }
        }
    }
    Ok(Instance::new(params.n, params.m, params.p, params.q, sets)?)
}
