//! Fixed instances for the solver benchmarks.

use nsw_core::generate::{random_instance, GenParams};
use nsw_core::Instance;

/// A seeded random instance with half of the pairs big.
pub fn fixture(n: usize, m: usize, p: u64, q: u64, seed: u64) -> Instance {
    random_instance(&GenParams {
        n,
        m,
        p,
        q,
        big_prob: (1, 2),
        seed,
    })
    .expect("valid fixture parameters")
}
