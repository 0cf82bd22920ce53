//! Inputs shared by the benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use prodtri::{apply_flip, enumerate_flips, phases, Triangulation};

/// Applies `steps` uniformly random flips starting from `start`.
pub fn random_walk(start: &Triangulation, steps: usize, seed: u64) -> Triangulation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = start.clone();
    for _ in 0..steps {
        let flips = enumerate_flips(&t);
        if flips.is_empty() {
            break;
        }
        let c = &flips[rng.gen_range(0..flips.len())];
        t = apply_flip(&t, c).expect("enumerated flip applies");
    }
    t
}

/// A scrambled triangulation of `Δ^3 x Δ^{n-1}`.
pub fn scrambled(n: usize, seed: u64) -> Triangulation {
    random_walk(&phases::staircase(n), 40 * n, seed)
}
