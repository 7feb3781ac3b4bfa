//! Seeded randomness.
//!
//! All sampling uses ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded through
//! `SeedableRng::seed_from_u64`, which is specified by `rand_core` and gives
//! the same stream on every platform. Monte Carlo trial `i` of a run with base
//! seed `s` uses seed `s ^ i`.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type SwRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SwRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn trial_seed(base: u64, trial: u64) -> u64 {
    base ^ trial
}

/// Uniform on `[0, 1)` from the top 53 bits of one 64-bit draw.
pub fn uniform(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Number of failures before the first success of independent
/// Bernoulli(`p`) trials, `0 < p ≤ 1`, by inversion.
pub fn geometric_gap(rng: &mut impl RngCore, log_q: f64) -> u64 {
    if log_q == f64::NEG_INFINITY {
        return 0;
    }
    let v = 1.0 - uniform(rng);
    let g = libm::floor(libm::log(v) / log_q);
    if g >= u64::MAX as f64 {
        u64::MAX
    } else {
        g as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let mut a = rng_from_seed(42);
        let mut b = rng_from_seed(42);
        let xs: Vec<u64> = (0..8).map(|_| a.next_u64()).collect();
        let ys: Vec<u64> = (0..8).map(|_| b.next_u64()).collect();
        assert_eq!(xs, ys);
        let mut c = rng_from_seed(43);
        assert_ne!(xs[0], c.next_u64());
    }

    #[test]
    fn uniform_in_unit_interval() {
        let mut r = rng_from_seed(1);
        for _ in 0..10_000 {
            let u = uniform(&mut r);
            assert!((0.0..1.0).contains(&u));
        }
    }

    #[test]
    fn geometric_gap_mean() {
        let p: f64 = 0.2;
        let log_q = (-p).ln_1p();
        let mut r = rng_from_seed(9);
        let t = 200_000;
        let mean = (0..t)
            .map(|_| geometric_gap(&mut r, log_q) as f64)
            .sum::<f64>()
            / t as f64;
        // E = (1 − p)/p = 4, sd = sqrt(1 − p)/p ≈ 4.47
        assert!((mean - 4.0).abs() < 4.0 * 4.47 / (t as f64).sqrt());
        assert_eq!(geometric_gap(&mut r, f64::NEG_INFINITY), 0);
    }
}
