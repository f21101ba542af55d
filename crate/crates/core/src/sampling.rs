//! Seeded random draws shared by Monte Carlo estimators and property suites.
//!
//! All generators are ChaCha8 streams derived from a `u64` seed, so every
//! result is reproducible bit-for-bit across platforms and thread counts.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cauchy_core::CauchyParam;

/// Deterministic generator for `seed`.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent deterministic stream `stream` of `seed` (used for parallel chunks).
pub fn rng_stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Uniform draw in `[lo, hi)`.
pub fn uniform<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

/// Log-uniform draw in `[lo, hi)`, `0 < lo < hi`.
pub fn log_uniform<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    (uniform(rng, lo.ln(), hi.ln())).exp()
}

/// Cauchy parameter with uniform location and log-uniform scale.
pub fn random_param<R: Rng>(rng: &mut R, loc: (f64, f64), scale: (f64, f64)) -> CauchyParam {
    let l = uniform(rng, loc.0, loc.1);
    let s = log_uniform(rng, scale.0, scale.1);
    CauchyParam::new(l, s).expect("positive finite scale")
}

/// `n` seeded parameters.
pub fn random_points(seed: u64, n: usize, loc: (f64, f64), scale: (f64, f64)) -> Vec<CauchyParam> {
    let mut r = rng(seed);
    (0..n).map(|_| random_param(&mut r, loc, scale)).collect()
}

/// `n` seeded parameter pairs.
pub fn random_pairs(seed: u64, n: usize, loc: (f64, f64), scale: (f64, f64)) -> Vec<(CauchyParam, CauchyParam)> {
    let mut r = rng(seed);
    (0..n).map(|_| (random_param(&mut r, loc, scale), random_param(&mut r, loc, scale))).collect()
}

/// Inverse-CDF Cauchy draw `l + s tan(π(U - 1/2))`.
pub fn sample_cauchy<R: Rng>(rng: &mut R, p: &CauchyParam) -> f64 {
    let u: f64 = rng.random();
    p.location() + p.scale() * (PI * (u - 0.5)).tan()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_deterministic_and_distinct() {
        let a: Vec<f64> = (0..4).map(|_| rng_stream(7, 1).random::<f64>()).collect();
        assert!(a.windows(2).all(|w| w[0] == w[1]));
        let mut s1 = rng_stream(7, 1);
        let mut s2 = rng_stream(7, 2);
        assert_ne!(s1.random::<u64>(), s2.random::<u64>());
    }

    #[test]
    fn log_uniform_in_range() {
        let mut r = rng(3);
        for _ in 0..1000 {
            let v = log_uniform(&mut r, 0.1, 10.0);
            assert!((0.1..10.0).contains(&v));
        }
    }
}
