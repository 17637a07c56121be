//! Seeded randomness helpers. Everything in the library that samples does so
//! through a `ChaCha8Rng` derived from a caller-supplied `u64` seed, so runs
//! are reproducible bit-for-bit across platforms and thread counts.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Mixes a seed with stream tags (SplitMix64 finalizer), so independent
/// sub-streams can be derived from one user seed without correlation.
pub(crate) fn mix_seed(seed: u64, tag_a: u64, tag_b: u64) -> u64 {
    let mut z = seed
        .wrapping_add(0x9e37_79b9_7f4a_7c15u64.wrapping_mul(tag_a.wrapping_add(1)))
        .wrapping_add(0x2545_f491_4f6c_dd1du64.wrapping_mul(tag_b.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub(crate) fn rng_from(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub(crate) fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}

/// Standard complex Gaussian (unit variance per real component).
pub(crate) fn complex_gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(standard_normal(rng), standard_normal(rng))
}

pub(crate) fn complex_gaussian_vec(rng: &mut ChaCha8Rng, dim: usize) -> Vec<Complex64> {
    (0..dim).map(|_| complex_gaussian(rng)).collect()
}

/// Uniform point on the unit circle.
pub(crate) fn unimodular(rng: &mut ChaCha8Rng) -> Complex64 {
    let theta = rng.random::<f64>() * std::f64::consts::TAU;
    Complex64::new(theta.cos(), theta.sin())
}

/// Uniform point of the open disk of the given radius.
pub(crate) fn disk_point(rng: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    let r = radius * rng.random::<f64>().sqrt();
    unimodular(rng) * r
}
