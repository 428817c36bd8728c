#![allow(dead_code)]

use num::complex::Complex64;
use ptdirac::params::{derive_coeffs, PhysParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random physical parameters with `|K|` at least 5% of its natural scale and
/// `|λ|` kept 10% away from `v_f`, so that both ladder bases exist.
pub fn random_params(rng: &mut ChaCha8Rng) -> PhysParams {
    loop {
        let v_f = rng.random_range(0.5..2.0);
        let p = PhysParams {
            v_f,
            lambda: rng.random_range(-1.6..1.6) * v_f,
            k1: rng.random_range(-0.05..0.1),
            b0: rng.random_range(1.0..200.0),
            e: 1.0,
            c: 137.0,
            hbar: rng.random_range(0.5..2.0),
        };
        let k = derive_coeffs(&p).k_coef;
        if (p.lambda.abs() - v_f).abs() > 0.1 * v_f && k.abs() > 0.05 * p.k_scale() {
            return p;
        }
    }
}

/// Largest relative distance from each expected value to the nearest computed one.
pub fn worst_relative_error(computed: &[Complex64], expected: &[Complex64]) -> f64 {
    expected
        .iter()
        .map(|e| computed.iter().map(|c| (c - e).norm()).fold(f64::INFINITY, f64::min) / e.norm())
        .fold(0.0, f64::max)
}
