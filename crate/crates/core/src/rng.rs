//! Portable seeded random numbers.
//!
//! The stream is fully specified so other implementations can reproduce it:
//!
//! * generator: xoshiro256++, state filled from the 64-bit seed by SplitMix64
//!   (the reference `seed_from_u64` procedure);
//! * uniform `[0, 1)`: the top 53 bits of one output times `2^-53`;
//! * normals: Box–Muller on two uniforms `u1, u2`, giving
//!   `√(-2 ln(1 - u1)) · (cos 2πu2, sin 2πu2)`; both values are used, as the
//!   real and imaginary part of one complex Gaussian;
//! * integer below `n`: the high 64 bits of `output · n`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand_xoshiro::rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

#[derive(Debug, Clone)]
pub struct Rng64(Xoshiro256PlusPlus);

impl Rng64 {
    pub fn seed(seed: u64) -> Self {
        Self(Xoshiro256PlusPlus::seed_from_u64(seed))
    }

    /// Independent stream `index` derived from `seed`.
    pub fn stream(seed: u64, index: u64) -> Self {
        Self::seed(seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn below(&mut self, n: usize) -> usize {
        ((u128::from(self.next_u64()) * n as u128) >> 64) as usize
    }

    pub fn normal_pair(&mut self) -> (f64, f64) {
        let u1 = self.uniform();
        let u2 = self.uniform();
        let r = (-2.0 * (1.0 - u1).ln()).sqrt();
        let (s, c) = (TAU * u2).sin_cos();
        (r * c, r * s)
    }

    /// Real and imaginary parts independent standard normals.
    pub fn complex_gaussian(&mut self) -> Complex64 {
        let (re, im) = self.normal_pair();
        Complex64::new(re, im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let mut a = Rng64::seed(7);
        let mut b = Rng64::seed(7);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn streams_differ() {
        assert_ne!(Rng64::stream(7, 0).next_u64(), Rng64::stream(7, 1).next_u64());
    }

    #[test]
    fn uniform_range_and_below() {
        let mut r = Rng64::seed(1);
        for _ in 0..10_000 {
            let u = r.uniform();
            assert!((0.0..1.0).contains(&u));
            assert!(r.below(5) < 5);
        }
    }

    #[test]
    fn normal_moments() {
        let mut r = Rng64::seed(3);
        let n = 200_000;
        let (mut sum, mut sq) = (0.0, 0.0);
        for _ in 0..n {
            let (a, b) = r.normal_pair();
            sum += a + b;
            sq += a * a + b * b;
        }
        let mean = sum / (2 * n) as f64;
        let var = sq / (2 * n) as f64 - mean * mean;
        assert!(mean.abs() < 0.01);
        assert!((var - 1.0).abs() < 0.01);
    }
}
