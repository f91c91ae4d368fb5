//! Seeded random streams.
//!
//! Every random instance is drawn from a ChaCha20 stream so that the draws
//! can be reproduced outside Rust:
//!
//! * the 256-bit key is four little-endian words produced by SplitMix64
//!   started at `seed`;
//! * the ChaCha stream id is the instance index;
//! * `uniform()` takes the next 64-bit output, keeps the top 53 bits and
//!   scales by 2^-53, giving the half-open interval [0, 1);
//! * `normal()` is Box-Muller on two consecutive uniforms `u1`, `u2`
//!   (cosine branch only): `sqrt(-2 ln(1 - u1)) * cos(2 pi u2)`.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

pub(crate) fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone)]
pub struct Stream {
    inner: ChaCha20Rng,
}

impl Stream {
    /// Stream `index` of the generator keyed by `seed`.
    pub fn new(seed: u64, index: u64) -> Self {
        let mut state = seed;
        let mut key = [0u8; 32];
        for chunk in key.chunks_exact_mut(8) {
            chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
        }
        let mut inner = ChaCha20Rng::from_seed(key);
        inner.set_stream(index);
        Self { inner }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform draw in [0, 1).
    pub fn uniform(&mut self) -> f64 {
        (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform draw in [lo, hi).
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    pub fn normal(&mut self) -> f64 {
        let u1 = self.uniform();
        let u2 = self.uniform();
        (-2.0 * (1.0 - u1).ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    pub fn uniform_vec(&mut self, n: usize, lo: f64, hi: f64) -> Vec<f64> {
        (0..n).map(|_| self.uniform_in(lo, hi)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let mut a = Stream::new(42, 3);
        let mut b = Stream::new(42, 3);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn streams_differ_by_index_and_seed() {
        let x = Stream::new(1, 0).next_u64();
        assert_ne!(x, Stream::new(1, 1).next_u64());
        assert_ne!(x, Stream::new(2, 0).next_u64());
    }

    #[test]
    fn uniform_is_half_open() {
        let mut s = Stream::new(7, 0);
        for _ in 0..10_000 {
            let u = s.uniform_in(-1.0, 0.0);
            assert!((-1.0..0.0).contains(&u));
        }
    }

    #[test]
    fn normal_moments() {
        let mut s = Stream::new(11, 0);
        let n = 200_000;
        let draws: Vec<f64> = (0..n).map(|_| s.normal()).collect();
        let mean = draws.iter().sum::<f64>() / n as f64;
        let var = draws.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / n as f64;
        assert!(mean.abs() < 0.01, "mean {mean}");
        assert!((var - 1.0).abs() < 0.02, "var {var}");
    }
}
