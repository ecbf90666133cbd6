//! Deterministic PRNG used for all random ensembles.
//!
//! SplitMix64, defined by its update equations so an alternate implementation
//! in any language reproduces the streams bit-for-bit:
//!
//! ```text
//! state <- state + 0x9E3779B97F4A7C15            (mod 2^64)
//! z <- state
//! z <- (z XOR (z >> 30)) * 0xBF58476D1CE4E5B9    (mod 2^64)
//! z <- (z XOR (z >> 27)) * 0x94D049BB133111EB    (mod 2^64)
//! output <- z XOR (z >> 31)
//! ```
//!
//! `next_f64` maps the top 53 bits to `[0, 1)`; `next_symmetric` maps to
//! `[-1, 1)` as `2u - 1`. Matrices are filled row-major; symmetric tensors
//! are filled row-major and then symmetrized as `(A + A^T)/2`; complex
//! vectors draw the real part before the imaginary part of each entry.

use crate::linalg::{symmetrize, CVector, C64, RMatrix, RVector};

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[-1, 1)`.
    pub fn next_symmetric(&mut self) -> f64 {
        2.0 * self.next_f64() - 1.0
    }

    /// Row-major matrix with entries uniform in `[-1, 1)`.
    pub fn matrix(&mut self, rows: usize, cols: usize) -> RMatrix {
        let mut m = RMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = self.next_symmetric();
            }
        }
        m
    }

    /// Random symmetric matrix `(A + A^T)/2`.
    pub fn symmetric(&mut self, n: usize) -> RMatrix {
        symmetrize(&self.matrix(n, n))
    }

    /// Random symmetric traceless matrix.
    pub fn symmetric_traceless(&mut self, n: usize) -> RMatrix {
        let mut m = self.symmetric(n);
        let shift = m.trace() / n as f64;
        for i in 0..n {
            m[(i, i)] -= shift;
        }
        m
    }

    pub fn vector(&mut self, n: usize) -> RVector {
        RVector::from_fn(n, |_, _| self.next_symmetric())
    }

    /// Complex vector, real part drawn before imaginary part of each entry.
    pub fn cvector(&mut self, n: usize) -> CVector {
        CVector::from_fn(n, |_, _| {
            let re = self.next_symmetric();
            let im = self.next_symmetric();
            C64::new(re, im)
        })
    }

    /// A point uniform inside `domain`, shrunk by `margin` on both ends.
    pub fn point_in(&mut self, domain: &[(f64, f64)], margin: f64) -> Vec<f64> {
        domain
            .iter()
            .map(|&(lo, hi)| {
                let span = hi - lo;
                let a = lo + margin * span;
                let b = hi - margin * span;
                a + (b - a) * self.next_f64()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_stream() {
        // First outputs for seed 0, checkable against any SplitMix64 port.
        let mut r = SplitMix64::new(0);
        assert_eq!(r.next_u64(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(r.next_u64(), 0x6E78_9E6A_A1B9_65F4);
        assert_eq!(r.next_u64(), 0x06C4_5D18_8009_454F);
    }

    #[test]
    fn f64_in_unit_interval_and_deterministic() {
        let mut a = SplitMix64::new(42);
        let mut b = SplitMix64::new(42);
        for _ in 0..100 {
            let x = a.next_f64();
            assert!((0.0..1.0).contains(&x));
            assert_eq!(x, b.next_f64());
        }
    }

    #[test]
    fn traceless_is_traceless() {
        let mut r = SplitMix64::new(7);
        let m = r.symmetric_traceless(5);
        assert!(m.trace().abs() < 1e-14);
        assert!((m.clone() - m.transpose()).norm() == 0.0);
    }
}
