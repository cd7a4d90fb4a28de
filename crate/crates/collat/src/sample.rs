//! Deterministic vector samples used by the sampled checks.
//!
//! A sample is the full grid of vectors with entries in {0, 1, −1, 2}
//! (zero vector skipped, capped at 5000 vectors for ambient dimension
//! above 6), followed by seeded pseudorandom vectors with rational
//! entries p/q, p ∈ [−9, 9], q ∈ [1, 9]. Everything is a pure function
//! of (dim, random_count, seed), so repeated runs enumerate identical
//! vectors in identical order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::matrix::Vector;
use crate::scalar::{GaussianRational, Rational};

/// Grid digits in enumeration order.
const GRID_DIGITS: [i64; 4] = [0, 1, -1, 2];

/// Cap on grid vectors for ambient dimension above 6.
const GRID_CAP: usize = 5000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorSample {
    pub dim: usize,
    pub random_count: usize,
    pub seed: u64,
}

impl VectorSample {
    pub fn new(dim: usize, random_count: usize, seed: u64) -> Self {
        VectorSample {
            dim,
            random_count,
            seed,
        }
    }

    /// Grid only, no random tail.
    pub fn deterministic(dim: usize) -> Self {
        VectorSample {
            dim,
            random_count: 0,
            seed: 0,
        }
    }

    /// Number of nonzero grid vectors after the cap.
    pub fn grid_len(&self) -> usize {
        let full = 4usize
            .checked_pow(self.dim as u32)
            .map(|n| n - 1)
            .unwrap_or(usize::MAX);
        if self.dim > 6 {
            full.min(GRID_CAP)
        } else {
            full
        }
    }

    pub fn len(&self) -> usize {
        self.grid_len() + self.random_count
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All sample vectors: grid first (lexicographic, first coordinate most
    /// significant, digit order 0, 1, −1, 2, zero vector skipped), then the
    /// seeded random vectors.
    pub fn vectors(&self) -> Vec<Vector> {
        let mut out = Vec::with_capacity(self.len());
        let n = self.grid_len();
        for index in 1..=n as u64 {
            out.push(self.grid_vector(index));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        for _ in 0..self.random_count {
            out.push(random_vector(&mut rng, self.dim));
        }
        out
    }

    fn grid_vector(&self, index: u64) -> Vector {
        let mut v = vec![GaussianRational::zero(); self.dim];
        let mut idx = index;
        for c in (0..self.dim).rev() {
            let digit = (idx & 3) as usize;
            idx >>= 2;
            if digit != 0 {
                v[c] = GaussianRational::from_int(GRID_DIGITS[digit]);
            }
        }
        v
    }
}

/// One random vector with entries p/q, p ∈ [−9, 9], q ∈ [1, 9].
pub fn random_vector(rng: &mut ChaCha8Rng, dim: usize) -> Vector {
    (0..dim)
        .map(|_| {
            let p = rng.gen_range(-9i64..=9);
            let q = rng.gen_range(1i64..=9);
            GaussianRational::from_rational(Rational::new(p, q))
        })
        .collect()
}

/// One random scalar with the same entry distribution as [`random_vector`].
pub fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    let p = rng.gen_range(-9i64..=9);
    let q = rng.gen_range(1i64..=9);
    Rational::new(p, q)
}

/// Random Gaussian rational with small rational real and imaginary parts.
pub fn random_gaussian(rng: &mut ChaCha8Rng) -> GaussianRational {
    GaussianRational::new(random_rational(rng), random_rational(rng))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_counts_and_cap() {
        assert_eq!(VectorSample::deterministic(2).grid_len(), 15);
        assert_eq!(VectorSample::deterministic(4).grid_len(), 255);
        assert_eq!(VectorSample::deterministic(6).grid_len(), 4095);
        assert_eq!(VectorSample::deterministic(7).grid_len(), 5000);
    }

    #[test]
    fn grid_enumeration_order() {
        let s = VectorSample::deterministic(2);
        let v = s.vectors();
        // (0,1), (0,-1), (0,2), (1,0), (1,1), ...
        let ints = |v: &Vector| -> Vec<String> { v.iter().map(|x| x.to_string()).collect() };
        assert_eq!(ints(&v[0]), vec!["0", "1"]);
        assert_eq!(ints(&v[1]), vec!["0", "-1"]);
        assert_eq!(ints(&v[2]), vec!["0", "2"]);
        assert_eq!(ints(&v[3]), vec!["1", "0"]);
        assert_eq!(ints(&v[4]), vec!["1", "1"]);
    }

    #[test]
    fn random_tail_is_reproducible() {
        let a = VectorSample::new(3, 10, 42).vectors();
        let b = VectorSample::new(3, 10, 42).vectors();
        assert_eq!(a, b);
        let c = VectorSample::new(3, 10, 43).vectors();
        assert_ne!(a, c);
    }
}
