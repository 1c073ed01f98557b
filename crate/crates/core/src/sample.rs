//! Seeded geometry sampling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::screw::Vec3;

/// Name recorded in reports so runs can be reproduced.
pub const GENERATOR: &str = "ChaCha8";

/// Mixes a base seed with a stream index (splitmix64 finalizer).
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.rng.random::<f64>()
    }

    /// Magnitude in `[lo, hi]` with a random sign.
    pub fn signed(&mut self, lo: f64, hi: f64) -> f64 {
        let m = self.uniform(lo, hi);
        if self.rng.random::<bool>() {
            m
        } else {
            -m
        }
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    /// Uniform on the unit sphere (rejection from the cube).
    pub fn unit_vector(&mut self) -> Vec3 {
        loop {
            let v = self.point();
            let n2 = v.norm_squared();
            if n2 > 1e-4 && n2 <= 1.0 {
                return v / libm::sqrt(n2);
            }
        }
    }

    /// Uniform in `[-1, 1]^3`.
    pub fn point(&mut self) -> Vec3 {
        Vec3::new(
            self.uniform(-1.0, 1.0),
            self.uniform(-1.0, 1.0),
            self.uniform(-1.0, 1.0),
        )
    }

    /// Random unit vector orthogonal to `d` (assumed unit).
    pub fn orthogonal_to(&mut self, d: &Vec3) -> Vec3 {
        loop {
            let v = self.unit_vector();
            let w = v - d * d.dot(&v);
            if w.norm() > 0.3 {
                return w.normalize();
            }
        }
    }

    /// Random unit vector making a sine of at least `min_sin` with `d`.
    pub fn away_from(&mut self, d: &Vec3, min_sin: f64) -> Vec3 {
        loop {
            let v = self.unit_vector();
            if v.cross(d).norm() >= min_sin {
                return v;
            }
        }
    }

    /// Random offset orthogonal to `d` with length in `[lo, hi]`.
    pub fn offset_from(&mut self, d: &Vec3, lo: f64, hi: f64) -> Vec3 {
        self.orthogonal_to(d) * self.uniform(lo, hi)
    }
}
