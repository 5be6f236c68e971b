//! Seeded randomness.
//!
//! All random fixtures come from ChaCha8 seeded through
//! `SeedableRng::seed_from_u64`, which is portable and stable across
//! platforms, so a given seed always yields the same bytes.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type SeededRng = ChaCha8Rng;

pub fn from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform sample in `[-1, 1)`.
pub fn symmetric(rng: &mut SeededRng) -> f64 {
    rng.gen_range(-1.0..1.0)
}

/// Complex number with both parts uniform in `[-1, 1)`.
pub fn complex(rng: &mut SeededRng) -> Complex64 {
    Complex64::new(symmetric(rng), symmetric(rng))
}

pub fn vec3(rng: &mut SeededRng) -> [f64; 3] {
    [symmetric(rng), symmetric(rng), symmetric(rng)]
}

pub fn cvec3(rng: &mut SeededRng) -> [Complex64; 3] {
    [complex(rng), complex(rng), complex(rng)]
}

/// Uniformly distributed unit vector.
pub fn unit_vec3(rng: &mut SeededRng) -> [f64; 3] {
    loop {
        let v = vec3(rng);
        let n2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
        if n2 > 1e-6 && n2 <= 1.0 {
            let n = n2.sqrt();
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}
