//! Counter-style randomness.
//!
//! Random fields draw every Fourier mode from a hash of `(seed, channel, k)`, so
//! a field generated on a coarse lattice is the exact low-frequency truncation
//! of the same field generated on a finer one. Monte Carlo paths get their own
//! seeds from [`path_seed`], which makes results independent of scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// One round of the SplitMix64 generator, used as a mixing function.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of path `index` under `base_seed`.
pub fn path_seed(base_seed: u64, index: u64) -> u64 {
    splitmix64(base_seed ^ splitmix64(index.wrapping_add(0x5851_F42D_4C95_7F2D)))
}

/// A ChaCha stream for the given seed.
pub fn stream(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub(crate) fn mix(h: u64, v: u64) -> u64 {
    splitmix64(h ^ v.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn unit_open(bits: u64) -> f64 {
    // (0, 1), never exactly zero
    ((bits >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

/// A pair of independent standard normals derived from `key` (Box-Muller).
pub fn hashed_normal_pair(key: u64) -> (f64, f64) {
    let u1 = unit_open(splitmix64(key));
    let u2 = unit_open(splitmix64(key ^ 0xD1B5_4A32_D192_ED03));
    let radius = (-2.0 * u1.ln()).sqrt();
    let angle = 2.0 * std::f64::consts::PI * u2;
    (radius * angle.cos(), radius * angle.sin())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hashed_normals_have_unit_variance() {
        let n = 20_000;
        let (mut s1, mut s2) = (0.0, 0.0);
        for i in 0..n {
            let (a, b) = hashed_normal_pair(mix(7, i));
            s1 += a + b;
            s2 += a * a + b * b;
        }
        let mean = s1 / (2 * n) as f64;
        let var = s2 / (2 * n) as f64 - mean * mean;
        assert!(mean.abs() < 0.03, "mean {mean}");
        assert!((var - 1.0).abs() < 0.05, "var {var}");
    }

    #[test]
    fn path_seeds_are_distinct() {
        let seeds: std::collections::HashSet<u64> = (0..1000).map(|i| path_seed(42, i)).collect();
        assert_eq!(seeds.len(), 1000);
    }
}
