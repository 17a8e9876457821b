//! Seeded randomness and geometric sampling.
//!
//! All generators draw from [`RandomSource`], a ChaCha8 stream seeded from a
//! single `u64`. ChaCha output is specified bit-for-bit, so a seed reproduces
//! the same dataset on every platform. Independent streams for classes,
//! representatives and sweep cells come from [`derive_child_seed`], never
//! from sharing one source.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Name of the PRNG family, recorded in dataset metadata.
pub const RNG_NAME: &str = "chacha8";

#[derive(Debug, Clone)]
pub struct RandomSource {
    rng: ChaCha8Rng,
}

impl RandomSource {
    pub fn from_seed(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// One draw from N(0, 1) (ziggurat).
    pub fn standard_normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    /// Uniform on the closed interval `[lo, hi]`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        if lo == hi {
            return lo;
        }
        self.rng.random_range(lo..=hi)
    }

    /// Uniform on `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        self.rng.random::<f64>()
    }
}

pub fn sample_standard_normal(rng: &mut RandomSource) -> f64 {
    rng.standard_normal()
}

/// Uniformly distributed direction: a unit-norm vector of length `dim`.
pub fn sample_uniform_sphere(dim: usize, rng: &mut RandomSource) -> Result<Vec<f64>> {
    if dim == 0 {
        return Err(Error::invalid("sphere dimensionality must be at least 1"));
    }
    let mut v = vec![0.0; dim];
    loop {
        for x in v.iter_mut() {
            *x = rng.standard_normal();
        }
        let norm = norm(&v);
        if norm > 0.0 {
            v.iter_mut().for_each(|x| *x /= norm);
            return Ok(v);
        }
    }
}

/// Uniform point in the closed ball of the given radius, via the radial CDF:
/// direction × radius·U^(1/dim).
pub fn sample_uniform_ball(dim: usize, radius: f64, rng: &mut RandomSource) -> Result<Vec<f64>> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::invalid(format!(
            "ball radius must be positive, got {radius}"
        )));
    }
    let mut v = sample_uniform_sphere(dim, rng)?;
    let r = radius * rng.unit().powf(1.0 / dim as f64);
    v.iter_mut().for_each(|x| *x *= r);
    Ok(v)
}

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

fn splitmix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mixes a master seed with an ordered list of stream labels.
///
/// Each step is a bijection of the running state for a fixed label, so
/// distinct single labels under one master never collide, and the chained
/// form is order sensitive.
pub fn derive_child_seed(master: u64, labels: &[u64]) -> u64 {
    let mut h = splitmix(master ^ GOLDEN);
    for &label in labels {
        h = splitmix(h ^ splitmix(label.wrapping_add(GOLDEN)));
        h = h.wrapping_add(GOLDEN);
    }
    splitmix(h ^ labels.len() as u64)
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;

    #[test]
    fn normal_moments() {
        let mut rng = RandomSource::from_seed(42);
        let n = 100_000;
        let draws: Vec<f64> = (0..n).map(|_| sample_standard_normal(&mut rng)).collect();
        let mean = draws.iter().sum::<f64>() / n as f64;
        let var = draws.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!(mean.abs() < 0.02, "mean {mean}");
        assert!(var > 0.97 && var < 1.03, "var {var}");
    }

    #[test]
    fn same_seed_same_stream() {
        let mut a = RandomSource::from_seed(9);
        let mut b = RandomSource::from_seed(9);
        for _ in 0..100 {
            assert_eq!(a.standard_normal().to_bits(), b.standard_normal().to_bits());
        }
        let mut c = RandomSource::from_seed(1);
        let mut d = RandomSource::from_seed(2);
        assert_ne!(c.standard_normal(), d.standard_normal());
    }

    #[test]
    fn sphere_dim_one_is_sign() {
        let mut rng = RandomSource::from_seed(3);
        for _ in 0..100 {
            let v = sample_uniform_sphere(1, &mut rng).unwrap();
            assert!(v[0] == 1.0 || v[0] == -1.0);
        }
        assert!(sample_uniform_sphere(0, &mut rng).is_err());
    }

    #[test]
    fn sphere_unit_norm() {
        let mut rng = RandomSource::from_seed(4);
        for dim in [2, 3, 7, 50] {
            for _ in 0..200 {
                let v = sample_uniform_sphere(dim, &mut rng).unwrap();
                assert!((norm(&v) - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn sphere_angles_uniform_in_2d() {
        let mut rng = RandomSource::from_seed(5);
        let n = 100_000usize;
        let mut bins = [0usize; 8];
        for _ in 0..n {
            let v = sample_uniform_sphere(2, &mut rng).unwrap();
            let theta = v[1].atan2(v[0]) + std::f64::consts::PI;
            let k = ((theta / (2.0 * std::f64::consts::PI)) * 8.0) as usize;
            bins[k.min(7)] += 1;
        }
        let p = 1.0 / 8.0;
        let sigma = (n as f64 * p * (1.0 - p)).sqrt();
        for b in bins {
            assert!((b as f64 - 12_500.0).abs() <= 4.0 * sigma, "bins {bins:?}");
        }
    }

    #[test]
    fn ball_bounds_and_area_ratio() {
        let mut rng = RandomSource::from_seed(6);
        for _ in 0..1000 {
            let v = sample_uniform_ball(2, 75.0, &mut rng).unwrap();
            assert!(norm(&v) <= 75.0);
        }
        let n = 100_000;
        let inner = (0..n)
            .filter(|_| norm(&sample_uniform_ball(2, 1.0, &mut rng).unwrap()) <= 0.5)
            .count();
        let frac = inner as f64 / n as f64;
        assert!((frac - 0.25).abs() < 0.01, "fraction {frac}");
    }

    #[test]
    fn ball_one_dim_mean() {
        let mut rng = RandomSource::from_seed(7);
        let n = 10_000;
        let mut sum = 0.0;
        for _ in 0..n {
            let v = sample_uniform_ball(1, 2.0, &mut rng).unwrap();
            assert!(v[0].abs() <= 2.0);
            sum += v[0];
        }
        assert!((sum / n as f64).abs() < 0.05);
    }

    #[test]
    fn ball_rejects_bad_args() {
        let mut rng = RandomSource::from_seed(0);
        assert!(sample_uniform_ball(2, 0.0, &mut rng).is_err());
        assert!(sample_uniform_ball(2, -1.0, &mut rng).is_err());
        assert!(sample_uniform_ball(0, 1.0, &mut rng).is_err());
    }

    #[test]
    fn child_seeds() {
        assert_eq!(derive_child_seed(11, &[3]), derive_child_seed(11, &[3]));
        assert_ne!(derive_child_seed(0, &[0, 1]), derive_child_seed(0, &[1, 0]));
        assert_ne!(derive_child_seed(0, &[0]), derive_child_seed(0, &[0, 0]));
        let mut seen = HashSet::with_capacity(1_000_000);
        for i in 0..1_000_000u64 {
            assert!(seen.insert(derive_child_seed(123, &[i])));
        }
    }
}
