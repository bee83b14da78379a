//! Seeded uniform Monte Carlo estimator, used as an independent oracle.

use crate::error::{Error, Result};
use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Uniform-sampling estimate of `∫_domain f` with its standard error.
///
/// Fully deterministic for a fixed `seed`. The domain must be a bounded box.
pub fn mc_oracle<F: Fn(&[f64]) -> f64>(
    f: F,
    domain: &[(f64, f64)],
    samples: u64,
    seed: u64,
) -> Result<(f64, f64)> {
    if domain.is_empty() || domain.len() > 8 {
        return Err(Error::DimensionError { dim: domain.len() });
    }
    let mut volume = 1.0;
    for &(a, b) in domain {
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(Error::DomainError { a, b });
        }
        volume *= b - a;
    }
    if samples < 2 {
        return Err(Error::InvalidParams("mc_oracle needs >= 2 samples".into()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dists: Vec<Uniform<f64>> = domain.iter().map(|&(a, b)| Uniform::new(a, b)).collect();
    let mut x = vec![0.0; domain.len()];

    // Welford running mean/variance keeps the pass single and stable
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for i in 0..samples {
        for (xi, d) in x.iter_mut().zip(&dists) {
            *xi = d.sample(&mut rng);
        }
        let v = f(&x);
        if !v.is_finite() {
            return Err(Error::NonFinite { x: x[0] });
        }
        let delta = v - mean;
        mean += delta / (i + 1) as f64;
        m2 += delta * (v - mean);
    }
    let var = m2 / (samples - 1) as f64;
    let sigma = volume * (var / samples as f64).sqrt();
    Ok((volume * mean, sigma))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_has_zero_sigma() {
        let (est, sigma) = mc_oracle(|_| 1.0, &[(0.0, 1.0), (0.0, 1.0)], 1000, 7).unwrap();
        assert!((est - 1.0).abs() < 1e-12);
        assert_eq!(sigma, 0.0);
    }

    #[test]
    fn linear_within_4_sigma() {
        let (est, sigma) = mc_oracle(|x| x[0], &[(0.0, 1.0)], 100_000, 42).unwrap();
        assert!((est - 0.5).abs() <= 4.0 * sigma, "est {est} sigma {sigma}");
    }

    #[test]
    fn deterministic_for_seed() {
        let a = mc_oracle(|x| x[0] * x[1], &[(0.0, 1.0), (0.0, 2.0)], 5000, 9).unwrap();
        let b = mc_oracle(|x| x[0] * x[1], &[(0.0, 1.0), (0.0, 2.0)], 5000, 9).unwrap();
        assert_eq!(a.0.to_bits(), b.0.to_bits());
    }
}
