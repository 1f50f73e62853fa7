//! Subsequence deletion, small perturbations and empirical measures.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::CirclePoint;

/// Keeps `points[i-1]` for each 1-based index `i` with `keep(i)`, in order.
pub fn delete_subsequence<F: Fn(usize) -> bool>(points: &[CirclePoint], keep: F) -> Vec<CirclePoint> {
    points
        .iter()
        .enumerate()
        .filter(|(i, _)| keep(i + 1))
        .map(|(_, p)| *p)
        .collect()
}

/// Moves each `x_i` by `±magnitudes(i)` with a seeded random sign.
///
/// `budget` is the caller's bound on `Σ magnitudes(i)^p`; the partial sum over
/// the given points must not exceed it.
pub fn perturb_lp<F: Fn(usize) -> f64>(
    points: &[CirclePoint],
    p: f64,
    magnitudes: F,
    budget: f64,
    seed: u64,
) -> Result<Vec<CirclePoint>> {
    if !(p.is_finite() && p > 0.0) {
        return Err(Error::Parameter(format!("perturbation exponent must be positive, got {p}")));
    }
    let mags: Vec<f64> = (1..=points.len()).map(&magnitudes).collect();
    if let Some(m) = mags.iter().find(|m| !(m.is_finite() && **m >= 0.0)) {
        return Err(Error::Parameter(format!("perturbation magnitudes must be nonnegative, got {m}")));
    }
    let total: f64 = mags.iter().map(|m| m.powf(p)).sum();
    if total > budget {
        return Err(Error::Parameter(format!(
            "perturbation budget exceeded: partial sum {total} > {budget}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(points
        .iter()
        .zip(&mags)
        .map(|(x, &m)| {
            let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
            x.rotate(sign * m)
        })
        .collect())
}

/// Histogram of `(1/N) Σ δ_{x_i}` on `bin_count` equal bins.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalMeasure {
    pub bin_count: usize,
    pub masses: Vec<f64>,
}

impl EmpiricalMeasure {
    pub fn total(&self) -> f64 {
        self.masses.iter().sum()
    }
}

pub fn empirical_measure(points: &[CirclePoint], bin_count: usize) -> Result<EmpiricalMeasure> {
    if points.is_empty() {
        return Err(Error::Input("empirical measure of an empty sequence".into()));
    }
    if bin_count == 0 {
        return Err(Error::Parameter("bin count must be positive".into()));
    }
    let mut counts = vec![0u64; bin_count];
    for p in points {
        let b = ((p.value() * bin_count as f64) as usize).min(bin_count - 1);
        counts[b] += 1;
    }
    let n = points.len() as f64;
    Ok(EmpiricalMeasure {
        bin_count,
        masses: counts.into_iter().map(|c| c as f64 / n).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{to_points, wrap_dist};

    #[test]
    fn deletion_examples() {
        let pts = to_points(&[0.1, 0.2, 0.3, 0.4]);
        assert_eq!(delete_subsequence(&pts, |_| true), pts);
        assert_eq!(delete_subsequence(&pts, |i| i % 2 == 0), to_points(&[0.2, 0.4]));
        let hundred: Vec<_> = (0..100).map(|i| CirclePoint::new(i as f64 / 100.0)).collect();
        let is_square = |i: usize| {
            let r = (i as f64).sqrt().round() as usize;
            r * r == i
        };
        assert_eq!(delete_subsequence(&hundred, |i| !is_square(i)).len(), 90);
    }

    #[test]
    fn zero_perturbation_is_identity() {
        let pts = to_points(&[0.1, 0.7, 0.99]);
        assert_eq!(perturb_lp(&pts, 1.0, |_| 0.0, 0.0, 5).unwrap(), pts);
    }

    #[test]
    fn perturbation_respects_magnitudes() {
        let pts: Vec<_> = (0..1000).map(|i| CirclePoint::new(i as f64 * 0.37)).collect();
        let y = perturb_lp(&pts, 1.0, |i| 1.0 / (i * i) as f64, 1.7, 9).unwrap();
        let mut total = 0.0;
        for (i, (a, b)) in pts.iter().zip(&y).enumerate() {
            let d = wrap_dist(*a, *b);
            assert!(d <= 1.0 / ((i + 1) * (i + 1)) as f64 + 1e-15);
            total += d;
        }
        assert!(total <= std::f64::consts::PI.powi(2) / 6.0);
    }

    #[test]
    fn budget_is_enforced() {
        let pts = to_points(&[0.0; 100]);
        let err = perturb_lp(&pts, 1.0, |i| 1.0 / i as f64, 2.0, 0).unwrap_err();
        assert!(matches!(err, Error::Parameter(_)));
    }

    #[test]
    fn empirical_examples() {
        let m = empirical_measure(&to_points(&[0.3; 5]), 10).unwrap();
        assert_eq!(m.masses[3], 1.0);
        let grid: Vec<_> = (0..10).map(|k| CirclePoint::new(k as f64 / 10.0)).collect();
        let m = empirical_measure(&grid, 10).unwrap();
        assert!(m.masses.iter().all(|&x| (x - 0.1).abs() < 1e-15), "{:?}", m.masses);
        assert!((m.total() - 1.0).abs() < 1e-12);
    }
}
