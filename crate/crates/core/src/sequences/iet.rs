//! Interval exchange transformations of `[0, 1)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::CirclePoint;

const LENGTH_SUM_TOL: f64 = 1e-12;

/// Lengths `λ_1..λ_m` and a 1-based permutation: interval `i` is moved to
/// position `permutation[i-1]` in the image.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IetSpec {
    pub lengths: Vec<f64>,
    pub permutation: Vec<usize>,
}

impl IetSpec {
    pub fn new(lengths: Vec<f64>, permutation: Vec<usize>) -> Result<Self> {
        let spec = IetSpec { lengths, permutation };
        spec.validate()?;
        Ok(spec)
    }

    /// The two-interval exchange `(β, 1 − β)` with swapped order: rotation by `1 − β`.
    pub fn rotation(beta: f64) -> Result<Self> {
        IetSpec::new(vec![beta, 1.0 - beta], vec![2, 1])
    }

    pub fn identity(lengths: Vec<f64>) -> Result<Self> {
        let m = lengths.len();
        IetSpec::new(lengths, (1..=m).collect())
    }

    pub fn interval_count(&self) -> usize {
        self.lengths.len()
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.lengths.len();
        if m == 0 {
            return Err(Error::Parameter("IET needs at least one interval".into()));
        }
        if self.permutation.len() != m {
            return Err(Error::Parameter(format!(
                "IET permutation has {} entries for {m} intervals",
                self.permutation.len()
            )));
        }
        if let Some(l) = self.lengths.iter().find(|l| !(l.is_finite() && **l > 0.0)) {
            return Err(Error::Parameter(format!("IET lengths must be positive, got {l}")));
        }
        let sum: f64 = self.lengths.iter().sum();
        if (sum - 1.0).abs() > LENGTH_SUM_TOL {
            return Err(Error::Parameter(format!("IET lengths sum to {sum}, expected 1")));
        }
        let mut seen = vec![false; m];
        for &p in &self.permutation {
            if p == 0 || p > m || seen[p - 1] {
                return Err(Error::Parameter(format!(
                    "IET permutation {:?} is not a bijection of 1..={m}",
                    self.permutation
                )));
            }
            seen[p - 1] = true;
        }
        Ok(())
    }

    /// Precomputes the piecewise translation. `spec` must already be validated.
    pub fn map(&self) -> IetMap {
        let m = self.lengths.len();
        let mut starts = Vec::with_capacity(m + 1);
        let mut acc = 0.0;
        for &l in &self.lengths {
            starts.push(acc);
            acc += l;
        }
        starts.push(acc);
        // image start of interval i = total length of intervals placed before it
        let mut by_position = vec![0usize; m];
        for (i, &p) in self.permutation.iter().enumerate() {
            by_position[p - 1] = i;
        }
        let mut image_start = vec![0.0; m];
        let mut acc = 0.0;
        for &i in &by_position {
            image_start[i] = acc;
            acc += self.lengths[i];
        }
        let shifts = (0..m).map(|i| image_start[i] - starts[i]).collect();
        IetMap { starts, shifts }
    }
}

/// A ready-to-apply interval exchange.
#[derive(Debug, Clone)]
pub struct IetMap {
    starts: Vec<f64>,
    shifts: Vec<f64>,
}

impl IetMap {
    #[inline]
    pub fn apply(&self, x: CirclePoint) -> CirclePoint {
        let t = x.value();
        let i = self.starts[1..self.starts.len() - 1].partition_point(|&s| s <= t);
        CirclePoint::new(t + self.shifts[i])
    }

    /// Forward orbit `x0, T x0, T² x0, …` of length `n`.
    pub fn orbit(&self, x0: CirclePoint, n: usize) -> Vec<CirclePoint> {
        let mut out = Vec::with_capacity(n);
        let mut x = x0;
        for _ in 0..n {
            out.push(x);
            x = self.apply(x);
        }
        out
    }

    /// `T^n x`.
    pub fn iterate(&self, x: CirclePoint, n: u64) -> CirclePoint {
        (0..n).fold(x, |y, _| self.apply(y))
    }

    pub fn discontinuities(&self) -> &[f64] {
        &self.starts[1..self.starts.len() - 1]
    }
}

/// Applies `spec` once to `x`.
pub fn iet_apply(spec: &IetSpec, x: CirclePoint) -> Result<CirclePoint> {
    spec.validate()?;
    Ok(spec.map().apply(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_interval_example() {
        let spec = IetSpec::new(vec![0.2, 0.3, 0.5], vec![3, 2, 1]).unwrap();
        let y = iet_apply(&spec, CirclePoint::new(0.1)).unwrap();
        assert!((y.value() - 0.9).abs() < 1e-15);
        let y = iet_apply(&spec, CirclePoint::new(0.3)).unwrap();
        assert!((y.value() - 0.6).abs() < 1e-15);
        let y = iet_apply(&spec, CirclePoint::new(0.6)).unwrap();
        assert!((y.value() - 0.1).abs() < 1e-15);
    }

    #[test]
    fn two_interval_is_rotation() {
        let beta = 0.3;
        let map = IetSpec::rotation(beta).unwrap().map();
        for x in [0.0, 0.1, 0.29, 0.3, 0.75, 0.999] {
            let y = map.apply(CirclePoint::new(x)).value();
            let expected = CirclePoint::new(x + 1.0 - beta).value();
            assert!((y - expected).abs() < 1e-15, "{x}: {y} vs {expected}");
        }
    }

    #[test]
    fn identity_fixes_points() {
        let map = IetSpec::identity(vec![0.25, 0.25, 0.5]).unwrap().map();
        for x in [0.0, 0.2, 0.5, 0.9] {
            assert_eq!(map.apply(CirclePoint::new(x)).value(), x);
        }
    }

    #[test]
    fn validation() {
        assert!(IetSpec::new(vec![0.5, 0.4], vec![2, 1]).is_err());
        assert!(IetSpec::new(vec![0.5, 0.5], vec![1, 1]).is_err());
        assert!(IetSpec::new(vec![0.5, 0.5], vec![1]).is_err());
        assert!(IetSpec::new(vec![1.5, -0.5], vec![2, 1]).is_err());
    }

    #[test]
    fn orbit_starts_at_x0() {
        let map = IetSpec::rotation(0.5).unwrap().map();
        let orbit = map.orbit(CirclePoint::new(0.1), 3);
        assert_eq!(orbit[0].value(), 0.1);
        assert!((orbit[1].value() - 0.6).abs() < 1e-15);
        assert!((orbit[2].value() - 0.1).abs() < 1e-15);
    }
}
