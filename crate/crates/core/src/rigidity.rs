//! Rigidity of rotations and interval exchanges, small consecutive separation,
//! and the zero–infinity probe for `liminf s_n d(x_n, y)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagnostics::{TheoremTag, Verdict};
use crate::error::{Error, Result};
use crate::geometry::{wrap_dist, CirclePoint};
use crate::sequences::{IetSpec, RotationNumber};

/// `liminf` proxies below this count as rigid.
pub const RIGIDITY_THRESHOLD: f64 = 1e-3;

/// Tail suprema of `n d(x_n, x_{n+1})` below this count as small separation.
pub const SMALL_SEP_THRESHOLD: f64 = 0.1;

pub const DICHOTOMY_ZERO: f64 = 0.01;
pub const DICHOTOMY_LARGE: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RigiditySample {
    pub n: u64,
    /// `n ∫ d(T^n x, x) dx`.
    pub value: f64,
    /// Bound on `|value − estimate|`; zero for closed forms.
    pub error_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RigidityCurve {
    pub samples: Vec<RigiditySample>,
    pub liminf_proxy: f64,
    pub verdict: Verdict,
    pub theorem: TheoremTag,
}

fn curve(samples: Vec<RigiditySample>) -> Result<RigidityCurve> {
    if samples.is_empty() {
        return Err(Error::Parameter("rigidity needs a nonempty n grid".into()));
    }
    let liminf_proxy = samples.iter().map(|s| s.value).fold(f64::INFINITY, f64::min);
    Ok(RigidityCurve {
        samples,
        liminf_proxy,
        verdict: if liminf_proxy < RIGIDITY_THRESHOLD { Verdict::NotBcEvidence } else { Verdict::Inconclusive },
        theorem: TheoremTag::QuantitativeRigidity,
    })
}

/// For a rotation `d(T^n x, x) = ‖n α‖` for every `x`, so the value is `n ‖n α‖`.
pub fn rotation_rigidity(alpha: RotationNumber, n_grid: &[u64]) -> Result<RigidityCurve> {
    curve(
        n_grid
            .iter()
            .map(|&n| RigiditySample {
                n,
                value: n as f64 * alpha.norm_of_multiple(n as u128),
                error_bound: 0.0,
            })
            .collect(),
    )
}

/// Midpoint-rule estimate of `n ∫ d(x + nα, x) dx` on `grid_size` cells.
pub fn rotation_rigidity_grid(alpha: RotationNumber, n: u64, grid_size: usize) -> f64 {
    let shift = alpha.frac_of_multiple(n as u128);
    let total: f64 = (0..grid_size)
        .map(|c| {
            let x = CirclePoint::new((c as f64 + 0.5) / grid_size as f64);
            wrap_dist(x.rotate(shift), x)
        })
        .sum();
    n as f64 * total / grid_size as f64
}

/// Midpoint-rule estimate of `n ∫ d(T^n x, x) dx` for an interval exchange.
///
/// `T^n` has at most `m n` discontinuities and `d(T^n x, x)` is constant between
/// them, so the integral is off by at most `m n / grid_size`.
pub fn iet_rigidity(spec: &IetSpec, n_grid: &[u64], grid_size: usize) -> Result<RigidityCurve> {
    if grid_size < 1000 {
        return Err(Error::Parameter(format!("IET rigidity needs at least 1000 cells, got {grid_size}")));
    }
    spec.validate()?;
    if n_grid.is_empty() {
        return Err(Error::Parameter("rigidity needs a nonempty n grid".into()));
    }
    let map = spec.map();
    let m = spec.interval_count() as f64;
    let mut wanted: Vec<u64> = n_grid.to_vec();
    wanted.sort_unstable();
    wanted.dedup();
    let top = *wanted.last().expect("nonempty");
    // per cell, the distances d(T^n x, x) at each wanted n
    let per_cell: Vec<Vec<f64>> = (0..grid_size)
        .into_par_iter()
        .map(|c| {
            let x0 = CirclePoint::new((c as f64 + 0.5) / grid_size as f64);
            let mut x = x0;
            let mut out = Vec::with_capacity(wanted.len());
            let mut next = 0;
            for n in 1..=top {
                x = map.apply(x);
                while next < wanted.len() && wanted[next] == n {
                    out.push(wrap_dist(x, x0));
                    next += 1;
                }
            }
            if wanted[0] == 0 {
                out.insert(0, 0.0);
            }
            out
        })
        .collect();
    let mut integrals = vec![0.0; wanted.len()];
    for row in &per_cell {
        for (acc, d) in integrals.iter_mut().zip(row) {
            *acc += d;
        }
    }
    let g = grid_size as f64;
    curve(
        n_grid
            .iter()
            .map(|&n| {
                let k = wanted.binary_search(&n).expect("present");
                let nf = n as f64;
                RigiditySample {
                    n,
                    value: nf * integrals[k] / g,
                    error_bound: nf * m * nf / g,
                }
            })
            .collect(),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmallSepCheck {
    /// `(n, n d(x_n, x_{n+1}))` on the requested grid.
    pub samples: Vec<(usize, f64)>,
    /// `(10^k, sup over 10^k ≤ n < 10^{k+1} of n d(x_n, x_{n+1}))` for complete decades.
    pub decade_sups: Vec<(usize, f64)>,
    /// Supremum over the last complete decade.
    pub tail_sup: f64,
    pub verdict: Verdict,
    pub theorem: TheoremTag,
}

fn consecutive(points: &[CirclePoint], n: usize) -> f64 {
    n as f64 * wrap_dist(points[n - 1], points[n])
}

/// `n d(x_n, x_{n+1})` on a grid plus decade suprema over every index.
///
/// Verdict: not-BC evidence when the decade suprema from `10^2` on are decreasing
/// and the last one is below `0.1`.
pub fn small_sep_check(points: &[CirclePoint], n_grid: &[usize]) -> Result<SmallSepCheck> {
    if let Some(&n) = n_grid.iter().find(|&&n| n == 0 || n >= points.len()) {
        return Err(Error::Input(format!(
            "n = {n} needs x_n and x_(n+1); {} points available",
            points.len()
        )));
    }
    let samples = n_grid.iter().map(|&n| (n, consecutive(points, n))).collect();
    let last_n = points.len() - 1;
    let mut decade_sups = Vec::new();
    let mut lo = 1usize;
    while lo * 10 - 1 <= last_n {
        let hi = lo * 10;
        let sup = (lo..hi).into_par_iter().map(|n| consecutive(points, n)).reduce(|| 0.0, f64::max);
        decade_sups.push((lo, sup));
        lo = hi;
    }
    let tail_sup = decade_sups.last().map_or(f64::INFINITY, |d| d.1);
    let watched: Vec<f64> = decade_sups.iter().filter(|d| d.0 >= 100).map(|d| d.1).collect();
    let decreasing = !watched.is_empty() && watched.windows(2).all(|w| w[1] < w[0]);
    Ok(SmallSepCheck {
        samples,
        decade_sups,
        tail_sup,
        verdict: if decreasing && tail_sup < SMALL_SEP_THRESHOLD { Verdict::NotBcEvidence } else { Verdict::Inconclusive },
        theorem: TheoremTag::SmallSeparation,
    })
}

/// The scaling `s_n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Scaling {
    /// `s_n = n^exponent`.
    Power { exponent: f64 },
    /// `s_n = n ln(n + 1)`.
    NLogN,
}

impl Scaling {
    pub const LINEAR: Scaling = Scaling::Power { exponent: 1.0 };

    pub fn at(self, n: usize) -> f64 {
        let x = n as f64;
        match self {
            Scaling::Power { exponent } => x.powf(exponent),
            Scaling::NLogN => x * (x + 1.0).ln(),
        }
    }

    pub fn describe(self) -> String {
        match self {
            Scaling::Power { exponent: 1.0 } => "s_n = n".into(),
            Scaling::Power { exponent } => format!("s_n = n^{exponent}"),
            Scaling::NLogN => "s_n = n ln(n+1)".into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DichotomyClass {
    NearZero,
    Intermediate,
    Large,
}

impl DichotomyClass {
    pub fn of(estimate: f64) -> Self {
        if estimate < DICHOTOMY_ZERO {
            DichotomyClass::NearZero
        } else if estimate > DICHOTOMY_LARGE {
            DichotomyClass::Large
        } else {
            DichotomyClass::Intermediate
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DichotomyProbe {
    pub scaling: String,
    pub y_samples: Vec<CirclePoint>,
    pub horizon: usize,
    /// `min s_n d(x_n, y)` over the last decade `horizon/10 < n ≤ horizon`, per `y`.
    pub liminf_estimates: Vec<f64>,
    /// Running minima at decades `10, 100, …` up to the horizon, per `y`.
    pub running_minima: Vec<Vec<(usize, f64)>>,
    pub classes: Vec<DichotomyClass>,
    pub near_zero_fraction: f64,
    pub large_fraction: f64,
    pub theorem: TheoremTag,
}

/// Running minima of `s_n d(x_n, y)` for each sample `y`.
pub fn dichotomy_probe(
    points: &[CirclePoint],
    scaling: Scaling,
    y_samples: &[CirclePoint],
    horizon: usize,
) -> Result<DichotomyProbe> {
    if horizon == 0 || horizon > points.len() {
        return Err(Error::Input(format!("horizon {horizon} exceeds the {} available points", points.len())));
    }
    if y_samples.is_empty() {
        return Err(Error::Parameter("dichotomy probe needs at least one y".into()));
    }
    let scale: Vec<f64> = (1..=horizon).map(|n| scaling.at(n)).collect();
    let tail_from = horizon / 10;
    let per_y: Vec<(Vec<(usize, f64)>, f64)> = y_samples
        .par_iter()
        .map(|&y| {
            let mut out = Vec::new();
            let mut best = f64::INFINITY;
            let mut tail = f64::INFINITY;
            let mut checkpoint = 10usize;
            for n in 1..=horizon {
                let v = scale[n - 1] * wrap_dist(points[n - 1], y);
                best = best.min(v);
                if n > tail_from {
                    tail = tail.min(v);
                }
                if n == checkpoint || n == horizon {
                    out.push((n, best));
                    if n == checkpoint {
                        checkpoint = checkpoint.saturating_mul(10);
                    }
                }
            }
            (out, tail)
        })
        .collect();
    let (running_minima, liminf_estimates): (Vec<_>, Vec<_>) = per_y.into_iter().unzip();
    let classes: Vec<DichotomyClass> = liminf_estimates.iter().map(|&e| DichotomyClass::of(e)).collect();
    let k = y_samples.len() as f64;
    let count = |c: DichotomyClass| classes.iter().filter(|&&x| x == c).count() as f64 / k;
    Ok(DichotomyProbe {
        scaling: scaling.describe(),
        y_samples: y_samples.to_vec(),
        horizon,
        near_zero_fraction: count(DichotomyClass::NearZero),
        large_fraction: count(DichotomyClass::Large),
        liminf_estimates,
        running_minima,
        classes,
        theorem: TheoremTag::ZeroInfinityDichotomy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::to_points;

    #[test]
    fn half_rotation_is_periodic() {
        let c = rotation_rigidity(RotationNumber::ratio(1, 2).unwrap(), &[2, 4]).unwrap();
        assert_eq!(c.liminf_proxy, 0.0);
        assert_eq!(c.verdict, Verdict::NotBcEvidence);
    }

    #[test]
    fn grid_estimate_matches_closed_form() {
        let g = RotationNumber::golden();
        for n in [1u64, 5, 89, 1000] {
            let closed = n as f64 * g.norm_of_multiple(n as u128);
            assert!((rotation_rigidity_grid(g, n, 1000) - closed).abs() < 1e-9);
        }
    }

    #[test]
    fn identity_iet_is_rigid() {
        let spec = IetSpec::identity(vec![0.3, 0.7]).unwrap();
        let c = iet_rigidity(&spec, &[1, 10, 100], 1000).unwrap();
        assert!(c.samples.iter().all(|s| s.value == 0.0));
        assert!(iet_rigidity(&spec, &[1], 999).is_err());
    }

    #[test]
    fn two_interval_matches_rotation() {
        let beta = 0.381_966_011_250_105_1;
        let spec = IetSpec::rotation(beta).unwrap();
        let alpha = RotationNumber::from_f64(1.0 - beta).unwrap();
        let ns = [1u64, 3, 13, 55];
        let iet = iet_rigidity(&spec, &ns, 2000).unwrap();
        let rot = rotation_rigidity(alpha, &ns).unwrap();
        for (a, b) in iet.samples.iter().zip(&rot.samples) {
            assert!((a.value - b.value).abs() <= a.error_bound + 1e-9, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn constant_sequence_grows() {
        let pts = to_points(&[0.3; 1000]);
        let y = to_points(&[0.8]);
        let probe = dichotomy_probe(&pts, Scaling::LINEAR, &y, 1000).unwrap();
        assert_eq!(probe.running_minima[0].last().unwrap().1, 0.5);
        assert_eq!(probe.liminf_estimates[0], 101.0 * 0.5);
        let probe = dichotomy_probe(&to_points(&[0.3; 100_000]), Scaling::Power { exponent: 2.0 }, &y, 100_000).unwrap();
        assert_eq!(probe.classes[0], DichotomyClass::Large);
    }

    #[test]
    fn small_sep_bounds() {
        let pts = to_points(&[0.1; 50]);
        assert!(small_sep_check(&pts, &[50]).is_err());
        let c = small_sep_check(&pts, &[1, 49]).unwrap();
        assert_eq!(c.samples, vec![(1, 0.0), (49, 0.0)]);
        assert_eq!(c.decade_sups, vec![(1, 0.0)]);
    }
}
