//! The middle-thirds Cantor set `K` with its natural probability measure `μ`.
//!
//! `μ([0, x])` is the Cantor function `F`. Balls are ambient intervals of
//! `[0, 1]` intersected with `K`, so every measure reduces to two evaluations
//! of `F`. `K` is Ahlfors regular of dimension `ω = log 2 / log 3`.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `log 2 / log 3`.
pub const OMEGA: f64 = std::f64::consts::LN_2 / 1.098_612_288_668_109_8;

pub const DEFAULT_DEPTH: u32 = 40;

/// Beyond this many ternary digits a double carries no information.
pub const MAX_DEPTH: u32 = 45;

/// Largest `m` with `3^m` below `2^53`; endpoints up to this level are recognized exactly.
const SNAP_LEVEL: u32 = 33;

fn check_depth(depth: u32) -> Result<()> {
    if depth == 0 || depth > MAX_DEPTH {
        return Err(Error::Parameter(format!(
            "ternary depth must lie in 1..={MAX_DEPTH}, got {depth}"
        )));
    }
    Ok(())
}

/// Cantor function of a ternary numerator `k / 3^m`, exact.
fn cdf_of_ternary(k: u64, m: u32) -> f64 {
    let mut digits = Vec::with_capacity(m as usize);
    let mut k = k;
    for _ in 0..m {
        digits.push((k % 3) as u8);
        k /= 3;
    }
    let mut f = 0.0;
    let mut w = 0.5;
    for &d in digits.iter().rev() {
        match d {
            1 => return f + w,
            2 => f += w,
            _ => {}
        }
        w *= 0.5;
    }
    f
}

/// `(k, m)` with `x == k / 3^m` as doubles, for the smallest such `m`.
fn snap_to_ternary(x: f64, max_level: u32) -> Option<(u64, u32)> {
    let mut s = 1.0f64;
    for m in 0..=max_level {
        let k = (x * s).round();
        if k / s == x {
            return Some((k as u64, m));
        }
        s *= 3.0;
    }
    None
}

/// The Cantor function `F(x) = μ([0, x])`, evaluated from the ternary digits of `x`.
///
/// Ternary rationals `k / 3^m` (as produced by dividing in double precision)
/// with `m ≤ min(depth, 33)` are evaluated exactly. Other inputs use the exact
/// ternary expansion of the double to `depth` digits, which is accurate to `2^-depth`.
pub fn cantor_cdf(x: f64, depth: u32) -> Result<f64> {
    check_depth(depth)?;
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("Cantor function needs x in [0, 1], got {x}")));
    }
    if x == 1.0 {
        return Ok(1.0);
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if let Some((k, m)) = snap_to_ternary(x, depth.min(SNAP_LEVEL)) {
        return Ok(cdf_of_ternary(k, m));
    }
    let bits = x.to_bits();
    let biased = ((bits >> 52) & 0x7ff) as i64;
    if biased == 0 {
        return Ok(0.0);
    }
    let mantissa = (bits & ((1u64 << 52) - 1)) | (1u64 << 52);
    // x = mantissa / 2^e
    let e = (1075 - biased) as u32;
    if e > 125 {
        // x < 2^-72 < 3^-45: every digit within depth is 0
        return Ok(0.0);
    }
    let mask = (1u128 << e) - 1;
    let mut r = mantissa as u128;
    let mut f = 0.0;
    let mut w = 0.5;
    for _ in 0..depth {
        r *= 3;
        let d = r >> e;
        r &= mask;
        match d {
            1 => return Ok(f + w),
            2 => f += w,
            _ => {}
        }
        w *= 0.5;
    }
    Ok(f)
}

/// `μ([a, b]) = F(b) − F(a)`.
pub fn cantor_interval_measure(a: f64, b: f64, depth: u32) -> Result<f64> {
    if a > b {
        return Err(Error::Parameter(format!("interval [{a}, {b}] has a > b")));
    }
    Ok((cantor_cdf(b, depth)? - cantor_cdf(a, depth)?).max(0.0))
}

/// `μ(B(center, radius))` for the ambient interval ball, clipped to `[0, 1]`.
pub fn cantor_ball_measure(center: f64, radius: f64, depth: u32) -> Result<f64> {
    let lo = (center - radius).max(0.0);
    let hi = (center + radius).min(1.0);
    if hi <= lo {
        return Ok(0.0);
    }
    cantor_interval_measure(lo, hi, depth)
}

/// A point of `K` written as `0.d_1 d_2 … d_m` with digits in `{0, 2}`,
/// optionally followed by an infinite tail of 2s (`0.0(2)` is `1/3`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct CantorPoint {
    digits: Vec<u8>,
    tail_twos: bool,
}

impl CantorPoint {
    pub fn new(digits: Vec<u8>, tail_twos: bool) -> Result<Self> {
        if let Some(d) = digits.iter().find(|&&d| d != 0 && d != 2) {
            return Err(Error::Parameter(format!("Cantor digits must be 0 or 2, found {d}")));
        }
        if digits.len() > MAX_DEPTH as usize {
            return Err(Error::Parameter(format!(
                "Cantor point has {} digits, at most {MAX_DEPTH} supported",
                digits.len()
            )));
        }
        Ok(CantorPoint { digits, tail_twos })
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn has_tail(&self) -> bool {
        self.tail_twos
    }

    /// The value as an exact fraction `k / 3^m`.
    pub fn ternary_fraction(&self) -> (u128, u32) {
        let m = self.digits.len() as u32;
        let k = self
            .digits
            .iter()
            .fold(0u128, |acc, &d| acc * 3 + d as u128)
            + self.tail_twos as u128;
        (k, m)
    }

    pub fn value(&self) -> f64 {
        let (k, m) = self.ternary_fraction();
        k as f64 / 3f64.powi(m as i32)
    }
}

impl fmt::Display for CantorPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.digits.is_empty() && !self.tail_twos {
            return write!(f, "0");
        }
        write!(f, "0.")?;
        for d in &self.digits {
            write!(f, "{d}")?;
        }
        if self.tail_twos {
            write!(f, "(2)")?;
        }
        Ok(())
    }
}

impl FromStr for CantorPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parameter(format!("not a Cantor digit string: `{s}`"));
        if s == "0" {
            return Ok(CantorPoint { digits: Vec::new(), tail_twos: false });
        }
        let body = s.strip_prefix("0.").ok_or_else(bad)?;
        let (body, tail) = match body.strip_suffix("(2)") {
            Some(b) => (b, true),
            None => (body, false),
        };
        let digits = body
            .chars()
            .map(|c| c.to_digit(10).map(|d| d as u8).ok_or_else(bad))
            .collect::<Result<Vec<_>>>()?;
        CantorPoint::new(digits, tail)
    }
}

impl TryFrom<String> for CantorPoint {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<CantorPoint> for String {
    fn from(p: CantorPoint) -> String {
        p.to_string()
    }
}

/// Endpoints of the construction intervals, by level then position:
/// `0, 1, 1/3, 2/3, 1/9, 2/9, 7/9, 8/9, …`.
pub fn cantor_endpoints(count: usize, depth: u32) -> Result<Vec<CantorPoint>> {
    check_depth(depth)?;
    if count == 0 {
        return Err(Error::Parameter("endpoint count must be at least 1".into()));
    }
    let mut out = Vec::with_capacity(count);
    out.push(CantorPoint { digits: Vec::new(), tail_twos: false });
    if count > 1 {
        out.push(CantorPoint { digits: Vec::new(), tail_twos: true });
    }
    let mut level = 1u32;
    while out.len() < count {
        if level > depth {
            return Err(Error::Parameter(format!(
                "{count} endpoints need more than {depth} ternary levels"
            )));
        }
        let prefixes = 1u64 << (level - 1);
        'level: for code in 0..prefixes {
            let mut prefix: Vec<u8> = (0..level - 1)
                .rev()
                .map(|b| if code >> b & 1 == 1 { 2 } else { 0 })
                .collect();
            let mut right = prefix.clone();
            prefix.push(0);
            right.push(2);
            for p in [CantorPoint { digits: prefix, tail_twos: true }, CantorPoint { digits: right, tail_twos: false }] {
                if out.len() == count {
                    break 'level;
                }
                out.push(p);
            }
        }
        level += 1;
    }
    Ok(out)
}

/// `μ(∪_{i≤N} B(x_i, (1/N)^{1/ω}) ∩ [a, b])`.
pub fn cantor_coverage(points: &[f64], n: usize, window: (f64, f64), depth: u32) -> Result<f64> {
    if n == 0 || n > points.len() {
        return Err(Error::Input(format!(
            "coverage at N = {n} needs N points, {} available",
            points.len()
        )));
    }
    let (a, b) = window;
    if !(0.0 <= a && a < b && b <= 1.0) {
        return Err(Error::Parameter(format!("window [{a}, {b}] must satisfy 0 <= a < b <= 1")));
    }
    let rho = (1.0 / n as f64).powf(1.0 / OMEGA);
    let mut segs: Vec<(f64, f64)> = points[..n]
        .iter()
        .map(|&x| ((x - rho).max(a), (x + rho).min(b)))
        .filter(|(lo, hi)| lo < hi)
        .collect();
    segs.sort_unstable_by(|p, q| p.0.total_cmp(&q.0));
    let mut merged: Vec<(f64, f64)> = Vec::with_capacity(segs.len());
    for (lo, hi) in segs {
        match merged.last_mut() {
            Some(cur) if lo <= cur.1 => cur.1 = cur.1.max(hi),
            _ => merged.push((lo, hi)),
        }
    }
    let masses = merged
        .par_iter()
        .map(|&(lo, hi)| cantor_interval_measure(lo, hi, depth))
        .collect::<Result<Vec<f64>>>()?;
    Ok(masses.iter().sum())
}

/// Coverage relative to `μ(J)` over an `N` grid and a list of windows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CantorCoverageScan {
    pub windows: Vec<(f64, f64)>,
    /// `rows[w][k]` is `(N_k, coverage / μ(J_w))`.
    pub rows: Vec<Vec<(usize, f64)>>,
    pub d_hat: f64,
}

pub fn cantor_coverage_scan(
    points: &[f64],
    n_grid: &[usize],
    windows: &[(f64, f64)],
    depth: u32,
) -> Result<CantorCoverageScan> {
    if n_grid.is_empty() || windows.is_empty() {
        return Err(Error::Parameter("coverage scan needs nonempty grids".into()));
    }
    let mut rows = Vec::with_capacity(windows.len());
    let mut d_hat = f64::INFINITY;
    for &(a, b) in windows {
        let mass = cantor_interval_measure(a, b, depth)?;
        if mass <= 0.0 {
            return Err(Error::Parameter(format!("window [{a}, {b}] misses the Cantor set")));
        }
        let row = n_grid
            .iter()
            .map(|&n| Ok((n, (cantor_coverage(points, n, (a, b), depth)? / mass).max(0.0) + 0.0)))
            .collect::<Result<Vec<_>>>()?;
        d_hat = row.iter().fold(d_hat, |m, &(_, r)| m.min(r));
        rows.push(row);
    }
    Ok(CantorCoverageScan { windows: windows.to_vec(), rows, d_hat })
}

/// A uniformly random point of `K` (digits i.i.d. in `{0, 2}`) to `depth` digits.
pub fn random_cantor_point<R: Rng>(rng: &mut R, depth: u32) -> CantorPoint {
    let digits = (0..depth).map(|_| if rng.random::<bool>() { 2 } else { 0 }).collect();
    CantorPoint { digits, tail_twos: false }
}

/// Empirical Ahlfors constant over random centers and log-uniform radii.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegularityEstimate {
    pub samples: usize,
    pub r_range: (f64, f64),
    /// `max(μ(B)/r^ω, r^ω/μ(B))` over all samples.
    pub constant: f64,
    pub worst_upper: f64,
    pub worst_lower: f64,
}

pub fn cantor_ball_regularity(
    samples: usize,
    r_range: (f64, f64),
    seed: u64,
    depth: u32,
) -> Result<RegularityEstimate> {
    check_depth(depth)?;
    let (r_lo, r_hi) = r_range;
    let floor = 3f64.powi(-(depth as i32));
    if !(r_lo > 0.0 && r_lo <= r_hi && r_lo >= floor * (1.0 - 1e-12) && r_hi <= 1.0 / 3.0 + 1e-15) {
        return Err(Error::Parameter(format!(
            "radius range [{r_lo}, {r_hi}] must lie within [3^-{depth}, 1/3]"
        )));
    }
    if samples == 0 {
        return Err(Error::Parameter("regularity estimate needs at least one sample".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws: Vec<(f64, f64)> = (0..samples)
        .map(|_| {
            let y = random_cantor_point(&mut rng, depth).value();
            let t: f64 = rng.random();
            (y, r_lo * (r_hi / r_lo).powf(t))
        })
        .collect();
    let ratios = draws
        .par_iter()
        .map(|&(y, r)| {
            let mass = cantor_ball_measure(y, r, depth)?;
            Ok(mass / r.powf(OMEGA))
        })
        .collect::<Result<Vec<f64>>>()?;
    let worst_upper = ratios.iter().cloned().fold(0.0, f64::max);
    let worst_lower = ratios.iter().map(|q| 1.0 / q).fold(0.0, f64::max);
    Ok(RegularityEstimate {
        samples,
        r_range,
        constant: worst_upper.max(worst_lower),
        worst_upper,
        worst_lower,
    })
}

/// Lower bound `(1/2)^{2ω+1} (1/C) (1/2)^ω d/(2C)` on the limsup-set density.
pub fn beta_bound(d: f64, c: f64, omega: f64) -> Result<f64> {
    if !(d > 0.0 && c > 0.0 && omega > 0.0) {
        return Err(Error::Parameter(format!(
            "bound needs positive d, C, ω; got ({d}, {c}, {omega})"
        )));
    }
    Ok(0.5f64.powf(2.0 * omega + 1.0) / c * 0.5f64.powf(omega) * d / (2.0 * c))
}

/// Paired partial sums `Σ a_i` and `Σ μ(B(x_i, a_i^{1/ω}))` at checkpoints.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationRow {
    pub index: usize,
    pub radii_sum: f64,
    pub measure_sum: f64,
}

pub fn calibration_sums<F>(points: &[f64], radii: F, checkpoints: &[usize], depth: u32) -> Result<Vec<CalibrationRow>>
where
    F: Fn(usize) -> f64 + Sync,
{
    let horizon = checkpoints.iter().copied().max().unwrap_or(0);
    if horizon > points.len() {
        return Err(Error::Input(format!(
            "calibration to {horizon} needs that many points, {} available",
            points.len()
        )));
    }
    let terms = (1..=horizon)
        .into_par_iter()
        .map(|i| {
            let a = radii(i);
            Ok((a, cantor_ball_measure(points[i - 1], a.powf(1.0 / OMEGA), depth)?))
        })
        .collect::<Result<Vec<(f64, f64)>>>()?;
    let mut rows = Vec::new();
    let (mut s, mut t) = (0.0, 0.0);
    let mut sorted = checkpoints.to_vec();
    sorted.sort_unstable();
    let mut next = sorted.iter().peekable();
    for (i, (a, m)) in terms.iter().enumerate() {
        s += a;
        t += m;
        while next.peek() == Some(&&(i + 1)) {
            rows.push(CalibrationRow { index: i + 1, radii_sum: s, measure_sum: t });
            next.next();
        }
    }
    Ok(rows)
}

/// The Cantor set as an Ahlfors regular space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CantorSpace {
    pub omega: f64,
    pub depth: u32,
    pub regularity_constant: Option<f64>,
}

impl CantorSpace {
    pub fn new(depth: u32) -> Result<Self> {
        check_depth(depth)?;
        Ok(CantorSpace { omega: OMEGA, depth, regularity_constant: None })
    }

    pub fn calibrate(&mut self, samples: usize, r_range: (f64, f64), seed: u64) -> Result<f64> {
        let est = cantor_ball_regularity(samples, r_range, seed, self.depth)?;
        self.regularity_constant = Some(est.constant);
        Ok(est.constant)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(x: f64) -> f64 {
        cantor_cdf(x, DEFAULT_DEPTH).unwrap()
    }

    #[test]
    fn omega_value() {
        assert!((OMEGA - 2f64.ln() / 3f64.ln()).abs() < 1e-16);
    }

    #[test]
    fn cdf_examples() {
        assert_eq!(f(1.0 / 3.0), 0.5);
        assert_eq!(f(1.0 / 9.0), 0.25);
        assert_eq!(f(0.5), 0.5);
        assert_eq!(f(0.0), 0.0);
        assert_eq!(f(1.0), 1.0);
        assert_eq!(f(7.0 / 9.0), 0.75);
        assert!((f(0.25) - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn cdf_domain() {
        assert!(matches!(cantor_cdf(-0.1, 40), Err(Error::Domain(_))));
        assert!(matches!(cantor_cdf(1.5, 40), Err(Error::Domain(_))));
        assert!(cantor_cdf(0.5, 0).is_err());
    }

    #[test]
    fn interval_examples() {
        let m = |a, b| cantor_interval_measure(a, b, DEFAULT_DEPTH).unwrap();
        assert_eq!(m(0.0, 1.0 / 3.0), 0.5);
        assert_eq!(m(1.0 / 3.0, 2.0 / 3.0), 0.0);
        assert_eq!(m(1.0 / 9.0, 7.0 / 9.0), 0.5);
        assert!(cantor_interval_measure(0.5, 0.2, 40).is_err());
    }

    #[test]
    fn endpoint_order() {
        let e = cantor_endpoints(8, DEFAULT_DEPTH).unwrap();
        let names: Vec<String> = e.iter().map(|p| p.to_string()).collect();
        assert_eq!(names, ["0", "0.(2)", "0.0(2)", "0.2", "0.00(2)", "0.02", "0.20(2)", "0.22"]);
        let v: Vec<f64> = e.iter().map(|p| p.value()).collect();
        let expected = [0.0, 1.0, 1.0 / 3.0, 2.0 / 3.0, 1.0 / 9.0, 2.0 / 9.0, 7.0 / 9.0, 8.0 / 9.0];
        for (a, b) in v.iter().zip(expected) {
            assert!((a - b).abs() < 1e-16);
        }
    }

    #[test]
    fn endpoints_beyond_depth_rejected() {
        // levels 1..=3 add 2 + 4 + 8 endpoints to 0 and 1
        assert!(cantor_endpoints(16, 3).is_ok());
        assert!(cantor_endpoints(17, 3).is_err());
    }

    #[test]
    fn point_strings_round_trip() {
        for s in ["0", "0.(2)", "0.0(2)", "0.202", "0.22(2)"] {
            let p: CantorPoint = s.parse().unwrap();
            assert_eq!(p.to_string(), s);
            let json = serde_json::to_string(&p).unwrap();
            assert_eq!(serde_json::from_str::<CantorPoint>(&json).unwrap(), p);
        }
        assert!("0.1".parse::<CantorPoint>().is_err());
        assert!("1.0".parse::<CantorPoint>().is_err());
    }

    #[test]
    fn corner_balls() {
        for m in 2..10 {
            let r = 3f64.powi(-m);
            let mass = cantor_ball_measure(0.0, r, DEFAULT_DEPTH).unwrap();
            assert_eq!(mass, 0.5f64.powi(m));
            assert!((mass / r.powf(OMEGA) - 1.0).abs() < 1e-12);
            let mass = cantor_ball_measure(0.0, 2.0 * r, DEFAULT_DEPTH).unwrap();
            assert_eq!(mass, 0.5f64.powi(m));
            assert!(((2.0 * r).powf(OMEGA) / mass - 2f64.powf(OMEGA)).abs() < 1e-12);
        }
    }

    #[test]
    fn beta_values() {
        assert!((beta_bound(1.0, 1.0, 1.0).unwrap() - 1.0 / 32.0).abs() < 1e-16);
        let b = beta_bound(1.0, 1.0, OMEGA).unwrap();
        assert!((beta_bound(2.0, 1.0, OMEGA).unwrap() - 2.0 * b).abs() < 1e-16);
        assert!(beta_bound(0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn single_point_coverage() {
        for m in 1..8u32 {
            let n = 1usize << m;
            let pts = vec![0.0; n];
            let c = cantor_coverage(&pts, n, (0.0, 1.0), DEFAULT_DEPTH).unwrap();
            // radius (1/N)^{1/ω} = 3^-m, so the ball is exactly the first level-m interval
            assert!((c - 1.0 / n as f64).abs() < 1e-9, "{m}: {c}");
        }
    }
}
