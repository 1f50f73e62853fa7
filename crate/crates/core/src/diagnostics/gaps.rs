//! Gap and close-pair statistics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::CirclePoint;

fn sorted_prefix(points: &[CirclePoint], n: usize) -> Result<Vec<f64>> {
    if n == 0 || n > points.len() {
        return Err(Error::Input(format!(
            "statistic over the first {n} points, {} available",
            points.len()
        )));
    }
    let mut v: Vec<f64> = points[..n].iter().map(|p| p.value()).collect();
    v.sort_unstable_by(f64::total_cmp);
    Ok(v)
}

/// The `n` circle gaps between consecutive points among the first `n`, sorted.
/// Repeated points contribute zero gaps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapStats {
    pub n: usize,
    pub gaps: Vec<f64>,
    pub distinct_points: usize,
}

impl GapStats {
    /// `#{gaps < s/n} / n`.
    pub fn fraction_below(&self, s: f64) -> f64 {
        let t = s / self.n as f64;
        self.gaps.partition_point(|&g| g < t) as f64 / self.n as f64
    }

    /// The same fraction with zero gaps from repeated points left out of the count.
    pub fn fraction_below_positive(&self, s: f64) -> f64 {
        let zeros = self.gaps.partition_point(|&g| g <= 0.0);
        let t = s / self.n as f64;
        let below = self.gaps.partition_point(|&g| g < t);
        below.saturating_sub(zeros) as f64 / self.n as f64
    }

    pub fn min_positive_gap(&self) -> Option<f64> {
        self.gaps.iter().copied().find(|&g| g > 0.0)
    }

    pub fn total(&self) -> f64 {
        self.gaps.iter().sum()
    }
}

pub fn gap_stats(points: &[CirclePoint], n: usize) -> Result<GapStats> {
    let v = sorted_prefix(points, n)?;
    let mut gaps: Vec<f64> = v.windows(2).map(|w| w[1] - w[0]).collect();
    gaps.push(v[0] + 1.0 - v[n - 1]);
    if n == 1 {
        gaps[0] = 1.0;
    }
    let distinct_points = 1 + v.windows(2).filter(|w| w[1] > w[0]).count();
    gaps.sort_unstable_by(f64::total_cmp);
    Ok(GapStats { n, gaps, distinct_points })
}

/// `|{(p, q) : 1 ≤ p < q ≤ n, d(x_p, x_q) < u}|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairStats {
    pub n: usize,
    pub u: f64,
    pub count: u64,
}

/// Exact count of pairs at circle distance below `u`, by binary search in circle order.
pub fn close_pairs(points: &[CirclePoint], n: usize, u: f64) -> Result<PairStats> {
    if !(u > 0.0) {
        return Err(Error::Parameter(format!("pair radius must be positive, got {u}")));
    }
    let v = sorted_prefix(points, n)?;
    let all = n as u64 * (n as u64 - 1) / 2;
    if u > 0.5 {
        return Ok(PairStats { n, u, count: all });
    }
    let mut count = 0u64;
    for i in 0..n {
        let rest = &v[i + 1..];
        // pairs that are close without wrapping: s_j − s_i < u, a prefix of rest
        let near = rest.partition_point(|&s| s - v[i] < u);
        // pairs close across 0: 1 − (s_j − s_i) < u, a suffix of rest
        let wrap_start = rest.partition_point(|&s| !(1.0 - (s - v[i]) < u));
        count += near as u64 + (rest.len() - wrap_start.max(near)) as u64;
    }
    Ok(PairStats { n, u, count })
}
