//! Greedy separated subsets and block separation profiles.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::CirclePoint;

/// Relative slack on the separation scale, so that `{k/n}` is `1/n`-separated
/// despite rounding in `k/n`.
pub const SEPARATION_RTOL: f64 = 1e-9;

/// Indices of a maximal `e`-separated subset, chosen greedily in circle order.
///
/// The result is maximal (every omitted point lies within `e` of a chosen one),
/// hence at least half the size of a largest `e`-separated subset.
pub fn greedy_separated_subset(points: &[CirclePoint], e: f64) -> Result<Vec<usize>> {
    if !(e.is_finite() && e > 0.0) {
        return Err(Error::Parameter(format!("separation scale must be positive, got {e}")));
    }
    if points.is_empty() {
        return Ok(Vec::new());
    }
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_unstable_by(|&a, &b| points[a].total_cmp(&points[b]));
    let e_eff = e * (1.0 - SEPARATION_RTOL);
    if e_eff > 0.5 {
        return Ok(vec![order[0]]);
    }
    let first = points[order[0]].value();
    let mut chosen = vec![order[0]];
    let mut last = first;
    for &i in &order[1..] {
        let v = points[i].value();
        if v - last >= e_eff {
            chosen.push(i);
            last = v;
        }
    }
    if chosen.len() > 1 && first + 1.0 - last < e_eff {
        chosen.pop();
    }
    Ok(chosen)
}

pub fn separated_count(points: &[CirclePoint], e: f64) -> Result<usize> {
    Ok(greedy_separated_subset(points, e)?.len())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparationRow {
    pub r: u32,
    /// 1-based index block `(M^{r-1}, M^r]`.
    pub block: (usize, usize),
    pub scale: f64,
    pub separated_count: usize,
    /// `separated_count / M^r`.
    pub ratio: f64,
    /// `ĉ · M^r`.
    pub required: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparationProfile {
    #[serde(rename = "M")]
    pub m: usize,
    pub e: f64,
    pub rows: Vec<SeparationRow>,
    /// `min_r separated_count / M^r`.
    pub c_hat: f64,
}

impl SeparationProfile {
    /// Whether every block holds at least `c · M^r` separated points.
    pub fn holds_with(&self, c: f64) -> bool {
        self.rows.iter().all(|row| row.separated_count as f64 >= c * (self.m as f64).powi(row.r as i32))
    }
}

/// Greedy `e/M^r`-separated counts in the blocks `(M^{r-1}, M^r]`, `r = 1..=r_max`.
pub fn separation_profile(points: &[CirclePoint], m: usize, e: f64, r_max: u32) -> Result<SeparationProfile> {
    if m < 2 || r_max == 0 {
        return Err(Error::Parameter(format!("separation profile needs M >= 2 and r_max >= 1, got ({m}, {r_max})")));
    }
    let top = m
        .checked_pow(r_max)
        .ok_or_else(|| Error::Parameter(format!("M^r_max overflows for M = {m}, r_max = {r_max}")))?;
    if points.len() < top {
        return Err(Error::Input(format!(
            "separation profile to M^{r_max} = {top} needs that many points, {} available",
            points.len()
        )));
    }
    let counts = (1..=r_max)
        .into_par_iter()
        .map(|r| {
            let lo = m.pow(r - 1);
            let hi = m.pow(r);
            let scale = e / hi as f64;
            Ok((r, lo, hi, scale, separated_count(&points[lo..hi], scale)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let c_hat = counts
        .iter()
        .map(|&(_, _, hi, _, c)| c as f64 / hi as f64)
        .fold(f64::INFINITY, f64::min);
    let rows = counts
        .into_iter()
        .map(|(r, lo, hi, scale, count)| SeparationRow {
            r,
            block: (lo + 1, hi),
            scale,
            separated_count: count,
            ratio: count as f64 / hi as f64,
            required: c_hat * hi as f64,
        })
        .collect();
    Ok(SeparationProfile { m, e, rows, c_hat })
}

/// Explicit lower-bound constants: `δ_key = e·c/2` and `δ_link = d/12`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LemmaBounds {
    pub delta_key: f64,
    pub delta_link: f64,
}

pub fn lemma_bounds(c: f64, e: f64, d: f64) -> Result<LemmaBounds> {
    if !(c > 0.0 && e > 0.0 && d > 0.0) {
        return Err(Error::Parameter(format!("bounds need positive c, e, d; got ({c}, {e}, {d})")));
    }
    Ok(LemmaBounds { delta_key: e * c / 2.0, delta_link: d / 12.0 })
}
