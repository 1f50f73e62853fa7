//! Finite-grid estimate of the local density functional `f_A`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::verdict::{TheoremTag, Verdict};
use crate::error::{Error, Result};
use crate::geometry::{Arc, ArcUnion, CirclePoint, Window};

/// `(k + 1/2)/count` for `k < count`.
pub fn midpoint_grid(count: usize) -> Vec<CirclePoint> {
    (0..count).map(|k| CirclePoint::new((k as f64 + 0.5) / count as f64)).collect()
}

/// `2^-lo, …, 2^-hi`.
pub fn dyadic_radii(lo: i32, hi: i32) -> Vec<f64> {
    (lo..=hi).map(|k| 0.5f64.powi(k)).collect()
}

pub const DEFAULT_ZERO_TOLERANCE: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FaEstimate {
    #[serde(rename = "A")]
    pub a: Vec<usize>,
    pub z_grid: Vec<CirclePoint>,
    pub r_grid: Vec<f64>,
    /// `per_radius[z][r]`: max over admissible `N ∈ A` of the coverage density in `B(z, r)`.
    /// `None` when no `N ∈ A` reaches `1/r`.
    pub per_radius: Vec<Vec<Option<f64>>>,
    /// `f̂_A(z)`: minimum of `per_radius[z]` over radii.
    pub values: Vec<f64>,
    pub zero_tolerance: f64,
    pub zero_fraction: f64,
    pub verdict: Verdict,
    pub theorem: TheoremTag,
}

impl FaEstimate {
    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

fn ball_window(z: CirclePoint, r: f64) -> Window {
    let len = (2.0 * r).min(1.0);
    Window { left: z.rotate(-len / 2.0), length: len }
}

/// `f̂_A(z) = min_r max_{N ∈ A, N ≥ 1/r} λ(∪_{i≤N} B(x_i, 1/N) ∩ B(z, r)) / λ(B(z, r))`.
///
/// The verdict is a non-BC witness when `f̂_A` falls below `zero_tolerance` at some
/// grid point, each of which stands for a cell of width `1/|z_grid|`.
pub fn f_a_estimate(
    points: &[CirclePoint],
    a: &[usize],
    z_grid: &[CirclePoint],
    r_grid: &[f64],
    zero_tolerance: f64,
) -> Result<FaEstimate> {
    if a.is_empty() {
        return Err(Error::Parameter("the index set A is empty".into()));
    }
    if a.windows(2).any(|w| w[0] >= w[1]) || a[0] == 0 {
        return Err(Error::Parameter(format!("A must be strictly increasing positive integers, got {a:?}")));
    }
    let top = *a.last().expect("nonempty");
    if top > points.len() {
        return Err(Error::Input(format!("max(A) = {top} exceeds the {} available points", points.len())));
    }
    if z_grid.is_empty() || r_grid.is_empty() {
        return Err(Error::Parameter("f_A estimate needs nonempty z and r grids".into()));
    }
    if r_grid.iter().any(|&r| !(r > 0.0)) || r_grid.windows(2).any(|w| w[0] <= w[1]) {
        return Err(Error::Parameter("r grid must be strictly decreasing positive reals".into()));
    }
    let unions: Vec<ArcUnion> = a
        .par_iter()
        .map(|&n| ArcUnion::uniform(&points[..n], 1.0 / n as f64))
        .collect();
    let per_radius: Vec<Vec<Option<f64>>> = z_grid
        .par_iter()
        .map(|&z| {
            r_grid
                .iter()
                .map(|&r| {
                    let ball = ball_window(z, r);
                    let cutoff = (1.0 / r).ceil();
                    a.iter()
                        .zip(&unions)
                        .filter(|(&n, _)| n as f64 >= cutoff)
                        .map(|(_, u)| u.measure_in(&ball) / Arc::new(z, r).measure())
                        .reduce(f64::max)
                })
                .collect()
        })
        .collect();
    if per_radius.first().is_some_and(|row| row.iter().all(Option::is_none)) {
        return Err(Error::Parameter(format!(
            "no N in A reaches 1/r for any r in the grid (max A = {top})"
        )));
    }
    let values: Vec<f64> = per_radius
        .iter()
        .map(|row| row.iter().flatten().copied().fold(f64::INFINITY, f64::min))
        .collect();
    let zeros = values.iter().filter(|&&v| v < zero_tolerance).count();
    let zero_fraction = zeros as f64 / values.len() as f64;
    Ok(FaEstimate {
        a: a.to_vec(),
        z_grid: z_grid.to_vec(),
        r_grid: r_grid.to_vec(),
        per_radius,
        values,
        zero_tolerance,
        zero_fraction,
        verdict: if zeros > 0 { Verdict::NotBcWitness } else { Verdict::Inconclusive },
        theorem: TheoremTag::FaZeroSet,
    })
}
