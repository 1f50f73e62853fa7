//! The coverage functional `C_N(J) = λ(∪_{i≤N} B(x_i, 1/N) ∩ J)` and grid scans over it.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::verdict::{TheoremTag, Verdict};
use crate::error::{Error, Result};
use crate::geometry::{ArcUnion, CirclePoint, Window};

/// Halving ladder `2^-1, …, 2^-10`.
pub fn default_eps_ladder() -> Vec<f64> {
    (1..=10).map(|i| 0.5f64.powi(i)).collect()
}

/// Default floor on `d̂` for a coverage certificate.
pub const DEFAULT_D_FLOOR: f64 = 0.1;

fn check_n(points: &[CirclePoint], n: usize) -> Result<()> {
    if n == 0 || n > points.len() {
        return Err(Error::Input(format!(
            "N = {n} needs N points, {} available",
            points.len()
        )));
    }
    Ok(())
}

/// `∪_{i≤N} B(x_i, 1/N)`.
pub fn coverage_union(points: &[CirclePoint], n: usize) -> Result<ArcUnion> {
    check_n(points, n)?;
    Ok(ArcUnion::uniform(&points[..n], 1.0 / n as f64))
}

/// `C_N(J)`.
pub fn coverage(points: &[CirclePoint], n: usize, window: &Window) -> Result<f64> {
    Ok(coverage_union(points, n)?.measure_in(window))
}

/// `min, min·ratio, min·ratio², …` up to `max`, rounded to integers and deduplicated.
pub fn geometric_grid(min: usize, max: usize, ratio: f64) -> Result<Vec<usize>> {
    if min == 0 || max < min || !(ratio > 1.0) {
        return Err(Error::Parameter(format!(
            "geometric grid needs 1 <= min <= max and ratio > 1, got ({min}, {max}, {ratio})"
        )));
    }
    let mut out = Vec::new();
    let mut x = min as f64;
    while x <= max as f64 * (1.0 + 1e-12) {
        let n = (x.round() as usize).min(max);
        if out.last() != Some(&n) {
            out.push(n);
        }
        x *= ratio;
    }
    Ok(out)
}

/// The full window followed by `count` equal windows.
pub fn default_windows(count: usize) -> Vec<Window> {
    let mut w = vec![Window::full()];
    if count > 1 {
        w.extend(Window::dyadic(count));
    }
    w
}

/// `C_N(J)` for every `N` in a grid and every window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageTable {
    pub n_grid: Vec<usize>,
    pub windows: Vec<Window>,
    /// `values[k][w]` is `C_{n_grid[k]}(windows[w])`.
    pub values: Vec<Vec<f64>>,
}

impl CoverageTable {
    pub fn compute(points: &[CirclePoint], n_grid: &[usize], windows: &[Window]) -> Result<Self> {
        if n_grid.is_empty() || windows.is_empty() {
            return Err(Error::Parameter("coverage scans need nonempty N and window grids".into()));
        }
        for &n in n_grid {
            check_n(points, n)?;
        }
        let values = n_grid
            .par_iter()
            .map(|&n| {
                let u = ArcUnion::uniform(&points[..n], 1.0 / n as f64);
                windows.iter().map(|w| u.measure_in(w)).collect()
            })
            .collect();
        Ok(CoverageTable {
            n_grid: n_grid.to_vec(),
            windows: windows.to_vec(),
            values,
        })
    }

    /// `C_N(J) / λ(J)`.
    pub fn ratio(&self, k: usize, w: usize) -> f64 {
        self.values[k][w] / self.windows[w].length
    }
}

/// Coverage curve on one window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub window: Window,
    pub samples: Vec<(usize, f64)>,
    /// Minimum coverage over the sampled `N`.
    pub liminf_proxy: f64,
    /// `liminf_proxy / λ(J)`.
    pub threshold_d: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SufficientScan {
    pub reports: Vec<CoverageReport>,
    /// Minimum of `threshold_d` over windows.
    pub d_hat: f64,
    pub d_floor: f64,
    pub verdict: Verdict,
    pub theorem: TheoremTag,
}

/// Lower bound `d̂` on `C_N(J)/λ(J)` over the grids. The verdict is
/// BC-evidence when `d̂ ≥ d_floor`.
pub fn sufficient_scan(
    points: &[CirclePoint],
    n_grid: &[usize],
    windows: &[Window],
    d_floor: f64,
) -> Result<SufficientScan> {
    let table = CoverageTable::compute(points, n_grid, windows)?;
    Ok(sufficient_from_table(&table, d_floor))
}

pub fn sufficient_from_table(table: &CoverageTable, d_floor: f64) -> SufficientScan {
    let reports: Vec<CoverageReport> = table
        .windows
        .iter()
        .enumerate()
        .map(|(w, window)| {
            let samples: Vec<(usize, f64)> = table
                .n_grid
                .iter()
                .enumerate()
                .map(|(k, &n)| (n, table.values[k][w]))
                .collect();
            let liminf_proxy = samples.iter().map(|s| s.1).fold(f64::INFINITY, f64::min);
            CoverageReport {
                window: *window,
                samples,
                liminf_proxy,
                threshold_d: liminf_proxy / window.length,
            }
        })
        .collect();
    let d_hat = reports.iter().map(|r| r.threshold_d).fold(f64::INFINITY, f64::min);
    let verdict = if d_hat >= d_floor { Verdict::BcEvidence } else { Verdict::Inconclusive };
    SufficientScan {
        reports,
        d_hat,
        d_floor,
        verdict,
        theorem: TheoremTag::CoverageSufficient,
    }
}

/// A grid cell where `C_N(J) < ε λ(J)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub window: Window,
    pub n: usize,
    pub coverage: f64,
}

/// Every `(J, N)` with `C_N(J) < ε λ(J)`.
pub fn necessary_scan(
    points: &[CirclePoint],
    n_grid: &[usize],
    windows: &[Window],
    eps: f64,
) -> Result<Vec<Witness>> {
    check_eps(eps)?;
    let table = CoverageTable::compute(points, n_grid, windows)?;
    Ok(witnesses_from_table(&table, eps))
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::Parameter(format!("ε must be positive, got {eps}")));
    }
    Ok(())
}

pub fn witnesses_from_table(table: &CoverageTable, eps: f64) -> Vec<Witness> {
    let mut out = Vec::new();
    for (w, window) in table.windows.iter().enumerate() {
        for (k, &n) in table.n_grid.iter().enumerate() {
            let c = table.values[k][w];
            if c < eps * window.length {
                out.push(Witness { window: *window, n, coverage: c });
            }
        }
    }
    out
}

/// Witnesses for a decreasing ladder of `ε`, and the scale sequence they induce.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderScan {
    pub eps: Vec<f64>,
    pub witness_counts: Vec<usize>,
    /// Windows with a witness at every rung.
    pub persistent_windows: Vec<Window>,
    /// For the first persistent window: the smallest witness `N` at each rung,
    /// kept while strictly increasing.
    pub breaks: Vec<usize>,
    pub verdict: Verdict,
    pub theorem: TheoremTag,
}

pub fn ladder_scan(
    points: &[CirclePoint],
    n_grid: &[usize],
    windows: &[Window],
    eps_ladder: &[f64],
) -> Result<LadderScan> {
    if eps_ladder.is_empty() {
        return Err(Error::Parameter("ε ladder is empty".into()));
    }
    for &e in eps_ladder {
        check_eps(e)?;
    }
    let table = CoverageTable::compute(points, n_grid, windows)?;
    Ok(ladder_from_table(&table, eps_ladder))
}

pub fn ladder_from_table(table: &CoverageTable, eps_ladder: &[f64]) -> LadderScan {
    let rungs: Vec<Vec<Witness>> = eps_ladder.iter().map(|&e| witnesses_from_table(table, e)).collect();
    let persistent: Vec<Window> = table
        .windows
        .iter()
        .copied()
        .filter(|w| rungs.iter().all(|r| r.iter().any(|x| x.window == *w)))
        .collect();
    let mut breaks = Vec::new();
    if let Some(j) = persistent.first() {
        for rung in &rungs {
            let last = breaks.last().copied().unwrap_or(0);
            if let Some(n) = rung
                .iter()
                .filter(|x| x.window == *j && x.n > last)
                .map(|x| x.n)
                .min()
            {
                breaks.push(n);
            }
        }
    }
    LadderScan {
        eps: eps_ladder.to_vec(),
        witness_counts: rungs.iter().map(Vec::len).collect(),
        verdict: if persistent.is_empty() { Verdict::Inconclusive } else { Verdict::NotBcWitness },
        persistent_windows: persistent,
        breaks,
        theorem: TheoremTag::CoverageNecessary,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::to_points;

    #[test]
    fn constant_sequence() {
        let pts = to_points(&[0.3; 50]);
        for n in [1, 7, 50] {
            let c = coverage(&pts, n, &Window::full()).unwrap();
            assert!((c - (2.0f64 / n as f64).min(1.0)).abs() < 1e-15);
        }
    }

    #[test]
    fn half_rotation() {
        let pts: Vec<_> = (1..=10).map(|i| CirclePoint::new(i as f64 * 0.5)).collect();
        let c = coverage(&pts, 10, &Window::full()).unwrap();
        assert!((c - 0.4).abs() < 1e-15);
    }

    #[test]
    fn too_few_points() {
        let pts = to_points(&[0.1, 0.2]);
        assert!(matches!(coverage(&pts, 3, &Window::full()), Err(Error::Input(_))));
    }

    #[test]
    fn grid_construction() {
        assert_eq!(geometric_grid(100, 1_000_000, 10.0).unwrap(), vec![100, 1000, 10_000, 100_000, 1_000_000]);
        assert_eq!(geometric_grid(16, 128, 2.0).unwrap(), vec![16, 32, 64, 128]);
        assert!(geometric_grid(10, 5, 2.0).is_err());
        assert!(geometric_grid(1, 5, 1.0).is_err());
    }

    #[test]
    fn constant_sequence_scan() {
        let pts = to_points(&[0.3; 1000]);
        let scan = sufficient_scan(&pts, &[10, 100, 1000], &[Window::full()], DEFAULT_D_FLOOR).unwrap();
        assert!((scan.d_hat - 0.002).abs() < 1e-15);
        assert_eq!(scan.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn empty_window_always_witnesses() {
        let pts: Vec<_> = (1..=1000).map(|i| CirclePoint::new((i as f64 * 0.618_033_988_749_895).fract() / 2.0)).collect();
        let j = Window::span(0.6, 0.9).unwrap();
        let ladder = ladder_scan(&pts, &[10, 100, 1000], &[j], &default_eps_ladder()).unwrap();
        assert_eq!(ladder.persistent_windows, vec![j]);
        assert_eq!(ladder.breaks, vec![10, 100, 1000]);
        assert_eq!(ladder.verdict, Verdict::NotBcWitness);
        assert!(necessary_scan(&pts, &[10], &[j], 0.0).is_err());
    }
}
