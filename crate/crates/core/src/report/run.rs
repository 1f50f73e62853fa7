//! Executes an experiment configuration.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use super::config::{Criterion, ExperimentConfig, Space};
use super::{CriterionResult, Report, SCHEMA_VERSION};
use crate::cantor;
use crate::diagnostics::{
    close_pairs, default_windows, f_a_estimate, gap_stats, ladder_from_table, separation_profile,
    sufficient_from_table, witnesses_from_table, CoverageTable, TheoremTag, Verdict,
};
use crate::error::{Error, Result};
use crate::geometry::CirclePoint;
use crate::radii::limsup_coverage;
use crate::rigidity::{dichotomy_probe, iet_rigidity, rotation_rigidity, small_sep_check, Scaling};
use crate::sequences::{generate, SequenceSpec};

fn to_value<T: Serialize>(x: &T) -> Result<Value> {
    Ok(serde_json::to_value(x)?)
}

/// Summary entries; non-finite values are dropped so reports stay valid JSON.
fn summary<const K: usize>(pairs: [(&str, f64); K]) -> BTreeMap<String, f64> {
    pairs
        .into_iter()
        .filter(|(_, v)| v.is_finite())
        .map(|(k, v)| (k.to_string(), v))
        .collect()
}

/// Level-`k` cylinders of the Cantor set, `2^k` of them, preceded by `[0, 1]`.
pub fn cantor_windows(count: usize) -> Vec<(f64, f64)> {
    let level = count.trailing_zeros();
    let width = 3f64.powi(-(level as i32));
    let mut out = vec![(0.0, 1.0)];
    if level > 0 {
        for code in 0..count {
            let left: f64 = (0..level)
                .map(|i| {
                    let bit = (code >> (level - 1 - i)) & 1;
                    2.0 * bit as f64 * 3f64.powi(-(i as i32 + 1))
                })
                .sum();
            out.push((left, left + width));
        }
    }
    out
}

fn default_rigidity_grid(config: &ExperimentConfig) -> Result<Vec<u64>> {
    let g = &config.grids;
    if !g.rigidity_n.is_empty() {
        return Ok(g.rigidity_n.clone());
    }
    if let SequenceSpec::Kronecker { alpha } = &config.sequence {
        let q: Vec<u64> = alpha
            .resolve()?
            .convergent_denominators(g.n_max as u128)
            .into_iter()
            .filter(|&q| q >= g.n_min as u128 && q <= g.n_max as u128)
            .map(|q| q as u64)
            .collect();
        if !q.is_empty() {
            return Ok(q);
        }
    }
    Ok(g.n_grid()?.into_iter().map(|n| n as u64).collect())
}

fn run_criterion(config: &ExperimentConfig, criterion: Criterion, points: &[CirclePoint]) -> Result<CriterionResult> {
    let g = &config.grids;
    let result = |theorem_tag: TheoremTag,
                  grids: Value,
                  values: Value,
                  summary: BTreeMap<String, f64>,
                  verdict: Option<Verdict>| CriterionResult {
        criterion,
        space: config.space,
        theorem_tag,
        grids,
        values,
        summary,
        verdict,
    };
    Ok(match (config.space, criterion) {
        (Space::Cantor, Criterion::Coverage) => {
            let n_grid = g.n_grid()?;
            let windows = cantor_windows(g.windows);
            // endpoints keep x = 1, which the circle reduction would send to 0
            let raw: Vec<f64> = match &config.sequence {
                SequenceSpec::CantorEndpoints => cantor::cantor_endpoints(points.len(), g.depth)?
                    .iter()
                    .map(|p| p.value())
                    .collect(),
                _ => points.iter().map(|p| p.value()).collect(),
            };
            let scan = cantor::cantor_coverage_scan(&raw, &n_grid, &windows, g.depth)?;
            let verdict = if scan.d_hat >= g.d_floor { Verdict::BcEvidence } else { Verdict::Inconclusive };
            result(
                TheoremTag::AhlforsCoverage,
                json!({"n_grid": n_grid, "windows": windows, "depth": g.depth, "d_floor": g.d_floor}),
                to_value(&scan)?,
                summary([("d_hat", scan.d_hat)]),
                Some(verdict),
            )
        }
        (Space::Cantor, other) => {
            return Err(Error::config("criteria", format!("criterion `{other}` is not available on the Cantor space")))
        }
        (Space::Circle, Criterion::Coverage) => {
            let n_grid = g.n_grid()?;
            let windows = default_windows(g.windows);
            let table = CoverageTable::compute(points, &n_grid, &windows)?;
            let scan = sufficient_from_table(&table, g.d_floor);
            result(
                scan.theorem,
                json!({"n_grid": n_grid, "windows": windows, "d_floor": g.d_floor}),
                to_value(&scan)?,
                summary([("d_hat", scan.d_hat)]),
                Some(scan.verdict),
            )
        }
        (Space::Circle, Criterion::Necessary) => {
            let n_grid = g.n_grid()?;
            let windows = default_windows(g.windows);
            let table = CoverageTable::compute(points, &n_grid, &windows)?;
            let witnesses = witnesses_from_table(&table, g.eps);
            let ladder = ladder_from_table(&table, &g.eps_ladder);
            let min_ratio = (0..n_grid.len())
                .flat_map(|k| (0..windows.len()).map(move |w| (k, w)))
                .map(|(k, w)| table.ratio(k, w))
                .fold(f64::INFINITY, f64::min);
            result(
                ladder.theorem,
                json!({"n_grid": n_grid, "windows": windows, "eps": g.eps, "eps_ladder": g.eps_ladder}),
                json!({"witnesses": to_value(&witnesses)?, "ladder": to_value(&ladder)?}),
                summary([
                    ("witness_count", witnesses.len() as f64),
                    ("min_coverage_ratio", min_ratio),
                    ("persistent_windows", ladder.persistent_windows.len() as f64),
                ]),
                Some(ladder.verdict),
            )
        }
        (Space::Circle, Criterion::Separation) => {
            let profile = separation_profile(points, g.m, g.e, g.r_max)?;
            let verdict = if profile.c_hat >= g.c_floor { Verdict::BcEvidence } else { Verdict::Inconclusive };
            result(
                TheoremTag::SeparationKey,
                json!({"M": g.m, "e": g.e, "r_max": g.r_max, "c_floor": g.c_floor}),
                to_value(&profile)?,
                summary([("c_hat", profile.c_hat)]),
                Some(verdict),
            )
        }
        (Space::Circle, Criterion::Gaps) => {
            let n_grid = g.n_grid()?;
            let rows = n_grid
                .iter()
                .map(|&n| {
                    let stats = gap_stats(points, n)?;
                    let fractions: Vec<f64> = g.gap_s.iter().map(|&s| stats.fraction_below(s)).collect();
                    let positive: Vec<f64> = g.gap_s.iter().map(|&s| stats.fraction_below_positive(s)).collect();
                    Ok(json!({
                        "n": n,
                        "fraction_below": fractions,
                        "fraction_below_positive": positive,
                        "distinct_points": stats.distinct_points,
                        "min_positive_gap": stats.min_positive_gap(),
                    }))
                })
                .collect::<Result<Vec<Value>>>()?;
            let last = gap_stats(points, g.n_max)?;
            let headline = last.fraction_below(g.gap_s[0]);
            let verdict = if headline <= g.gap_eps { Verdict::BcEvidence } else { Verdict::Inconclusive };
            result(
                TheoremTag::GapCriterion,
                json!({"n_grid": n_grid, "gap_s": g.gap_s, "gap_eps": g.gap_eps, "convention": "circle gaps, n per n points, repeats give zero gaps"}),
                Value::Array(rows),
                summary([
                    ("fraction_below", headline),
                    ("fraction_below_positive", last.fraction_below_positive(g.gap_s[0])),
                    ("distinct_points", last.distinct_points as f64),
                ]),
                Some(verdict),
            )
        }
        (Space::Circle, Criterion::Pairs) => {
            let n_grid = g.n_grid()?;
            let stats = n_grid
                .iter()
                .map(|&n| close_pairs(points, n, g.pair_s / n as f64))
                .collect::<Result<Vec<_>>>()?;
            let last = stats.last().expect("nonempty grid");
            // a uniform sample has about n·u close pairs
            let normalized = last.count as f64 / (last.n as f64 * last.u * last.n as f64);
            result(
                TheoremTag::PairCriterion,
                json!({"n_grid": n_grid, "pair_s": g.pair_s}),
                to_value(&stats)?,
                summary([("pairs", last.count as f64), ("pairs_per_expected", normalized)]),
                None,
            )
        }
        (Space::Circle, Criterion::Fa) => {
            let z = g.z_grid();
            let r = g.r_grid();
            let est = f_a_estimate(points, &g.a, &z, &r, g.zero_tolerance)?;
            result(
                est.theorem,
                json!({"A": g.a, "z_points": g.z_points, "r_grid": r, "zero_tolerance": g.zero_tolerance, "cutoff": "N >= ceil(1/r)"}),
                to_value(&est)?,
                summary([("min_f", est.min_value()), ("zero_fraction", est.zero_fraction)]),
                Some(est.verdict),
            )
        }
        (Space::Circle, Criterion::Rigidity) => {
            let n_grid = default_rigidity_grid(config)?;
            let curve = match &config.sequence {
                SequenceSpec::Kronecker { alpha } => rotation_rigidity(alpha.resolve()?, &n_grid)?,
                SequenceSpec::IetOrbit { iet, .. } => iet_rigidity(iet, &n_grid, g.grid_size)?,
                _ => return Err(Error::config("criteria", "rigidity needs a kronecker or iet_orbit sequence")),
            };
            result(
                curve.theorem,
                json!({"n_grid": n_grid, "grid_size": g.grid_size}),
                to_value(&curve)?,
                summary([("liminf_proxy", curve.liminf_proxy)]),
                Some(curve.verdict),
            )
        }
        (Space::Circle, Criterion::Smallsep) => {
            let n_grid = g.n_grid()?;
            let check = small_sep_check(&points[..=g.n_max], &n_grid)?;
            let at_max = check.samples.last().map_or(f64::NAN, |s| s.1);
            result(
                check.theorem,
                json!({"n_grid": n_grid, "horizon": g.n_max}),
                to_value(&check)?,
                summary([("value_at_n_max", at_max), ("tail_sup", check.tail_sup)]),
                Some(check.verdict),
            )
        }
        (Space::Circle, Criterion::Dichotomy) => {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            let ys: Vec<CirclePoint> = (0..g.dichotomy_samples).map(|_| CirclePoint::new(rng.random::<f64>())).collect();
            let scaling = Scaling::Power { exponent: g.dichotomy_exponent };
            let probe = dichotomy_probe(points, scaling, &ys, g.n_max)?;
            let mut sorted = probe.liminf_estimates.clone();
            sorted.sort_unstable_by(f64::total_cmp);
            let median = sorted[sorted.len() / 2];
            result(
                probe.theorem,
                json!({"samples": g.dichotomy_samples, "scaling": probe.scaling, "horizon": g.n_max, "seed": config.seed}),
                to_value(&probe)?,
                summary([
                    ("near_zero_fraction", probe.near_zero_fraction),
                    ("large_fraction", probe.large_fraction),
                    ("median_estimate", median),
                ]),
                None,
            )
        }
        (Space::Circle, Criterion::Limsup) => {
            let radii = config
                .radii
                .as_ref()
                .ok_or_else(|| Error::config("radii", "the limsup criterion needs a radii sequence"))?;
            let starts = g.tail_starts_or_default();
            let tails = limsup_coverage(points, radii, &starts, g.n_max)?;
            let last = tails.last().map_or(f64::NAN, |t| t.1);
            result(
                TheoremTag::LimsupCoverage,
                json!({"tail_starts": starts, "horizon": g.n_max, "radii": radii.to_string()}),
                to_value(&tails)?,
                summary([("last_tail_measure", last)]),
                None,
            )
        }
    })
}

const NOTES: [&str; 4] = [
    "indices start at 1: x_1 is the first point",
    "gaps are circle gaps: n gaps for n points, repeated points give zero gaps",
    "f_A uses only N in A with N >= ceil(1/r) for the radius r",
    "block radii: value v_j holds on indices (b_(j-1), b_j], b_0 = 0",
];

/// Runs every requested criterion on one shared prefix of the sequence.
pub fn run(config: &ExperimentConfig) -> Result<Report> {
    config.validate()?;
    let start = Instant::now();
    let points = generate(&config.sequence, config.horizon())?;
    let mut results = Vec::with_capacity(config.criteria.len());
    for &c in &config.criteria {
        results.push(run_criterion(config, c, &points)?);
    }
    let mut baselines = BTreeMap::new();
    for r in &results {
        for (k, v) in &r.summary {
            baselines.insert(format!("{}.{}", r.criterion, k), *v);
        }
    }
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        config: config.clone(),
        notes: NOTES.iter().map(|s| s.to_string()).collect(),
        results,
        baselines,
        wall_clock_ms: start.elapsed().as_millis() as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cantor_cylinders() {
        let w = cantor_windows(4);
        assert_eq!(w.len(), 5);
        let expected = [(0.0, 1.0 / 9.0), (2.0 / 9.0, 3.0 / 9.0), (6.0 / 9.0, 7.0 / 9.0), (8.0 / 9.0, 1.0)];
        for (got, want) in w[1..].iter().zip(expected) {
            assert!((got.0 - want.0).abs() < 1e-15 && (got.1 - want.1).abs() < 1e-15, "{got:?}");
        }
    }
}
