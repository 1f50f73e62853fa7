//! Radii sequences `a_1 ≥ a_2 ≥ … → 0`: representation, standardness evidence,
//! condensation sandwiches, adversarial constructions and tail-union coverage.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Arc, ArcUnion, CirclePoint, Window};

/// Condensed partial sum that counts as divergence evidence.
pub const DEFAULT_DIVERGENCE_THRESHOLD: f64 = 10.0;

/// A block-constant sequence whose complete blocks each carry at least this much
/// mass is reported as divergent.
pub const BLOCK_FLOOR: f64 = 0.5;

/// Fixed summation chunk; partial sums are reproducible whatever the thread count.
const SUM_CHUNK: u64 = 1 << 16;

/// Built-in analytic families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosedFamily {
    /// `scale · i^{-p} · ln(i + 1)^{-q}`.
    PowerLog,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLogParams {
    pub scale: f64,
    pub p: f64,
    pub q: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum RadiiSpec {
    ClosedForm { family: ClosedFamily, params: PowerLogParams },
    /// `a_i = values[k]` for `breaks[k-1] < i ≤ breaks[k]` (with `breaks[-1] = 0`).
    BlockConstant { breaks: Vec<u64>, values: Vec<f64> },
    /// `b_i = base_{⌊i^s⌋}`.
    Reindexed { base: Box<RadiiSpec>, s: f64 },
}

fn floor_pow(i: u64, s: f64) -> u64 {
    if s.fract() == 0.0 && s <= 8.0 {
        (i as u128).checked_pow(s as u32).map_or(u64::MAX, |v| v.min(u64::MAX as u128) as u64)
    } else {
        (i as f64).powf(s).floor() as u64
    }
}

impl RadiiSpec {
    pub fn power_log(scale: f64, p: f64, q: f64) -> Self {
        RadiiSpec::ClosedForm {
            family: ClosedFamily::PowerLog,
            params: PowerLogParams { scale, p, q },
        }
    }

    /// `1/i`.
    pub fn harmonic() -> Self {
        RadiiSpec::power_log(1.0, 1.0, 0.0)
    }

    /// `i^{-p}`.
    pub fn power(p: f64) -> Self {
        RadiiSpec::power_log(1.0, p, 0.0)
    }

    /// `a_i` for `i ≥ 1`, or `None` past the end of a finite specification.
    pub fn value(&self, i: u64) -> Option<f64> {
        debug_assert!(i >= 1);
        match self {
            RadiiSpec::ClosedForm { params, .. } => {
                let x = i as f64;
                // dividing keeps 1/i exact; powf(-1) can be off by an ulp
                let mut d = x.powf(params.p);
                if params.q != 0.0 {
                    d *= (x + 1.0).ln().powf(params.q);
                }
                Some(params.scale / d)
            }
            RadiiSpec::BlockConstant { breaks, values } => {
                let k = breaks.partition_point(|&b| b < i);
                values.get(k).copied()
            }
            RadiiSpec::Reindexed { base, s } => base.value(floor_pow(i, *s).max(1)),
        }
    }

    /// Number of defined terms; `None` for infinite sequences.
    pub fn len(&self) -> Option<u64> {
        match self {
            RadiiSpec::ClosedForm { .. } => None,
            RadiiSpec::BlockConstant { breaks, .. } => Some(breaks.last().copied().unwrap_or(0)),
            RadiiSpec::Reindexed { base, s } => base.len().map(|l| {
                let mut i = (l as f64).powf(1.0 / s).floor() as u64;
                while i > 0 && floor_pow(i, *s) > l {
                    i -= 1;
                }
                while floor_pow(i + 1, *s) <= l {
                    i += 1;
                }
                i
            }),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    /// Whether at least `n` terms are defined.
    pub fn covers(&self, n: u64) -> bool {
        self.len().is_none_or(|l| l >= n)
    }

    /// `a_i^s`.
    pub fn powered(&self, s: f64) -> RadiiSpec {
        match self {
            RadiiSpec::ClosedForm { family, params } => RadiiSpec::ClosedForm {
                family: *family,
                params: PowerLogParams {
                    scale: params.scale.powf(s),
                    p: params.p * s,
                    q: params.q * s,
                },
            },
            RadiiSpec::BlockConstant { breaks, values } => RadiiSpec::BlockConstant {
                breaks: breaks.clone(),
                values: values.iter().map(|v| v.powf(s)).collect(),
            },
            RadiiSpec::Reindexed { base, s: t } => RadiiSpec::Reindexed {
                base: Box::new(base.powered(s)),
                s: *t,
            },
        }
    }

    /// Structural checks for block specifications.
    pub fn validate(&self) -> Result<()> {
        match self {
            RadiiSpec::ClosedForm { params, .. } => {
                if !(params.scale > 0.0 && params.scale.is_finite() && params.p.is_finite() && params.q.is_finite()) {
                    return Err(Error::Parameter(format!("closed-form radii need a positive scale and finite exponents, got {params:?}")));
                }
                Ok(())
            }
            RadiiSpec::BlockConstant { breaks, values } => {
                if breaks.is_empty() || breaks.len() != values.len() {
                    return Err(Error::Structural(format!(
                        "block radii need matching nonempty breaks and values ({} vs {})",
                        breaks.len(),
                        values.len()
                    )));
                }
                if breaks[0] == 0 || breaks.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::Structural(format!("block breaks must be strictly increasing positive integers: {breaks:?}")));
                }
                if values.iter().any(|&v| !(v > 0.0 && v.is_finite())) || values.windows(2).any(|w| w[0] <= w[1]) {
                    return Err(Error::Structural(format!("block values must be positive and strictly decreasing: {values:?}")));
                }
                Ok(())
            }
            RadiiSpec::Reindexed { base, s } => {
                if !(s.is_finite() && *s > 1.0) {
                    return Err(Error::Parameter(format!("reindexing exponent must exceed 1, got {s}")));
                }
                base.validate()
            }
        }
    }

    /// Analytic divergence of `Σ a_i` where the family table decides it.
    fn analytic_divergence(&self) -> Option<bool> {
        match self {
            RadiiSpec::ClosedForm { params, .. } => Some(power_log_diverges(params.p, params.q)),
            // base_{⌊i^s⌋} ≍ i^{-ps} (s ln i)^{-q}
            RadiiSpec::Reindexed { base, s } => match base.as_ref() {
                RadiiSpec::ClosedForm { params, .. } => Some(power_log_diverges(params.p * s, params.q)),
                _ => None,
            },
            RadiiSpec::BlockConstant { .. } => None,
        }
    }

    fn analytic_decay(&self) -> Option<bool> {
        match self {
            RadiiSpec::ClosedForm { params, .. } => Some(params.p > 0.0 || (params.p == 0.0 && params.q > 0.0)),
            RadiiSpec::Reindexed { base, .. } => base.analytic_decay(),
            RadiiSpec::BlockConstant { .. } => None,
        }
    }
}

const EXPONENT_TOL: f64 = 1e-12;

/// `Σ i^{-p} ln(i+1)^{-q}` diverges iff `p < 1`, or `p = 1` and `q ≤ 1`.
fn power_log_diverges(p: f64, q: f64) -> bool {
    if p < 1.0 - EXPONENT_TOL {
        true
    } else if p <= 1.0 + EXPONENT_TOL {
        q <= 1.0 + EXPONENT_TOL
    } else {
        false
    }
}

impl fmt::Display for RadiiSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RadiiSpec::ClosedForm { params, .. } => {
                write!(f, "{}·i^-{}", params.scale, params.p)?;
                if params.q != 0.0 {
                    write!(f, "·ln(i+1)^-{}", params.q)?;
                }
                Ok(())
            }
            RadiiSpec::BlockConstant { breaks, .. } => {
                let b: Vec<String> = breaks.iter().map(u64::to_string).collect();
                write!(f, "blocks:{}", b.join(","))
            }
            RadiiSpec::Reindexed { base, s } => write!(f, "({base})[⌊i^{s}⌋]"),
        }
    }
}

/// Accepts `harmonic`, `power:P`, `powerlog:P:Q`, `blocks:N1,N2,…` (values `1/N_k`)
/// or a JSON object.
impl FromStr for RadiiSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parameter(format!("cannot parse radii `{s}`"));
        if s.starts_with('{') {
            return serde_json::from_str(s).map_err(|e| Error::Parameter(format!("radii JSON: {e}")));
        }
        if s == "harmonic" {
            return Ok(RadiiSpec::harmonic());
        }
        if let Some(rest) = s.strip_prefix("power:") {
            return Ok(RadiiSpec::power(rest.parse().map_err(|_| bad())?));
        }
        if let Some(rest) = s.strip_prefix("powerlog:") {
            let (p, q) = rest.split_once(':').ok_or_else(bad)?;
            return Ok(RadiiSpec::power_log(1.0, p.parse().map_err(|_| bad())?, q.parse().map_err(|_| bad())?));
        }
        if let Some(rest) = s.strip_prefix("blocks:") {
            let breaks = rest
                .split(',')
                .map(|t| t.trim().parse::<u64>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?;
            return adversary_radii(&breaks);
        }
        Err(bad())
    }
}

/// Sum of `f(i)` over `lo..hi` in fixed chunks, combined left to right.
fn chunked_sum<F: Fn(u64) -> f64 + Sync>(lo: u64, hi: u64, f: F) -> f64 {
    if hi <= lo {
        return 0.0;
    }
    let chunks = (hi - lo).div_ceil(SUM_CHUNK);
    let partial: Vec<f64> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let a = lo + c * SUM_CHUNK;
            let b = (a + SUM_CHUNK).min(hi);
            (a..b).map(&f).sum()
        })
        .collect();
    partial.iter().sum()
}

fn term(radii: &RadiiSpec, i: u64) -> f64 {
    radii.value(i).unwrap_or(0.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Standardness {
    StandardEvidence,
    NotStandard { reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StandardnessCertificate {
    pub nonincreasing_checked_to: u64,
    /// `(10^k, a_{10^k})` up to the horizon.
    pub tends_to_zero_evidence: Vec<(u64, f64)>,
    /// `(j, Σ_{t≤j} 2^{t-1} a_{2^t})` for `2^j ≤ horizon`.
    pub divergence_evidence: Vec<(u32, f64)>,
    /// Masses of the complete blocks, for block specifications.
    pub block_sums: Option<Vec<f64>>,
    /// Divergence decided by the closed-form table, when available.
    pub analytic_divergence: Option<bool>,
    pub verdict: Standardness,
}

impl StandardnessCertificate {
    pub fn is_standard(&self) -> bool {
        self.verdict == Standardness::StandardEvidence
    }
}

fn not_standard(reason: impl Into<String>) -> StandardnessCertificate {
    StandardnessCertificate {
        nonincreasing_checked_to: 0,
        tends_to_zero_evidence: Vec::new(),
        divergence_evidence: Vec::new(),
        block_sums: None,
        analytic_divergence: None,
        verdict: Standardness::NotStandard { reason: reason.into() },
    }
}

/// Finite evidence that `radii` is nonincreasing, tends to 0 and has divergent sum.
///
/// Malformed block specifications are reported as not standard rather than as errors.
pub fn is_standard(radii: &RadiiSpec, horizon: u64) -> Result<StandardnessCertificate> {
    is_standard_with(radii, horizon, DEFAULT_DIVERGENCE_THRESHOLD)
}

pub fn is_standard_with(radii: &RadiiSpec, horizon: u64, threshold: f64) -> Result<StandardnessCertificate> {
    if horizon < 2 {
        return Err(Error::Parameter(format!("standardness horizon must be at least 2, got {horizon}")));
    }
    if let Err(e) = radii.validate() {
        return match e {
            Error::Structural(msg) => Ok(not_standard(msg)),
            other => Err(other),
        };
    }
    let top = radii.len().map_or(horizon, |l| l.min(horizon));
    if top == 0 {
        return Ok(not_standard("empty sequence"));
    }
    let violation = (1..top)
        .into_par_iter()
        .find_first(|&i| !(term(radii, i) >= term(radii, i + 1)) || !(term(radii, i) > 0.0));
    let mut decay = Vec::new();
    let mut k = 1u64;
    while k <= top {
        decay.push((k, term(radii, k)));
        k = k.saturating_mul(10);
    }
    let mut condensed = Vec::new();
    let mut acc = 0.0;
    let mut j = 1u32;
    while j < 64 && (1u64 << j) <= top {
        acc += (1u64 << (j - 1)) as f64 * term(radii, 1u64 << j);
        condensed.push((j, acc));
        j += 1;
    }
    let block_sums = match radii {
        RadiiSpec::BlockConstant { breaks, values } => {
            let mut prev = 0u64;
            Some(
                breaks
                    .iter()
                    .zip(values)
                    .take_while(|(&b, _)| b <= top)
                    .map(|(&b, &v)| {
                        let s = (b - prev) as f64 * v;
                        prev = b;
                        s
                    })
                    .collect::<Vec<f64>>(),
            )
        }
        _ => None,
    };
    let analytic = radii.analytic_divergence();
    let mut cert = StandardnessCertificate {
        nonincreasing_checked_to: violation.map_or(top, |i| i),
        tends_to_zero_evidence: decay,
        divergence_evidence: condensed,
        block_sums,
        analytic_divergence: analytic,
        verdict: Standardness::StandardEvidence,
    };
    let fail = |reason: String| Standardness::NotStandard { reason };
    cert.verdict = if let Some(i) = violation {
        fail(format!("a_{i} < a_{} or a_{i} is not positive", i + 1))
    } else if radii.analytic_decay() == Some(false) {
        fail("terms do not tend to 0".into())
    } else if let Some(div) = analytic {
        if div {
            Standardness::StandardEvidence
        } else {
            fail("Σ a_i converges (closed-form comparison)".into())
        }
    } else {
        let condensed_total = cert.divergence_evidence.last().map_or(0.0, |x| x.1);
        let blocks_ok = cert
            .block_sums
            .as_ref()
            .is_some_and(|b| !b.is_empty() && b.iter().all(|&s| s >= BLOCK_FLOOR));
        if condensed_total >= threshold || blocks_ok {
            Standardness::StandardEvidence
        } else {
            fail(format!(
                "condensed partial sum {condensed_total:.4} stays below {threshold} at horizon {top}"
            ))
        }
    };
    Ok(cert)
}

/// One checkpoint of the condensation comparison:
/// `lower = (M−1)·condensed_j ≤ raw_j ≤ upper = (M−1)(a_1 + M·condensed_{j−1})`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CondensationRow {
    pub j: u32,
    /// `Σ_{i < M^j} a_i`.
    pub raw: f64,
    /// `Σ_{t=1}^{j} M^{t-1} a_{M^t}`.
    pub condensed: f64,
    pub lower: f64,
    pub upper: f64,
}

const SANDWICH_RTOL: f64 = 1e-12;

impl CondensationRow {
    pub fn holds(&self) -> bool {
        self.lower <= self.raw * (1.0 + SANDWICH_RTOL) && self.raw <= self.upper * (1.0 + SANDWICH_RTOL)
    }
}

/// Raw and condensed partial sums at `j = 1..=checkpoints` (needs `M^j` terms).
pub fn condensation_compare(radii: &RadiiSpec, m: u64, checkpoints: u32) -> Result<Vec<CondensationRow>> {
    if m < 2 {
        return Err(Error::Parameter(format!("condensation base must be at least 2, got {m}")));
    }
    radii.validate()?;
    let top = m
        .checked_pow(checkpoints)
        .ok_or_else(|| Error::Parameter(format!("{m}^{checkpoints} overflows")))?;
    if !radii.covers(top) {
        return Err(Error::Input(format!("radii end before index {top}")));
    }
    let a1 = term(radii, 1);
    let mf = m as f64;
    let mut rows = Vec::with_capacity(checkpoints as usize);
    let (mut raw, mut condensed) = (0.0, 0.0);
    for j in 1..=checkpoints {
        let lo = m.pow(j - 1);
        let hi = m.pow(j);
        raw += chunked_sum(lo, hi, |i| term(radii, i));
        let prev = condensed;
        condensed += mf.powi(j as i32 - 1) * term(radii, hi);
        rows.push(CondensationRow {
            j,
            raw,
            condensed,
            lower: (mf - 1.0) * condensed,
            upper: (mf - 1.0) * (a1 + mf * prev),
        });
    }
    Ok(rows)
}

/// Checkpoint `j` of the weighted comparison with `M = 2`:
/// `lower ≤ weighted ≤ upper` and `lower ≤ root ≤ upper`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KhinchinRow {
    pub j: u32,
    /// `Σ_{i < 2^j} i a_i`.
    pub weighted: f64,
    /// `Σ_{i < 4^j} a_{⌊√i⌋}`.
    pub root: f64,
    /// `Σ_{t=1}^{j} 4^{t-1} a_{2^t}`.
    pub lower: f64,
    /// `Σ_{t=0}^{j-1} 4^{t+1} a_{2^t}`.
    pub upper: f64,
}

impl KhinchinRow {
    pub fn holds(&self) -> bool {
        let le = |a: f64, b: f64| a <= b * (1.0 + SANDWICH_RTOL);
        le(self.lower, self.weighted) && le(self.weighted, self.upper) && le(self.lower, self.root) && le(self.root, self.upper)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KhinchinCheck {
    pub horizon: u64,
    /// `Σ_{i ≤ horizon} i a_i`.
    pub weighted_total: f64,
    /// `Σ_{i ≤ horizon} a_{⌊√i⌋}`.
    pub root_total: f64,
    pub rows: Vec<KhinchinRow>,
}

pub fn khinchin_weight_check(radii: &RadiiSpec, horizon: u64) -> Result<KhinchinCheck> {
    if horizon < 4 {
        return Err(Error::Parameter(format!("weighted comparison needs horizon >= 4, got {horizon}")));
    }
    radii.validate()?;
    if !radii.covers(horizon) {
        return Err(Error::Input(format!("radii end before index {horizon}")));
    }
    let weighted_total = chunked_sum(1, horizon + 1, |i| i as f64 * term(radii, i));
    let root_total = chunked_sum(1, horizon + 1, |i| term(radii, i.isqrt()));
    let mut rows = Vec::new();
    let (mut weighted, mut root, mut lower, mut upper) = (0.0, 0.0, 0.0, 0.0);
    let mut j = 1u32;
    while j < 63 && (1u64 << j) <= horizon {
        let lo = 1u64 << (j - 1);
        let hi = 1u64 << j;
        weighted += chunked_sum(lo, hi, |k| k as f64 * term(radii, k));
        // ⌊√i⌋ = k on exactly 2k + 1 indices
        root += chunked_sum(lo, hi, |k| (2 * k + 1) as f64 * term(radii, k));
        lower += 4f64.powi(j as i32 - 1) * term(radii, hi);
        upper += 4f64.powi(j as i32) * term(radii, lo);
        rows.push(KhinchinRow { j, weighted, root, lower, upper });
        j += 1;
    }
    Ok(KhinchinCheck { horizon, weighted_total, root_total, rows })
}

/// `a_j = 1/N_k` on `(N_{k-1}, N_k]`.
pub fn adversary_radii(breaks: &[u64]) -> Result<RadiiSpec> {
    if breaks.is_empty() {
        return Err(Error::Structural("adversary radii need at least one break".into()));
    }
    if breaks[0] == 0 || breaks.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Structural(format!("breaks must be strictly increasing positive integers: {breaks:?}")));
    }
    Ok(RadiiSpec::BlockConstant {
        breaks: breaks.to_vec(),
        values: breaks.iter().map(|&n| 1.0 / n as f64).collect(),
    })
}

/// Which of the scales `N_k` become block ends.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "select", rename_all = "snake_case")]
pub enum BreakSelector {
    All,
    /// Every `step`-th break starting at 0-based `offset`.
    Stride { step: usize, offset: usize },
    /// Explicit 0-based positions, increasing.
    Indices { indices: Vec<usize> },
}

/// `a_i = 1/N_{k_j}` on `(N_{k_{j-1}}, N_{k_j}]` for the selected subsequence.
pub fn proof_radii_from_a(breaks: &[u64], selector: &BreakSelector) -> Result<RadiiSpec> {
    let chosen: Vec<u64> = match selector {
        BreakSelector::All => breaks.to_vec(),
        BreakSelector::Stride { step, offset } => {
            if *step == 0 {
                return Err(Error::Parameter("selector stride must be positive".into()));
            }
            breaks.iter().skip(*offset).step_by(*step).copied().collect()
        }
        BreakSelector::Indices { indices } => {
            if indices.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Structural(format!("selector indices must increase: {indices:?}")));
            }
            indices
                .iter()
                .map(|&k| {
                    breaks
                        .get(k)
                        .copied()
                        .ok_or_else(|| Error::Parameter(format!("selector index {k} out of range")))
                })
                .collect::<Result<_>>()?
        }
    };
    adversary_radii(&chosen)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SbcTransform {
    pub radii: RadiiSpec,
    pub certificate: StandardnessCertificate,
}

/// `b_i = a_{⌊i^s⌋}`, after checking that `Σ a_i^s` diverges.
///
/// For a power law with integer `s` the result is again a closed form.
pub fn sbc_transform(radii: &RadiiSpec, s: f64, horizon: u64) -> Result<SbcTransform> {
    if !(s.is_finite() && s > 1.0) {
        return Err(Error::Parameter(format!("s must exceed 1, got {s}")));
    }
    radii.validate()?;
    let pre = is_standard(&radii.powered(s), horizon)?;
    if let Standardness::NotStandard { reason } = &pre.verdict {
        return Err(Error::Precondition(format!("Σ a_i^{s} is not divergent: {reason}")));
    }
    let out = match radii {
        RadiiSpec::ClosedForm { family, params } if params.q == 0.0 && s.fract() == 0.0 => RadiiSpec::ClosedForm {
            family: *family,
            params: PowerLogParams { scale: params.scale, p: params.p * s, q: 0.0 },
        },
        _ => RadiiSpec::Reindexed { base: Box::new(radii.clone()), s },
    };
    let certificate = is_standard(&out, horizon)?;
    Ok(SbcTransform { radii: out, certificate })
}

fn radii_values(radii: &RadiiSpec, horizon: usize) -> Result<Vec<f64>> {
    radii.validate()?;
    if !radii.covers(horizon as u64) {
        return Err(Error::Input(format!(
            "radii define {} terms, horizon {horizon} requested",
            radii.len().unwrap_or(0)
        )));
    }
    Ok((1..=horizon as u64).into_par_iter().map(|i| term(radii, i)).collect())
}

fn tail_union(points: &[CirclePoint], values: &[f64], k: usize, horizon: usize) -> ArcUnion {
    ArcUnion::from_arcs((k..=horizon).map(|n| Arc::new(points[n - 1], values[n - 1])))
}

/// `(k, λ(∪_{n=k}^{K} B(x_n, a_n)))` for each tail start `k`.
pub fn limsup_coverage(
    points: &[CirclePoint],
    radii: &RadiiSpec,
    tail_starts: &[usize],
    horizon: usize,
) -> Result<Vec<(usize, f64)>> {
    if horizon == 0 || horizon > points.len() {
        return Err(Error::Input(format!("horizon {horizon} exceeds the {} available points", points.len())));
    }
    if let Some(&k) = tail_starts.iter().find(|&&k| k == 0 || k > horizon) {
        return Err(Error::Parameter(format!("tail start {k} outside 1..={horizon}")));
    }
    let values = radii_values(radii, horizon)?;
    Ok(tail_starts
        .par_iter()
        .map(|&k| (k, tail_union(points, &values, k, horizon).total_measure()))
        .collect())
}

/// `λ(∪_{n=k}^{K} B(x_n, a_n) ∩ J)` together with `Σ_{n=k}^{K} λ(B(x_n, a_n) ∩ J)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailWindowMass {
    pub k: usize,
    pub union_measure: f64,
    pub sum_of_measures: f64,
}

pub fn tail_window_mass(
    points: &[CirclePoint],
    radii: &RadiiSpec,
    window: &Window,
    tail_starts: &[usize],
    horizon: usize,
) -> Result<Vec<TailWindowMass>> {
    if horizon == 0 || horizon > points.len() {
        return Err(Error::Input(format!("horizon {horizon} exceeds the {} available points", points.len())));
    }
    if let Some(&k) = tail_starts.iter().find(|&&k| k == 0 || k > horizon) {
        return Err(Error::Parameter(format!("tail start {k} outside 1..={horizon}")));
    }
    let values = radii_values(radii, horizon)?;
    let single: Vec<f64> = (0..horizon)
        .into_par_iter()
        .map(|n| ArcUnion::from_arcs([Arc::new(points[n], values[n])]).measure_in(window))
        .collect();
    // suffix sums, accumulated from the end so each tail is summed the same way
    let mut suffix = vec![0.0; horizon + 1];
    for n in (0..horizon).rev() {
        suffix[n] = suffix[n + 1] + single[n];
    }
    Ok(tail_starts
        .par_iter()
        .map(|&k| TailWindowMass {
            k,
            union_measure: tail_union(points, &values, k, horizon).measure_in(window),
            sum_of_measures: suffix[k - 1],
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::to_points;

    #[test]
    fn closed_form_classification() {
        assert!(is_standard(&RadiiSpec::harmonic(), 1000).unwrap().is_standard());
        assert!(!is_standard(&RadiiSpec::power(2.0), 1000).unwrap().is_standard());
        assert!(is_standard(&RadiiSpec::power_log(1.0, 1.0, 1.0), 1000).unwrap().is_standard());
        assert!(!is_standard(&RadiiSpec::power_log(1.0, 1.0, 2.0), 1000).unwrap().is_standard());
        assert!(!is_standard(&RadiiSpec::power(-0.5), 1000).unwrap().is_standard());
        assert!(is_standard(&RadiiSpec::harmonic(), 1).is_err());
    }

    #[test]
    fn decade_blocks_are_standard() {
        let breaks: Vec<u64> = (1..=7).map(|k| 10u64.pow(k)).collect();
        let r = adversary_radii(&breaks).unwrap();
        let cert = is_standard(&r, 10_000_000).unwrap();
        assert!(cert.is_standard(), "{cert:?}");
        let sums = cert.block_sums.unwrap();
        assert!((sums[0] - 1.0).abs() < 1e-15);
        for s in &sums[1..] {
            assert!((s - 0.9).abs() < 1e-12);
        }
    }

    #[test]
    fn malformed_blocks_are_not_standard() {
        let r = RadiiSpec::BlockConstant { breaks: vec![10, 5], values: vec![0.1, 0.2] };
        assert!(!is_standard(&r, 100).unwrap().is_standard());
        assert!(matches!(adversary_radii(&[10, 10]), Err(Error::Structural(_))));
    }

    #[test]
    fn adversary_values() {
        let r = adversary_radii(&[10, 100, 1000]).unwrap();
        assert_eq!(r.value(1), Some(0.1));
        assert_eq!(r.value(10), Some(0.1));
        assert_eq!(r.value(11), Some(0.01));
        assert_eq!(r.value(1000), Some(0.001));
        assert_eq!(r.value(1001), None);
        assert_eq!(r.len(), Some(1000));
        let single = adversary_radii(&[7]).unwrap();
        assert!((1..=7).all(|i| single.value(i) == Some(1.0 / 7.0)));
    }

    #[test]
    fn dyadic_blocks_have_half_mass() {
        let breaks: Vec<u64> = (1..=20).map(|k| 1u64 << k).collect();
        let cert = is_standard(&adversary_radii(&breaks).unwrap(), 1 << 20).unwrap();
        for s in &cert.block_sums.unwrap()[1..] {
            assert_eq!(*s, 0.5);
        }
    }

    #[test]
    fn selectors() {
        let breaks = [10, 100, 1000, 10_000];
        assert_eq!(proof_radii_from_a(&breaks, &BreakSelector::All).unwrap(), adversary_radii(&breaks).unwrap());
        let every_other = proof_radii_from_a(&breaks, &BreakSelector::Stride { step: 2, offset: 0 }).unwrap();
        assert_eq!(every_other, adversary_radii(&[10, 1000]).unwrap());
        let picked = proof_radii_from_a(&breaks, &BreakSelector::Indices { indices: vec![1, 3] }).unwrap();
        assert_eq!(picked, adversary_radii(&[100, 10_000]).unwrap());
        assert!(proof_radii_from_a(&breaks, &BreakSelector::Indices { indices: vec![3, 1] }).is_err());
    }

    #[test]
    fn harmonic_condensation() {
        let rows = condensation_compare(&RadiiSpec::harmonic(), 2, 20).unwrap();
        for r in &rows {
            assert!((r.condensed - r.j as f64 / 2.0).abs() < 1e-12);
            assert!(r.holds(), "{r:?}");
        }
    }

    #[test]
    fn sbc_examples() {
        let out = sbc_transform(&RadiiSpec::power(0.5), 2.0, 1000).unwrap();
        assert_eq!(out.radii, RadiiSpec::harmonic());
        assert!(out.certificate.is_standard());
        assert!(matches!(sbc_transform(&RadiiSpec::harmonic(), 2.0, 1000), Err(Error::Precondition(_))));
        let log_case = RadiiSpec::power_log(1.0, 1.0 / 3.0, 2.0 / 3.0);
        assert!(matches!(sbc_transform(&log_case, 3.0, 1000), Err(Error::Precondition(_))));
    }

    #[test]
    fn reindexed_values() {
        let blocks = adversary_radii(&[4, 16, 64]).unwrap();
        let r = RadiiSpec::Reindexed { base: Box::new(blocks), s: 2.0 };
        assert_eq!(r.len(), Some(8));
        assert_eq!(r.value(2), Some(0.25));
        assert_eq!(r.value(3), Some(1.0 / 16.0));
        assert_eq!(r.value(9), None);
    }

    #[test]
    fn parse_forms() {
        assert_eq!("harmonic".parse::<RadiiSpec>().unwrap(), RadiiSpec::harmonic());
        assert_eq!("power:2".parse::<RadiiSpec>().unwrap(), RadiiSpec::power(2.0));
        assert_eq!("blocks:10,100".parse::<RadiiSpec>().unwrap(), adversary_radii(&[10, 100]).unwrap());
        let json = serde_json::to_string(&RadiiSpec::power_log(1.0, 1.0, 1.0)).unwrap();
        assert_eq!(json.parse::<RadiiSpec>().unwrap(), RadiiSpec::power_log(1.0, 1.0, 1.0));
        assert!("blocks:10,5".parse::<RadiiSpec>().is_err());
        assert!("cubic".parse::<RadiiSpec>().is_err());
    }

    #[test]
    fn limsup_full_cover() {
        let pts = to_points(&[0.1, 0.2, 0.3, 0.4]);
        let r = RadiiSpec::BlockConstant { breaks: vec![2, 4], values: vec![0.6, 0.5] };
        let out = limsup_coverage(&pts, &r, &[1, 2, 4], 4).unwrap();
        assert!(out.iter().all(|&(_, m)| m == 1.0));
        assert!(matches!(limsup_coverage(&pts, &adversary_radii(&[2]).unwrap(), &[1], 4), Err(Error::Input(_))));
        assert!(limsup_coverage(&pts, &r, &[5], 4).is_err());
    }
}
