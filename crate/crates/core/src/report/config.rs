//! Experiment configuration and its validation.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::diagnostics::{default_eps_ladder, dyadic_radii, geometric_grid, midpoint_grid, DEFAULT_D_FLOOR, DEFAULT_ZERO_TOLERANCE};
use crate::error::{Error, Result};
use crate::geometry::CirclePoint;
use crate::radii::RadiiSpec;
use crate::sequences::SequenceSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    Coverage,
    Necessary,
    Separation,
    Gaps,
    Pairs,
    Fa,
    Rigidity,
    Smallsep,
    Dichotomy,
    Limsup,
}

impl Criterion {
    pub const ALL: [Criterion; 10] = [
        Criterion::Coverage,
        Criterion::Necessary,
        Criterion::Separation,
        Criterion::Gaps,
        Criterion::Pairs,
        Criterion::Fa,
        Criterion::Rigidity,
        Criterion::Smallsep,
        Criterion::Dichotomy,
        Criterion::Limsup,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Criterion::Coverage => "coverage",
            Criterion::Necessary => "necessary",
            Criterion::Separation => "separation",
            Criterion::Gaps => "gaps",
            Criterion::Pairs => "pairs",
            Criterion::Fa => "fa",
            Criterion::Rigidity => "rigidity",
            Criterion::Smallsep => "smallsep",
            Criterion::Dichotomy => "dichotomy",
            Criterion::Limsup => "limsup",
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Criterion {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Criterion::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::config("criteria", format!("unknown criterion `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Space {
    #[default]
    Circle,
    Cantor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputSpec {
    pub path: String,
    #[serde(default)]
    pub format: OutputFormat,
}

/// Grid and threshold parameters. Every field has a default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Grids {
    pub n_min: usize,
    pub n_max: usize,
    pub n_ratio: f64,
    /// Number of equal windows scanned besides the full circle.
    pub windows: usize,
    pub eps: f64,
    pub eps_ladder: Vec<f64>,
    pub d_floor: f64,
    /// Scales for the `f_A` estimate.
    #[serde(rename = "A")]
    pub a: Vec<usize>,
    pub z_points: usize,
    /// Radii `2^-r_exp_lo, …, 2^-r_exp_hi`.
    pub r_exp_lo: i32,
    pub r_exp_hi: i32,
    pub zero_tolerance: f64,
    #[serde(rename = "M")]
    pub m: usize,
    pub e: f64,
    pub r_max: u32,
    pub c_floor: f64,
    /// Gap thresholds `s` in `#{gaps < s/n}`.
    pub gap_s: Vec<f64>,
    /// Largest fraction of small gaps tolerated for gap evidence.
    pub gap_eps: f64,
    /// Pair radius `u = pair_s / n`.
    pub pair_s: f64,
    /// Rigidity times; empty means convergent denominators (rotations) or a geometric grid.
    pub rigidity_n: Vec<u64>,
    pub grid_size: usize,
    pub dichotomy_samples: usize,
    pub dichotomy_exponent: f64,
    /// Tail starts for the limsup proxy; empty means `1, n_max/100, n_max/10`.
    pub tail_starts: Vec<usize>,
    pub depth: u32,
}

impl Default for Grids {
    fn default() -> Self {
        Grids {
            n_min: 100,
            n_max: 1_000_000,
            n_ratio: 10.0,
            windows: 16,
            eps: 0.1,
            eps_ladder: default_eps_ladder(),
            d_floor: DEFAULT_D_FLOOR,
            a: Vec::new(),
            z_points: 64,
            r_exp_lo: 3,
            r_exp_hi: 12,
            zero_tolerance: DEFAULT_ZERO_TOLERANCE,
            m: 10,
            e: 1.0,
            r_max: 5,
            c_floor: 0.1,
            gap_s: vec![0.01, 0.1, 1.0],
            gap_eps: 0.05,
            pair_s: 0.01,
            rigidity_n: Vec::new(),
            grid_size: 2000,
            dichotomy_samples: 100,
            dichotomy_exponent: 1.0,
            tail_starts: Vec::new(),
            depth: crate::cantor::DEFAULT_DEPTH,
        }
    }
}

impl Grids {
    pub fn n_grid(&self) -> Result<Vec<usize>> {
        geometric_grid(self.n_min, self.n_max, self.n_ratio).map_err(|e| Error::config("grids.n_ratio", e.to_string()))
    }

    pub fn z_grid(&self) -> Vec<CirclePoint> {
        midpoint_grid(self.z_points)
    }

    pub fn r_grid(&self) -> Vec<f64> {
        dyadic_radii(self.r_exp_lo, self.r_exp_hi)
    }

    pub fn tail_starts_or_default(&self) -> Vec<usize> {
        if self.tail_starts.is_empty() {
            let mut t = vec![1, self.n_max / 100, self.n_max / 10];
            t.retain(|&k| k >= 1);
            t.dedup();
            t
        } else {
            self.tail_starts.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub sequence: SequenceSpec,
    #[serde(default)]
    pub space: Space,
    pub criteria: Vec<Criterion>,
    #[serde(default)]
    pub grids: Grids,
    #[serde(default)]
    pub radii: Option<RadiiSpec>,
    #[serde(default)]
    pub output: Option<OutputSpec>,
    #[serde(default)]
    pub seed: u64,
}

fn field_of_json(v: &serde_json::Value) -> Result<()> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::config("config", "top level must be a JSON object"))?;
    for key in obj.keys() {
        if !["sequence", "space", "criteria", "grids", "radii", "output", "seed"].contains(&key.as_str()) {
            return Err(Error::config(key.as_str(), "unknown field"));
        }
    }
    if let Some(c) = obj.get("criteria") {
        let list = c.as_array().ok_or_else(|| Error::config("criteria", "must be a list"))?;
        for (i, item) in list.iter().enumerate() {
            let s = item
                .as_str()
                .ok_or_else(|| Error::config(format!("criteria[{i}]"), "must be a string"))?;
            s.parse::<Criterion>()
                .map_err(|_| Error::config(format!("criteria[{i}]"), format!("unknown criterion `{s}`")))?;
        }
    }
    if let Some(s) = obj.get("space") {
        if !matches!(s.as_str(), Some("circle" | "cantor")) {
            return Err(Error::config("space", format!("expected \"circle\" or \"cantor\", got {s}")));
        }
    }
    for part in ["sequence", "grids", "radii", "output"] {
        if let Some(sub) = obj.get(part) {
            let check = match part {
                "sequence" => serde_json::from_value::<SequenceSpec>(sub.clone()).map(|_| ()),
                "grids" => serde_json::from_value::<Grids>(sub.clone()).map(|_| ()),
                "radii" => serde_json::from_value::<Option<RadiiSpec>>(sub.clone()).map(|_| ()),
                _ => serde_json::from_value::<Option<OutputSpec>>(sub.clone()).map(|_| ()),
            };
            check.map_err(|e| Error::config(part, e.to_string()))?;
        }
    }
    Ok(())
}

impl ExperimentConfig {
    pub fn new(sequence: SequenceSpec, criteria: Vec<Criterion>) -> Self {
        ExperimentConfig {
            sequence,
            space: Space::Circle,
            criteria,
            grids: Grids::default(),
            radii: None,
            output: None,
            seed: 0,
        }
    }

    /// Parses and validates, naming the offending field on failure.
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg = Self::parse(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Parses without cross-field validation, so callers can amend the result first.
    pub fn parse(text: &str) -> Result<Self> {
        let raw: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::config("config", format!("invalid JSON: {e}")))?;
        field_of_json(&raw)?;
        serde_json::from_value(raw).map_err(|e| Error::config("config", e.to_string()))
    }

    /// Replaces one grid field, given as JSON (bare words are taken as strings).
    pub fn set_grid(&mut self, key: &str, value: &str) -> Result<()> {
        let field = format!("grids.{key}");
        let parsed: serde_json::Value =
            serde_json::from_str(value).unwrap_or_else(|_| serde_json::Value::String(value.to_string()));
        let mut grids = serde_json::to_value(&self.grids)?;
        let obj = grids.as_object_mut().expect("grids serialize to an object");
        if !obj.contains_key(key) {
            return Err(Error::config(field, "unknown grid parameter"));
        }
        obj.insert(key.to_string(), parsed);
        self.grids = serde_json::from_value(grids).map_err(|e| Error::config(field, e.to_string()))?;
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Number of points the requested criteria read.
    pub fn horizon(&self) -> usize {
        let g = &self.grids;
        let mut h = g.n_max;
        for c in &self.criteria {
            h = h.max(match c {
                Criterion::Fa => g.a.last().copied().unwrap_or(0),
                Criterion::Separation => g.m.checked_pow(g.r_max).unwrap_or(usize::MAX),
                Criterion::Smallsep => g.n_max + 1,
                _ => 0,
            });
        }
        h
    }

    pub fn validate(&self) -> Result<()> {
        let g = &self.grids;
        if self.criteria.is_empty() {
            return Err(Error::config("criteria", "at least one criterion is required"));
        }
        for (i, c) in self.criteria.iter().enumerate() {
            if self.criteria[..i].contains(c) {
                return Err(Error::config(format!("criteria[{i}]"), format!("criterion `{c}` is listed twice")));
            }
        }
        self.sequence.validate().map_err(|e| Error::config("sequence", e.to_string()))?;
        if g.n_min == 0 {
            return Err(Error::config("grids.n_min", "must be at least 1"));
        }
        if g.n_max < g.n_min {
            return Err(Error::config("grids.n_max", "must be at least grids.n_min"));
        }
        if !(g.n_ratio > 1.0) {
            return Err(Error::config("grids.n_ratio", "must exceed 1"));
        }
        if g.windows == 0 {
            return Err(Error::config("grids.windows", "must be at least 1"));
        }
        if self.space == Space::Cantor {
            if let Some(c) = self.criteria.iter().find(|&&c| c != Criterion::Coverage) {
                return Err(Error::config("criteria", format!("criterion `{c}` is not available on the Cantor space")));
            }
            if !g.windows.is_power_of_two() {
                return Err(Error::config("grids.windows", "Cantor windows are level cylinders; use a power of two"));
            }
            if g.depth == 0 || g.depth > crate::cantor::MAX_DEPTH {
                return Err(Error::config("grids.depth", format!("must lie in 1..={}", crate::cantor::MAX_DEPTH)));
            }
        }
        for c in &self.criteria {
            match c {
                Criterion::Necessary => {
                    if !(g.eps > 0.0) {
                        return Err(Error::config("grids.eps", "must be positive"));
                    }
                    if g.eps_ladder.is_empty() || g.eps_ladder.iter().any(|&e| !(e > 0.0)) {
                        return Err(Error::config("grids.eps_ladder", "must be a nonempty list of positive reals"));
                    }
                }
                Criterion::Fa => {
                    if g.a.is_empty() {
                        return Err(Error::config("grids.A", "the fa criterion needs a nonempty index set A"));
                    }
                    if g.a[0] == 0 || g.a.windows(2).any(|w| w[0] >= w[1]) {
                        return Err(Error::config("grids.A", "must be strictly increasing positive integers"));
                    }
                    if g.z_points == 0 {
                        return Err(Error::config("grids.z_points", "must be at least 1"));
                    }
                    if g.r_exp_hi < g.r_exp_lo {
                        return Err(Error::config("grids.r_exp_hi", "must be at least grids.r_exp_lo"));
                    }
                    let smallest_r = 0.5f64.powi(g.r_exp_lo);
                    if (*g.a.last().expect("nonempty") as f64) < (1.0 / smallest_r).ceil() {
                        return Err(Error::config("grids.A", "max(A) must reach 1/r for some r in the r grid"));
                    }
                }
                Criterion::Separation => {
                    if g.m < 2 {
                        return Err(Error::config("grids.M", "must be at least 2"));
                    }
                    if g.r_max == 0 || g.m.checked_pow(g.r_max).is_none_or(|t| t > 100_000_000) {
                        return Err(Error::config("grids.r_max", "M^r_max must lie in 1..=10^8"));
                    }
                    if !(g.e > 0.0) {
                        return Err(Error::config("grids.e", "must be positive"));
                    }
                }
                Criterion::Gaps => {
                    if g.gap_s.is_empty() || g.gap_s.iter().any(|&s| !(s > 0.0)) {
                        return Err(Error::config("grids.gap_s", "must be a nonempty list of positive reals"));
                    }
                }
                Criterion::Pairs => {
                    if !(g.pair_s > 0.0) {
                        return Err(Error::config("grids.pair_s", "must be positive"));
                    }
                }
                Criterion::Rigidity => match &self.sequence {
                    SequenceSpec::Kronecker { .. } => {}
                    SequenceSpec::IetOrbit { .. } => {
                        if g.grid_size < 1000 {
                            return Err(Error::config("grids.grid_size", "must be at least 1000"));
                        }
                    }
                    _ => {
                        return Err(Error::config(
                            "criteria",
                            "rigidity needs a kronecker or iet_orbit sequence",
                        ))
                    }
                },
                Criterion::Dichotomy => {
                    if g.dichotomy_samples == 0 {
                        return Err(Error::config("grids.dichotomy_samples", "must be at least 1"));
                    }
                    if !(g.dichotomy_exponent > 0.0) {
                        return Err(Error::config("grids.dichotomy_exponent", "must be positive"));
                    }
                }
                Criterion::Limsup => {
                    let radii = self
                        .radii
                        .as_ref()
                        .ok_or_else(|| Error::config("radii", "the limsup criterion needs a radii sequence"))?;
                    radii.validate().map_err(|e| Error::config("radii", e.to_string()))?;
                    if !radii.covers(g.n_max as u64) {
                        return Err(Error::config("radii", format!("radii end before the horizon {}", g.n_max)));
                    }
                    if let Some(&k) = g.tail_starts.iter().find(|&&k| k == 0 || k > g.n_max) {
                        return Err(Error::config("grids.tail_starts", format!("tail start {k} outside 1..=n_max")));
                    }
                }
                Criterion::Coverage | Criterion::Smallsep => {}
            }
        }
        if let SequenceSpec::Imported { path } = &self.sequence {
            let available = crate::sequences::io::read_points(std::path::Path::new(path))
                .map_err(|e| Error::config("sequence", e.to_string()))?
                .len();
            if available < self.horizon() {
                return Err(Error::config(
                    "grids.n_max",
                    format!("criteria need {} points, {path} holds {available}", self.horizon()),
                ));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fa_without_a_names_field() {
        let cfg = ExperimentConfig::new(SequenceSpec::golden(), vec![Criterion::Fa]);
        match cfg.validate() {
            Err(Error::Config { field, .. }) => assert_eq!(field, "grids.A"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_criterion_names_field() {
        let text = r#"{"sequence": {"kind": "sqrt"}, "criteria": ["coverage", "bogus"]}"#;
        match ExperimentConfig::from_json(text) {
            Err(Error::Config { field, message }) => {
                assert_eq!(field, "criteria[1]");
                assert!(message.contains("bogus"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn malformed_radii_names_field() {
        let text = r#"{"sequence": {"kind": "sqrt"}, "criteria": ["limsup"],
            "radii": {"form": "block_constant", "breaks": [10, 5], "values": [0.1, 0.2]}}"#;
        match ExperimentConfig::from_json(text) {
            Err(Error::Config { field, .. }) => assert_eq!(field, "radii"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn grid_typos_are_rejected() {
        let text = r#"{"sequence": {"kind": "sqrt"}, "criteria": ["coverage"], "grids": {"nmax": 10}}"#;
        match ExperimentConfig::from_json(text) {
            Err(Error::Config { field, .. }) => assert_eq!(field, "grids"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn round_trip() {
        let mut cfg = ExperimentConfig::new(SequenceSpec::half_golden(), vec![Criterion::Coverage, Criterion::Fa]);
        cfg.grids.a = vec![1000, 10_000];
        cfg.radii = Some(RadiiSpec::harmonic());
        let text = cfg.to_json().unwrap();
        assert_eq!(ExperimentConfig::from_json(&text).unwrap(), cfg);
    }

    #[test]
    fn rigidity_needs_rotation_or_iet() {
        let cfg = ExperimentConfig::new(SequenceSpec::Sqrt, vec![Criterion::Rigidity]);
        assert!(matches!(cfg.validate(), Err(Error::Config { .. })));
    }
}
