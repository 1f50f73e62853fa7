//! Deterministic generators for the test sequences, indexed from 1.

mod alpha;
mod iet;
pub mod io;
mod transform;

use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use alpha::{fixed_norm, fixed_to_f64, Alpha, RotationNumber};
pub use iet::{iet_apply, IetMap, IetSpec};
pub use transform::{delete_subsequence, empirical_measure, perturb_lp, EmpiricalMeasure};

use crate::cantor;
use crate::error::{Error, Result};
use crate::geometry::CirclePoint;

/// Points drawn from one counter-based stream position onward. Chunks keep
/// output independent of how work is split across threads.
const IID_CHUNK: usize = 4096;

/// Law of an i.i.d. sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum Distribution {
    /// Lebesgue measure on `[0, 1)`.
    Uniform,
    /// Uniform on `[lo, hi)`.
    UniformOn { lo: f64, hi: f64 },
    /// CDF `x^gamma` on `[0, 1]`, sampled by numeric inversion.
    PowerCdf { gamma: f64 },
}

impl Distribution {
    fn validate(&self) -> Result<()> {
        match *self {
            Distribution::Uniform => Ok(()),
            Distribution::UniformOn { lo, hi } => {
                if 0.0 <= lo && lo < hi && hi <= 1.0 {
                    Ok(())
                } else {
                    Err(Error::Parameter(format!("uniform_on needs 0 <= lo < hi <= 1, got [{lo}, {hi})")))
                }
            }
            Distribution::PowerCdf { gamma } => {
                if gamma.is_finite() && gamma > 0.0 {
                    Ok(())
                } else {
                    Err(Error::Parameter(format!("power_cdf exponent must be positive, got {gamma}")))
                }
            }
        }
    }

    fn sample(&self, u: f64) -> f64 {
        match *self {
            Distribution::Uniform => u,
            Distribution::UniformOn { lo, hi } => lo + u * (hi - lo),
            Distribution::PowerCdf { gamma } => inverse_cdf(|x| x.powf(gamma), u),
        }
    }
}

/// Smallest `x ∈ [0, 1]` with `cdf(x) >= u`, by bisection to double resolution.
///
/// `cdf` must be nondecreasing on `[0, 1]` with `cdf(1) = 1`.
pub fn inverse_cdf<F: Fn(f64) -> f64>(cdf: F, u: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..64 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if cdf(mid) >= u {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Declarative description of a sequence `x_1, x_2, …` in `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SequenceSpec {
    /// `{n α}`.
    Kronecker { alpha: Alpha },
    /// `{n^k α}`, with `n^k` formed exactly in 128-bit integers.
    Power { alpha: Alpha, k: u32 },
    /// `{log_c n}`.
    Log { c: f64 },
    /// `{√n}`.
    Sqrt,
    /// `{ln ln(3 + n)}`.
    LnLn,
    /// `0, 1, 1/2, 1/3, 2/3, 1/4, 3/4, …` (reduced fractions by denominator, then numerator).
    Farey,
    Iid { distribution: Distribution, seed: u64 },
    /// Forward orbit `x0, T x0, T² x0, …` of an interval exchange.
    IetOrbit { iet: IetSpec, x0: f64 },
    /// `factor · x_n` for an inner sequence, reduced mod 1.
    Scaled { inner: Box<SequenceSpec>, factor: f64 },
    /// Endpoints of the middle-thirds Cantor set in construction order.
    CantorEndpoints,
    /// Points read from a text or binary file.
    Imported { path: String },
}

impl SequenceSpec {
    pub fn kronecker(alpha: Alpha) -> Self {
        SequenceSpec::Kronecker { alpha }
    }

    pub fn golden() -> Self {
        SequenceSpec::Kronecker { alpha: Alpha::Golden }
    }

    /// `{n φ}/2`, supported on `[0, 1/2)`.
    pub fn half_golden() -> Self {
        SequenceSpec::Scaled {
            inner: Box::new(SequenceSpec::golden()),
            factor: 0.5,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SequenceSpec::Kronecker { alpha } => alpha.resolve().map(|_| ()),
            SequenceSpec::Power { alpha, k } => {
                if *k < 2 {
                    return Err(Error::Parameter(format!("power sequence needs k >= 2, got {k}")));
                }
                alpha.resolve().map(|_| ())
            }
            SequenceSpec::Log { c } => {
                if c.is_finite() && *c > 1.0 {
                    Ok(())
                } else {
                    Err(Error::Parameter(format!("log base must exceed 1, got {c}")))
                }
            }
            SequenceSpec::Sqrt | SequenceSpec::LnLn | SequenceSpec::Farey => Ok(()),
            SequenceSpec::CantorEndpoints => Ok(()),
            SequenceSpec::Iid { distribution, .. } => distribution.validate(),
            SequenceSpec::IetOrbit { iet, x0 } => {
                iet.validate()?;
                if x0.is_finite() {
                    Ok(())
                } else {
                    Err(Error::Parameter("IET starting point must be finite".into()))
                }
            }
            SequenceSpec::Scaled { inner, factor } => {
                if !factor.is_finite() {
                    return Err(Error::Parameter("scale factor must be finite".into()));
                }
                inner.validate()
            }
            SequenceSpec::Imported { path } => {
                if path.is_empty() {
                    Err(Error::Parameter("imported sequence needs a path".into()))
                } else {
                    Ok(())
                }
            }
        }
    }
}

impl FromStr for SequenceSpec {
    type Err = Error;

    /// Short forms: `golden`, `half-golden`, `kronecker:ALPHA`, `power:K:ALPHA`, `log:C`,
    /// `sqrt`, `lnln`, `farey`, `cantor`, `iid:SEED`, `file:PATH`; anything starting
    /// with `{` is read as JSON.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('{') {
            return Ok(serde_json::from_str(s)?);
        }
        let bad = || Error::Parameter(format!("unrecognised sequence `{s}`"));
        let (head, rest) = s.split_once(':').unwrap_or((s, ""));
        let spec = match (head, rest) {
            ("golden", "") => SequenceSpec::golden(),
            ("half-golden", "") => SequenceSpec::half_golden(),
            ("sqrt", "") => SequenceSpec::Sqrt,
            ("lnln", "") => SequenceSpec::LnLn,
            ("farey", "") => SequenceSpec::Farey,
            ("cantor", "") => SequenceSpec::CantorEndpoints,
            ("kronecker", a) if !a.is_empty() => SequenceSpec::Kronecker { alpha: a.parse()? },
            ("power", r) => {
                let (k, a) = r.split_once(':').ok_or_else(bad)?;
                SequenceSpec::Power { alpha: a.parse()?, k: k.parse().map_err(|_| bad())? }
            }
            ("log", c) => SequenceSpec::Log { c: c.parse().map_err(|_| bad())? },
            ("iid", seed) => SequenceSpec::Iid {
                distribution: Distribution::Uniform,
                seed: seed.parse().map_err(|_| bad())?,
            },
            ("file", path) if !path.is_empty() => SequenceSpec::Imported { path: path.to_string() },
            _ => return Err(bad()),
        };
        spec.validate()?;
        Ok(spec)
    }
}

fn indexed<F>(n: usize, f: F) -> Vec<CirclePoint>
where
    F: Fn(u64) -> f64 + Sync,
{
    (1..=n as u64).into_par_iter().map(|i| CirclePoint::new(f(i))).collect()
}

fn frac(x: f64) -> f64 {
    x - x.floor()
}

/// The first `n` points `x_1..x_n` of the sequence.
pub fn generate(spec: &SequenceSpec, n: usize) -> Result<Vec<CirclePoint>> {
    if n == 0 {
        return Err(Error::Parameter("sequence length must be at least 1".into()));
    }
    spec.validate()?;
    Ok(match spec {
        SequenceSpec::Kronecker { alpha } => {
            let a = alpha.resolve()?;
            indexed(n, |i| a.frac_of_multiple(i as u128))
        }
        SequenceSpec::Power { alpha, k } => {
            let a = alpha.resolve()?;
            if (n as u128).checked_pow(*k).is_none() {
                return Err(Error::Parameter(format!(
                    "n^k overflows 128 bits for n = {n}, k = {k}"
                )));
            }
            let k = *k;
            indexed(n, |i| a.frac_of_multiple((i as u128).pow(k)))
        }
        SequenceSpec::Log { c } => {
            let ln_c = c.ln();
            indexed(n, |i| frac((i as f64).ln() / ln_c))
        }
        SequenceSpec::Sqrt => indexed(n, |i| frac((i as f64).sqrt())),
        SequenceSpec::LnLn => indexed(n, |i| frac((3.0 + i as f64).ln().ln())),
        SequenceSpec::Farey => farey(n),
        SequenceSpec::Iid { distribution, seed } => iid(distribution, *seed, n),
        SequenceSpec::IetOrbit { iet, x0 } => iet.map().orbit(CirclePoint::new(*x0), n),
        SequenceSpec::Scaled { inner, factor } => generate(inner, n)?
            .into_iter()
            .map(|p| CirclePoint::new(p.value() * factor))
            .collect(),
        SequenceSpec::CantorEndpoints => cantor::cantor_endpoints(n, cantor::DEFAULT_DEPTH)?
            .iter()
            .map(|p| CirclePoint::new(p.value()))
            .collect(),
        SequenceSpec::Imported { path } => {
            let points = io::read_points(std::path::Path::new(path))?;
            if points.len() < n {
                return Err(Error::Input(format!(
                    "{path} holds {} points, {n} requested",
                    points.len()
                )));
            }
            points[..n].to_vec()
        }
    })
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn farey(n: usize) -> Vec<CirclePoint> {
    let mut out = Vec::with_capacity(n);
    out.push(CirclePoint::ZERO);
    if n > 1 {
        // the literal 1/1, which is 0 on the circle
        out.push(CirclePoint::ZERO);
    }
    let mut q = 2u64;
    while out.len() < n {
        for p in 1..q {
            if out.len() == n {
                break;
            }
            if gcd(p, q) == 1 {
                out.push(CirclePoint::new(p as f64 / q as f64));
            }
        }
        q += 1;
    }
    out
}

fn iid(distribution: &Distribution, seed: u64, n: usize) -> Vec<CirclePoint> {
    let chunks = n.div_ceil(IID_CHUNK);
    (0..chunks)
        .into_par_iter()
        .flat_map_iter(|c| {
            let start = c * IID_CHUNK;
            let len = IID_CHUNK.min(n - start);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            // each f64 draw consumes two 32-bit words
            rng.set_word_pos(2 * start as u128);
            (0..len)
                .map(|_| CirclePoint::new(distribution.sample(rng.random::<f64>())))
                .collect::<Vec<_>>()
        })
        .collect()
}
