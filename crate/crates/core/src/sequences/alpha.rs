//! Rotation numbers in 128-bit fixed point.
//!
//! A rotation number `α ∈ [0, 1)` is stored as `floor(α · 2^128)`. Then
//! `{n α} · 2^128` is `n * A` with wrapping arithmetic, so fractional parts of
//! large multiples keep their precision (absolute error at most `n · 2^-128`).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const TWO_POW_128: f64 = 340_282_366_920_938_463_463_374_607_431_768_211_456.0;

fn two_pow(bits: u32) -> BigUint {
    BigUint::from(1u8) << bits
}

fn big_to_u128(x: &BigUint) -> u128 {
    let digits = x.to_u64_digits();
    let lo = digits.first().copied().unwrap_or(0) as u128;
    let hi = digits.get(1).copied().unwrap_or(0) as u128;
    lo | (hi << 64)
}

/// Converts a 128-bit fixed-point fraction to `f64` in `[0, 1]`.
#[inline]
pub fn fixed_to_f64(x: u128) -> f64 {
    x as f64 / TWO_POW_128
}

/// Circle norm `‖x‖` of a fixed-point fraction.
#[inline]
pub fn fixed_norm(x: u128) -> f64 {
    fixed_to_f64(x.min(x.wrapping_neg()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RotationNumber(u128);

impl RotationNumber {
    pub fn from_fixed(bits: u128) -> Self {
        RotationNumber(bits)
    }

    /// Exact conversion of the fractional part of a double.
    pub fn from_f64(x: f64) -> Result<Self> {
        if !x.is_finite() {
            return Err(Error::Parameter(format!("rotation number must be finite, got {x}")));
        }
        let frac = x.rem_euclid(1.0);
        // frac has at most 53 significant bits, so the product is exact
        Ok(RotationNumber((frac * TWO_POW_128) as u128))
    }

    /// `p/q mod 1`, rounded down.
    pub fn ratio(p: i64, q: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::Parameter("rotation ratio has zero denominator".into()));
        }
        let r = p.rem_euclid(q as i64) as u64;
        let bits = (BigUint::from(r) << 128u32) / BigUint::from(q);
        Ok(RotationNumber(big_to_u128(&bits)))
    }

    /// The golden mean mod 1, `(√5 − 1)/2`.
    pub fn golden() -> Self {
        let root5 = (BigUint::from(5u8) << 256u32).sqrt();
        RotationNumber(big_to_u128(&((root5 - two_pow(128)) >> 1u32)))
    }

    /// `√n mod 1`.
    pub fn sqrt(n: u64) -> Self {
        let root = (BigUint::from(n) << 256u32).sqrt();
        RotationNumber(big_to_u128(&(root % two_pow(128))))
    }

    /// `Σ_{k=1}^{terms} base^{−k!}`, each term truncated to 128 bits.
    ///
    /// Terms below `2^-128` vanish; they cannot move `{nα}` for any `n < 2^64`.
    pub fn liouville(base: u32, terms: u32) -> Result<Self> {
        if base < 2 {
            return Err(Error::Parameter(format!("liouville base must be at least 2, got {base}")));
        }
        let one = two_pow(128);
        let mut sum = BigUint::from(0u8);
        let mut factorial: u32 = 1;
        for k in 1..=terms {
            factorial = factorial.saturating_mul(k);
            if (factorial as f64) * (base as f64).log2() > 130.0 {
                break;
            }
            sum += &one / BigUint::from(base).pow(factorial);
        }
        Ok(RotationNumber(big_to_u128(&sum)))
    }

    pub fn bits(self) -> u128 {
        self.0
    }

    pub fn to_f64(self) -> f64 {
        fixed_to_f64(self.0)
    }

    /// `{n α}` as a fixed-point fraction.
    #[inline]
    pub fn multiple(self, n: u128) -> u128 {
        n.wrapping_mul(self.0)
    }

    /// `{n α}` as a double.
    #[inline]
    pub fn frac_of_multiple(self, n: u128) -> f64 {
        fixed_to_f64(self.multiple(n))
    }

    /// `‖n α‖`, the distance from `n α` to the nearest integer.
    #[inline]
    pub fn norm_of_multiple(self, n: u128) -> f64 {
        fixed_norm(self.multiple(n))
    }

    /// Continued fraction partial quotients `[0; a_1, a_2, …]` of the stored rational.
    pub fn partial_quotients(self, max_terms: usize) -> Vec<u128> {
        let mut num = BigUint::from(self.0);
        let mut den = two_pow(128);
        let zero = BigUint::from(0u8);
        let mut out = Vec::new();
        // skip the integer part, which is 0
        std::mem::swap(&mut num, &mut den);
        while den != zero && out.len() < max_terms {
            let q = &num / &den;
            let r = &num % &den;
            out.push(big_to_u128(&q));
            num = den;
            den = r;
        }
        out
    }

    /// Denominators of the convergents, up to and including the first one above `max`.
    ///
    /// Only the first ~64 bits of the expansion are trustworthy, so the caller
    /// should keep `max` well below `2^64`.
    pub fn convergent_denominators(self, max: u128) -> Vec<u128> {
        let mut out = Vec::new();
        let (mut q_prev, mut q) = (0u128, 1u128);
        for a in self.partial_quotients(200) {
            let Some(next) = a.checked_mul(q).and_then(|v| v.checked_add(q_prev)) else {
                break;
            };
            q_prev = q;
            q = next;
            out.push(q);
            if q > max {
                break;
            }
        }
        out
    }
}

/// Declarative rotation number, as it appears in configs and on the command line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Alpha {
    Golden,
    Sqrt { n: u64 },
    Liouville { base: u32, terms: u32 },
    Ratio { p: i64, q: u64 },
    Value { value: f64 },
}

impl Alpha {
    pub fn resolve(&self) -> Result<RotationNumber> {
        match *self {
            Alpha::Golden => Ok(RotationNumber::golden()),
            Alpha::Sqrt { n } => Ok(RotationNumber::sqrt(n)),
            Alpha::Liouville { base, terms } => RotationNumber::liouville(base, terms),
            Alpha::Ratio { p, q } => RotationNumber::ratio(p, q),
            Alpha::Value { value } => RotationNumber::from_f64(value),
        }
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Alpha::Golden => write!(f, "golden"),
            Alpha::Sqrt { n } => write!(f, "sqrt:{n}"),
            Alpha::Liouville { base, terms } => write!(f, "liouville:{base}:{terms}"),
            Alpha::Ratio { p, q } => write!(f, "{p}/{q}"),
            Alpha::Value { value } => write!(f, "{value}"),
        }
    }
}

/// Accepts `golden`, `sqrt:N`, `liouville:BASE:TERMS`, `P/Q` or a decimal.
impl FromStr for Alpha {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parameter(format!("cannot parse rotation number `{s}`"));
        if s == "golden" {
            return Ok(Alpha::Golden);
        }
        if let Some(rest) = s.strip_prefix("sqrt:") {
            return Ok(Alpha::Sqrt { n: rest.parse().map_err(|_| bad())? });
        }
        if let Some(rest) = s.strip_prefix("liouville") {
            let mut parts = rest.split(':').skip(1);
            let base = parts.next().map(str::parse).transpose().map_err(|_| bad())?.unwrap_or(10);
            let terms = parts.next().map(str::parse).transpose().map_err(|_| bad())?.unwrap_or(5);
            return Ok(Alpha::Liouville { base, terms });
        }
        if let Some((p, q)) = s.split_once('/') {
            return Ok(Alpha::Ratio {
                p: p.trim().parse().map_err(|_| bad())?,
                q: q.trim().parse().map_err(|_| bad())?,
            });
        }
        s.parse::<f64>().map(|value| Alpha::Value { value }).map_err(|_| bad())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_matches_double() {
        let g = RotationNumber::golden().to_f64();
        assert!((g - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-16);
    }

    #[test]
    fn golden_partial_quotients_are_ones() {
        let pq = RotationNumber::golden().partial_quotients(60);
        assert!(pq[..50].iter().all(|&a| a == 1), "{pq:?}");
    }

    #[test]
    fn convergents_of_golden_are_fibonacci() {
        let q = RotationNumber::golden().convergent_denominators(100);
        assert_eq!(q, vec![1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144]);
    }

    #[test]
    fn sqrt_two() {
        let r = RotationNumber::sqrt(2).to_f64();
        assert!((r - (2f64.sqrt() - 1.0)).abs() < 2.3e-16);
    }

    #[test]
    fn half_has_period_two() {
        let h = RotationNumber::ratio(1, 2).unwrap();
        assert_eq!(h.frac_of_multiple(1), 0.5);
        assert_eq!(h.frac_of_multiple(2), 0.0);
        assert_eq!(h.norm_of_multiple(4), 0.0);
    }

    #[test]
    fn liouville_value() {
        let l = RotationNumber::liouville(10, 5).unwrap().to_f64();
        assert!((l - (0.1 + 0.01 + 1e-6 + 1e-24)).abs() < 1e-17);
        // 10^6 α ≡ 10^-18 + 10^-96 + ... mod 1
        let n = RotationNumber::liouville(10, 5).unwrap().norm_of_multiple(1_000_000);
        assert!((n - 1e-18).abs() < 1e-30, "{n}");
    }

    #[test]
    fn large_multiples_keep_precision() {
        // {n^2 α} for n = 10^6 depends on ~40 bits beyond what a double keeps
        let g = RotationNumber::golden();
        let n: u128 = 1_000_000;
        let fixed = g.frac_of_multiple(n * n);
        let g200 = ((BigUint::from(5u8) << 400u32).sqrt() - two_pow(200)) >> 1u32;
        let frac = (g200 * BigUint::from(n * n)) % two_pow(200);
        let exact = (frac >> 147u32).to_u64_digits()[0] as f64 / (1u64 << 53) as f64;
        assert!((fixed - exact).abs() < 1e-12, "{fixed} vs {exact}");
    }

    #[test]
    fn parse_forms() {
        assert_eq!("golden".parse::<Alpha>().unwrap(), Alpha::Golden);
        assert_eq!("sqrt:3".parse::<Alpha>().unwrap(), Alpha::Sqrt { n: 3 });
        assert_eq!(
            "liouville:3:4".parse::<Alpha>().unwrap(),
            Alpha::Liouville { base: 3, terms: 4 }
        );
        assert_eq!("1/2".parse::<Alpha>().unwrap(), Alpha::Ratio { p: 1, q: 2 });
        assert_eq!("0.25".parse::<Alpha>().unwrap(), Alpha::Value { value: 0.25 });
        assert!("pi".parse::<Alpha>().is_err());
        for a in ["golden", "sqrt:3", "liouville:10:5", "1/3", "0.125"] {
            let parsed: Alpha = a.parse().unwrap();
            assert_eq!(parsed.to_string(), a);
        }
    }
}
