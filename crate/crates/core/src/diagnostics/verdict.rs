use std::fmt;

use serde::{Deserialize, Serialize};

/// Outcome of a finite diagnostic. None of these is a proof.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// The sufficient condition holds on every grid cell tested.
    BcEvidence,
    /// A concrete window and scale sequence on which the necessary condition fails.
    NotBcWitness,
    /// A hypothesis that forces non-BC behaviour holds at the tested horizon.
    NotBcEvidence,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::BcEvidence => "bc-evidence",
            Verdict::NotBcWitness => "not-bc-witness",
            Verdict::NotBcEvidence => "not-bc-evidence",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The criterion a verdict rests on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TheoremTag {
    /// Uniform lower bound on `C_N(J) / λ(J)`.
    CoverageSufficient,
    /// `C_N(J) < ε λ(J)` along a scale sequence.
    CoverageNecessary,
    /// Positive measure of the zero set of `f_A`.
    FaZeroSet,
    /// `liminf n ∫ d(T^n x, x) dx = 0`.
    QuantitativeRigidity,
    /// `limsup n d(x_n, x_{n+1}) = 0`.
    SmallSeparation,
    /// Few gaps below `s/n`.
    GapCriterion,
    /// Few close pairs.
    PairCriterion,
    /// A fixed fraction of each block is `e/M^r` separated.
    SeparationKey,
    /// `liminf s_n d(x_n, y)` is zero or infinite for almost every `y`.
    ZeroInfinityDichotomy,
    /// Measure of tail unions of balls.
    LimsupCoverage,
    /// Coverage in an Ahlfors regular space with radii `(1/N)^{1/ω}`.
    AhlforsCoverage,
}

impl TheoremTag {
    pub fn as_str(self) -> &'static str {
        match self {
            TheoremTag::CoverageSufficient => "coverage-sufficient",
            TheoremTag::CoverageNecessary => "coverage-necessary",
            TheoremTag::FaZeroSet => "fa-zero-set",
            TheoremTag::QuantitativeRigidity => "quantitative-rigidity",
            TheoremTag::SmallSeparation => "small-separation",
            TheoremTag::GapCriterion => "gap-criterion",
            TheoremTag::PairCriterion => "pair-criterion",
            TheoremTag::SeparationKey => "separation-key",
            TheoremTag::ZeroInfinityDichotomy => "zero-infinity-dichotomy",
            TheoremTag::LimsupCoverage => "limsup-coverage",
            TheoremTag::AhlforsCoverage => "ahlfors-coverage",
        }
    }
}

impl fmt::Display for TheoremTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn serialized_names_match_display() {
        for v in [Verdict::BcEvidence, Verdict::NotBcWitness, Verdict::NotBcEvidence, Verdict::Inconclusive] {
            assert_eq!(serde_json::to_string(&v).unwrap(), format!("\"{v}\""));
        }
        let t = TheoremTag::QuantitativeRigidity;
        assert_eq!(serde_json::to_string(&t).unwrap(), format!("\"{t}\""));
    }
}
