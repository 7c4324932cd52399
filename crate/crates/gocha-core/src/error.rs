//! Error type shared by the whole crate.
//!
//! Errors fall into three classes, mirrored by the CLI exit codes:
//! input/usage problems, mathematical inconsistencies detected by the
//! exact pipelines (these are correctness oracles, never rounded away),
//! and the oracle resource guard.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed input: bad JSON, unknown generator, word grammar, non-prime p.
    #[error("parse error: {0}")]
    Parse(String),

    /// API misuse: mismatched q, free-group verdict on a presented group, bad flags.
    #[error("usage error: {0}")]
    Usage(String),

    /// Series inversion on a non-invertible constant term, log of a series
    /// with constant term != 1, and similar domain violations.
    #[error("domain error: {0}")]
    Domain(String),

    /// Equivariant Moebius inversion at a degree n with gcd(n, q) > 1.
    /// Such entries are only available through the brute-force oracle.
    #[error("unsupported degree: equivariant inversion at n={n} needs gcd(n, q)=1 (q={q})")]
    UnsupportedDegree { n: usize, q: usize },

    /// The minimal-degree form of a relation mixes characters, so the
    /// relation is not part of an eigenbasis.
    #[error("relation not character-homogeneous: {0}")]
    Heterogeneous(String),

    /// A Magnus expansion stayed zero (or its chi0 weight stayed out of
    /// reach) up to the truncation cap.
    #[error("degree detection inconclusive: {0}")]
    Inconclusive(String),

    /// A rank that must be a nonnegative integer came out fractional.
    /// This signals an invalid input sequence, not a numeric issue.
    #[error("integrality violation: {0}")]
    NonIntegralRank(String),

    /// A series expansion that must have nonnegative coefficients went
    /// negative, contradicting the mildness assertion on the input.
    #[error("negative coefficient (non-mild evidence): {0}")]
    NegativeCoefficient(String),

    /// Two exact routes that must agree disagreed.
    #[error("pipeline inconsistency: {0}")]
    Inconsistency(String),

    /// The oracle hit its monomial guard.
    #[error("resource guard exceeded; largest completed degree {largest_completed}")]
    ResourceGuard { largest_completed: usize },
}

impl Error {
    /// CLI exit code class: 2 parse/validation, 3 mathematical
    /// inconsistency, 4 resource guard.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Parse(_)
            | Error::Usage(_)
            | Error::Domain(_)
            | Error::UnsupportedDegree { .. }
            | Error::Heterogeneous(_)
            | Error::Inconclusive(_) => 2,
            Error::NonIntegralRank(_)
            | Error::NegativeCoefficient(_)
            | Error::Inconsistency(_) => 3,
            Error::ResourceGuard { .. } => 4,
        }
    }
}
