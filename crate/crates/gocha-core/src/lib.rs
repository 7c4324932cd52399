//! Exact computation of equivariant Golod-Shafarevich ("gocha") series
//! for finitely presented pro-p groups carrying a cyclic semisimple
//! action, together with eigenspace rank pipelines, chi0-filtration
//! spectra, and a brute-force graded-quotient oracle.
//!
//! Modules:
//! - [`groupring`]: the rational group ring Q[Z/qZ] with Adams twists.
//! - [`series`]: truncated power series over Q and Q[Z/qZ]; the
//!   rank-to-series product formula.
//! - [`inversion`]: Moebius pipelines among the c, b, w, a sequences in
//!   scalar, equivariant and chi0-filtration flavors.
//! - [`presentation`]: presentation documents, the word grammar, Magnus
//!   expansion, Euler characteristic polynomials, gocha series.
//! - [`magnus`]: truncated noncommutative polynomials backing the
//!   presentation module and the oracle.
//! - [`spectrum`]: Newton power sums, necklace rank formulas, certified
//!   root isolation, entropy and infinite-dimensionality verdicts.
//! - [`oracle`]: graded quotients of the free F_p-algebra by the
//!   relation ideal, Lyndon word counts, formula-vs-oracle crosschecks.
//! - [`arithmetic`]: quadratic-field splitting, tameness, Koch linking
//!   data and the FAB quadratic examples.

pub mod arithmetic;
pub mod error;
pub mod groupring;
pub mod inversion;
pub mod magnus;
pub mod oracle;
pub mod presentation;
pub mod series;
pub mod spectrum;

pub use error::{Error, Result};

/// Exact rational scalar used everywhere; no floating point enters the
/// algebraic pipelines.
pub type Rat = num_rational::BigRational;

/// Small integer literal helper.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(num_bigint::BigInt::from(n))
}
