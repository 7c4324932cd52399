//! Exact arithmetic in the rational group ring Q[Z/qZ].
//!
//! Characters of the acting cyclic group are indexed by exponents of a
//! fixed generator chi0: index 0 is the trivial character, index 1 is
//! chi0 itself. All equivariant bookkeeping stays in this ring; roots of
//! unity are never evaluated.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::Rat;

/// Exponent of chi0 naming a character of Z/qZ, reduced modulo q.
///
/// The weight identifies Z/qZ with [[1; q]]: weight(i) = i for
/// 1 <= i <= q-1 and weight(0) = q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CharIndex(pub usize);

impl CharIndex {
    pub fn new(i: i64, q: usize) -> Self {
        CharIndex(i.rem_euclid(q as i64) as usize)
    }

    pub fn trivial() -> Self {
        CharIndex(0)
    }

    /// chi0-filtration weight of this character, for the standard base
    /// character chi0.
    pub fn weight(self, q: usize) -> usize {
        if self.0 == 0 {
            q
        } else {
            self.0
        }
    }

    /// Weight relative to an alternative base character chi0^base,
    /// gcd(base, q) = 1: the exponent e in [[1; q]] with
    /// (chi0^base)^e = chi0^index.
    pub fn weight_with_base(self, q: usize, base: usize) -> Result<usize> {
        let inv = mod_inverse(base, q).ok_or(Error::Usage(format!(
            "chi0 base {base} is not invertible modulo q={q}"
        )))?;
        let e = (self.0 * inv) % q;
        Ok(if e == 0 { q } else { e })
    }
}

/// Which coefficient ring the filtration lives over. Fp selects the
/// (1 - t^p)/(1 - t) factor shape and the p-power accumulation rule for
/// ranks; Zp selects 1/(1 - t) and the plain rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RingKind {
    Fp,
    Zp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RingMode {
    pub kind: RingKind,
    pub p: u64,
}

impl RingMode {
    pub fn fp(p: u64) -> Self {
        RingMode { kind: RingKind::Fp, p }
    }

    pub fn zp(p: u64) -> Self {
        RingMode { kind: RingKind::Zp, p }
    }
}

impl fmt::Display for RingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            RingKind::Fp => write!(f, "fp"),
            RingKind::Zp => write!(f, "zp"),
        }
    }
}

/// Element of Q[Z/qZ], stored densely: coeffs[i] is attached to chi0^i.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupRingElt {
    q: usize,
    coeffs: Vec<Rat>,
}

impl GroupRingElt {
    pub fn zero(q: usize) -> Self {
        assert!(q >= 1, "group order must be positive");
        GroupRingElt { q, coeffs: vec![Rat::zero(); q] }
    }

    pub fn one(q: usize) -> Self {
        let mut e = Self::zero(q);
        e.coeffs[0] = Rat::one();
        e
    }

    /// The basis character chi0^i.
    pub fn basis(q: usize, i: usize) -> Self {
        let mut e = Self::zero(q);
        e.coeffs[i % q] = Rat::one();
        e
    }

    pub fn from_coeffs(q: usize, coeffs: Vec<Rat>) -> Result<Self> {
        if coeffs.len() != q {
            return Err(Error::Usage(format!(
                "expected {q} coefficients, got {}",
                coeffs.len()
            )));
        }
        Ok(GroupRingElt { q, coeffs })
    }

    /// Integer coefficient vector shorthand, handy in tests.
    pub fn from_ints(q: usize, ints: &[i64]) -> Self {
        assert_eq!(ints.len(), q);
        GroupRingElt {
            q,
            coeffs: ints.iter().map(|&n| Rat::from_integer(BigInt::from(n))).collect(),
        }
    }

    /// A rational viewed inside Q[Z/qZ] via the unit.
    pub fn scalar(q: usize, r: Rat) -> Self {
        let mut e = Self::zero(q);
        e.coeffs[0] = r;
        e
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn coeff(&self, i: usize) -> &Rat {
        &self.coeffs[i % self.q]
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rat::is_zero)
    }

    fn check_q(&self, other: &Self) -> Result<()> {
        if self.q != other.q {
            return Err(Error::Usage(format!(
                "mismatched group orders q={} vs q={}",
                self.q, other.q
            )));
        }
        Ok(())
    }

    /// Componentwise sum.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_q(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(GroupRingElt { q: self.q, coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_q(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(GroupRingElt { q: self.q, coeffs })
    }

    pub fn neg(&self) -> Self {
        GroupRingElt { q: self.q, coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }

    /// Cyclic convolution of indices modulo q.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_q(other)?;
        let q = self.q;
        let mut coeffs = vec![Rat::zero(); q];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                coeffs[(i + j) % q] += a * b;
            }
        }
        Ok(GroupRingElt { q, coeffs })
    }

    pub fn scale(&self, k: &Rat) -> Self {
        GroupRingElt { q: self.q, coeffs: self.coeffs.iter().map(|a| a * k).collect() }
    }

    /// Adams twist chi -> chi^u, realized as index re-indexing i -> u*i
    /// mod q, summing on collisions when gcd(u, q) > 1.
    pub fn adams(&self, u: i64) -> Self {
        let q = self.q;
        let ur = u.rem_euclid(q as i64) as usize;
        let mut coeffs = vec![Rat::zero(); q];
        for (i, a) in self.coeffs.iter().enumerate() {
            if !a.is_zero() {
                coeffs[(ur * i) % q] += a;
            }
        }
        GroupRingElt { q, coeffs }
    }

    /// Sum of all coefficients: the Maschke aggregation down to Q.
    pub fn augment(&self) -> Rat {
        self.coeffs.iter().fold(Rat::zero(), |acc, a| acc + a)
    }

    /// Multiplicative inverse in Q[Z/qZ], when it exists. Solves the
    /// circulant system by Gaussian elimination over Q.
    pub fn inverse(&self) -> Option<Self> {
        let q = self.q;
        // m[i][j] = coeff[(i - j) mod q], augmented with e0.
        let mut m: Vec<Vec<Rat>> = (0..q)
            .map(|i| {
                let mut row: Vec<Rat> = (0..q)
                    .map(|j| self.coeffs[(i + q - j) % q].clone())
                    .collect();
                row.push(if i == 0 { Rat::one() } else { Rat::zero() });
                row
            })
            .collect();
        for col in 0..q {
            let pivot = (col..q).find(|&r| !m[r][col].is_zero())?;
            m.swap(col, pivot);
            let inv = m[col][col].recip();
            for x in m[col].iter_mut() {
                *x *= &inv;
            }
            for r in 0..q {
                if r != col && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    for c in col..=q {
                        let s = &m[col][c] * &f;
                        m[r][c] -= s;
                    }
                }
            }
        }
        let coeffs = m.into_iter().map(|row| row[q].clone()).collect();
        Some(GroupRingElt { q, coeffs })
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|a| a.is_integer())
    }

    pub fn is_nonneg_integral(&self) -> bool {
        self.coeffs.iter().all(|a| a.is_integer() && !a.is_negative())
    }

    /// Nonnegative integer coefficients, or None if any entry fails.
    pub fn as_rank_vector(&self) -> Option<Vec<u64>> {
        self.coeffs
            .iter()
            .map(|a| {
                if a.is_integer() && !a.is_negative() {
                    u64::try_from(a.to_integer()).ok()
                } else {
                    None
                }
            })
            .collect()
    }
}

/// Spec-facing aliases for the ring operations.
pub fn gr_add(a: &GroupRingElt, b: &GroupRingElt) -> Result<GroupRingElt> {
    a.add(b)
}

pub fn gr_mul(a: &GroupRingElt, b: &GroupRingElt) -> Result<GroupRingElt> {
    a.mul(b)
}

pub fn gr_adams(a: &GroupRingElt, u: i64) -> GroupRingElt {
    a.adams(u)
}

pub fn gr_augment(a: &GroupRingElt) -> Rat {
    a.augment()
}

impl fmt::Display for GroupRingElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{a}")?,
                1 if a.is_one() => write!(f, "chi0")?,
                1 => write!(f, "{a}*chi0")?,
                _ if a.is_one() => write!(f, "chi0^{i}")?,
                _ => write!(f, "{a}*chi0^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for GroupRingElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub(crate) fn mod_inverse(a: usize, m: usize) -> Option<usize> {
    if m == 1 {
        return Some(0);
    }
    let (mut t, mut new_t): (i64, i64) = (0, 1);
    let (mut r, mut new_r): (i64, i64) = (m as i64, (a % m) as i64);
    while new_r != 0 {
        let quot = r / new_r;
        (t, new_t) = (new_t, t - quot * new_t);
        (r, new_r) = (new_r, r - quot * new_r);
    }
    if r != 1 {
        return None;
    }
    Some(t.rem_euclid(m as i64) as usize)
}
