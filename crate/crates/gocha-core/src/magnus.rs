//! Truncated noncommutative polynomials and the Magnus expansion
//! x |-> 1 + X of group words.
//!
//! Coefficients are exact integers, reduced modulo p in Fp mode after
//! every operation. Inverses expand the geometric series, which is
//! finite under truncation because group elements map to 1 + (degree >= 1).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Word in generator symbols; the empty word is the constant term.
pub type Word = Vec<u16>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NcMode {
    /// Exact integer coefficients (the Zp-side expansion; only leading
    /// degrees and characters are consumed, so no p-adic truncation is
    /// needed).
    Exact,
    /// Coefficients in F_p.
    Mod(u64),
}

/// Finitely supported map word -> coefficient, truncated at a total
/// degree (= word length).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NcPoly {
    trunc: usize,
    mode: NcMode,
    terms: BTreeMap<Word, BigInt>,
}

impl NcPoly {
    pub fn zero(trunc: usize, mode: NcMode) -> Self {
        NcPoly { trunc, mode, terms: BTreeMap::new() }
    }

    pub fn one(trunc: usize, mode: NcMode) -> Self {
        let mut p = Self::zero(trunc, mode);
        p.terms.insert(vec![], BigInt::one());
        p
    }

    /// 1 + X_g, the Magnus image of the generator g.
    pub fn generator(trunc: usize, mode: NcMode, g: u16) -> Self {
        let mut p = Self::one(trunc, mode);
        if trunc >= 1 {
            p.terms.insert(vec![g], BigInt::one());
        }
        p
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &BigInt)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn reduce(mode: NcMode, c: BigInt) -> BigInt {
        match mode {
            NcMode::Exact => c,
            NcMode::Mod(p) => {
                let p = BigInt::from(p);
                ((c % &p) + &p) % &p
            }
        }
    }

    fn insert(&mut self, w: Word, c: BigInt) {
        if w.len() > self.trunc {
            return;
        }
        let entry = self.terms.entry(w).or_insert_with(BigInt::zero);
        *entry = Self::reduce(self.mode, std::mem::take(entry) + c);
        if entry.is_zero() {
            // Re-borrowing to remove needs the key; cheapest to sweep later.
        }
    }

    fn sweep_zeros(&mut self) {
        self.terms.retain(|_, c| !c.is_zero());
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.mode, other.mode);
        let mut out = self.clone();
        out.trunc = self.trunc.min(other.trunc);
        out.terms.retain(|w, _| w.len() <= out.trunc);
        for (w, c) in &other.terms {
            out.insert(w.clone(), c.clone());
        }
        out.sweep_zeros();
        out
    }

    pub fn sub_one(&self) -> Self {
        let mut out = self.clone();
        out.insert(vec![], BigInt::from(-1));
        out.sweep_zeros();
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = Self::reduce(out.mode, -std::mem::take(c));
        }
        out.sweep_zeros();
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.mode, other.mode);
        let trunc = self.trunc.min(other.trunc);
        let mut out = Self::zero(trunc, self.mode);
        for (w1, c1) in &self.terms {
            if w1.len() > trunc {
                continue;
            }
            for (w2, c2) in &other.terms {
                if w1.len() + w2.len() > trunc {
                    continue;
                }
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                out.insert(w, c1 * c2);
            }
        }
        out.sweep_zeros();
        out
    }

    /// Least total degree with a nonzero term, if any.
    pub fn min_degree(&self) -> Option<usize> {
        self.terms.keys().map(Word::len).min()
    }

    /// Inverse of a polynomial with constant term +-1, via the
    /// geometric series. Group-word images always qualify.
    pub fn inv(&self) -> Result<Self> {
        let c0 = self.terms.get(&vec![]).cloned().unwrap_or_else(BigInt::zero);
        let unit = if c0 == BigInt::one() {
            false
        } else if c0 == BigInt::from(-1) || matches!(self.mode, NcMode::Mod(p) if c0 == BigInt::from(p - 1))
        {
            true
        } else {
            return Err(Error::Domain(
                "noncommutative inverse needs constant term 1 or -1".into(),
            ));
        };
        // self = s * (1 - u) with s = +-1 and u of degree >= 1.
        let base = if unit { self.neg() } else { self.clone() };
        let mut u = base.sub_one().neg();
        u.sweep_zeros();
        let step = u.min_degree().unwrap_or(self.trunc + 1).max(1);
        let mut out = Self::one(self.trunc, self.mode);
        let mut acc = Self::one(self.trunc, self.mode);
        let mut deg = 0;
        while deg + step <= self.trunc {
            acc = acc.mul(&u);
            if acc.is_zero() {
                break;
            }
            out = out.add(&acc);
            deg += step;
        }
        if unit {
            out = out.neg();
        }
        Ok(out)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut out = Self::one(self.trunc, self.mode);
        let mut sq = base;
        while k > 0 {
            if k & 1 == 1 {
                out = out.mul(&sq);
            }
            k >>= 1;
            if k > 0 {
                sq = sq.mul(&sq);
            }
        }
        Ok(out)
    }
}

/// AST over generator symbols: commutator, integer power, product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CommWord {
    Gen(u16),
    Comm(Box<CommWord>, Box<CommWord>),
    Pow(Box<CommWord>, i64),
    Prod(Box<CommWord>, Box<CommWord>),
}

impl CommWord {
    /// Rough degree guess used to size the initial expansion
    /// truncation: leaf count through commutators, minimum across
    /// product factors, invariant under powers.
    pub fn nominal_degree(&self) -> usize {
        match self {
            CommWord::Gen(_) => 1,
            CommWord::Comm(a, b) => a.nominal_degree() + b.nominal_degree(),
            CommWord::Pow(w, _) => w.nominal_degree(),
            CommWord::Prod(a, b) => a.nominal_degree().min(b.nominal_degree()),
        }
    }
}

/// Magnus image phi(w) of the group word, truncated at total degree
/// `trunc`; the caller subtracts 1 to study the relation's expansion.
pub fn magnus_expand(w: &CommWord, trunc: usize, mode: NcMode) -> Result<NcPoly> {
    match w {
        CommWord::Gen(g) => Ok(NcPoly::generator(trunc, mode, *g)),
        CommWord::Prod(a, b) => {
            Ok(magnus_expand(a, trunc, mode)?.mul(&magnus_expand(b, trunc, mode)?))
        }
        CommWord::Pow(a, e) => magnus_expand(a, trunc, mode)?.pow(*e),
        CommWord::Comm(a, b) => {
            let pa = magnus_expand(a, trunc, mode)?;
            let pb = magnus_expand(b, trunc, mode)?;
            Ok(pa.inv()?.mul(&pb.inv()?).mul(&pa).mul(&pb))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> CommWord {
        CommWord::Gen(0)
    }

    fn y() -> CommWord {
        CommWord::Gen(1)
    }

    fn comm(a: CommWord, b: CommWord) -> CommWord {
        CommWord::Comm(Box::new(a), Box::new(b))
    }

    #[test]
    fn commutator_leading_form() {
        let p = magnus_expand(&comm(x(), y()), 3, NcMode::Exact).unwrap();
        let u = p.sub_one();
        assert_eq!(u.min_degree(), Some(2));
        assert_eq!(u.terms.get(&vec![0, 1]).unwrap(), &BigInt::one());
        assert_eq!(u.terms.get(&vec![1, 0]).unwrap(), &BigInt::from(-1));
        assert!(u.terms.get(&vec![0, 0]).is_none());
    }

    #[test]
    fn inverse_is_exact_to_truncation() {
        let g = NcPoly::generator(5, NcMode::Exact, 0);
        let prod = g.inv().unwrap().mul(&g);
        assert_eq!(prod, NcPoly::one(5, NcMode::Exact));
    }

    #[test]
    fn p_th_power_mod_p() {
        // (1+X)^p - 1 = X^p + higher over F_p.
        let p = 3u64;
        let u = magnus_expand(&CommWord::Pow(Box::new(x()), p as i64), 5, NcMode::Mod(p))
            .unwrap()
            .sub_one();
        assert_eq!(u.min_degree(), Some(3));
        assert_eq!(u.terms.get(&vec![0, 0, 0]).unwrap(), &BigInt::one());

        // Over the integers the leading term is p*X.
        let uz = magnus_expand(&CommWord::Pow(Box::new(x()), p as i64), 5, NcMode::Exact)
            .unwrap()
            .sub_one();
        assert_eq!(uz.min_degree(), Some(1));
        assert_eq!(uz.terms.get(&vec![0]).unwrap(), &BigInt::from(3));
    }

    #[test]
    fn product_of_commutators_sums_leading_forms() {
        let z = CommWord::Gen(2);
        let w = CommWord::Prod(Box::new(comm(x(), y())), Box::new(comm(x(), z)));
        let u = magnus_expand(&w, 2, NcMode::Exact).unwrap().sub_one();
        assert_eq!(u.min_degree(), Some(2));
        assert_eq!(u.terms.get(&vec![0, 1]).unwrap(), &BigInt::one());
        assert_eq!(u.terms.get(&vec![0, 2]).unwrap(), &BigInt::one());
        assert_eq!(u.terms.get(&vec![1, 0]).unwrap(), &BigInt::from(-1));
        assert_eq!(u.terms.get(&vec![2, 0]).unwrap(), &BigInt::from(-1));
    }

    #[test]
    fn exact_cancellation_degrades_to_next_degree() {
        // [x,y] * [y,x] = 1 + higher; the degree-2 forms cancel.
        let w = CommWord::Prod(Box::new(comm(x(), y())), Box::new(comm(y(), x())));
        let u = magnus_expand(&w, 4, NcMode::Exact).unwrap().sub_one();
        assert!(u.min_degree().map_or(true, |d| d >= 3));
    }

    #[test]
    fn negative_power_is_group_inverse() {
        let w = CommWord::Prod(
            Box::new(CommWord::Pow(Box::new(x()), -1)),
            Box::new(x()),
        );
        let u = magnus_expand(&w, 6, NcMode::Exact).unwrap().sub_one();
        assert!(u.is_zero());
    }
}
