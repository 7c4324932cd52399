//! Brute-force ground truth: graded quotients of the free associative
//! F_p-algebra by the relation ideal, Lyndon word enumeration for the
//! free case, and the formula-vs-oracle crosscheck report.
//!
//! Ideal slices are spanned by two-sided products of the full truncated
//! Magnus expansions of the relations (not just leading forms), so the
//! quotient measured is the actual filtered one. Character blocks are
//! independent because every monomial is an eigenvector; splitting rows
//! by character is pure index bookkeeping.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::groupring::{CharIndex, RingMode};
use crate::inversion::{divisors, mobius, w_table_from_b, BTable};
use crate::magnus::{magnus_expand, NcMode, Word};
use crate::presentation::{gocha_from_presentation, PresentationSpec, Relation};
use crate::spectrum::{equivariant_necklace_ranks, necklace_ranks};

pub const DEFAULT_MONOMIAL_GUARD: u64 = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Grading {
    Standard,
    Chi0,
}

/// Monomial order within one degree slice; quotient dimensions must be
/// independent of this choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonomialOrder {
    Lex,
    RevLex,
}

#[derive(Debug, Clone)]
pub struct QuotientRanks {
    pub grading: Grading,
    pub n_max: usize,
    /// Total quotient dimension per filtration degree 0..=n_max.
    pub dims: Vec<u64>,
    /// Per-character dimensions, dims[degree][char index].
    pub per_char: Vec<Vec<u64>>,
    /// Ambient monomial counts per degree.
    pub monomial_counts: Vec<u64>,
    pub warnings: Vec<String>,
}

struct FpRow {
    cols: Vec<(u32, u64)>,
}

/// Dimensions of the graded quotient E(F_p)/I truncated at degree
/// n_max, per degree and character. Standard grading weighs every
/// generator 1; chi0 grading weighs by character weight.
pub fn quotient_ranks(
    spec: &PresentationSpec,
    n_max: usize,
    grading: Grading,
    order: MonomialOrder,
    guard: u64,
    chi0_base: usize,
) -> Result<QuotientRanks> {
    let q = spec.q;
    let p = spec.p;
    let gens = spec.gen_count();
    let mut warnings = vec![];
    let weights: Vec<usize> = match grading {
        Grading::Standard => vec![1; gens],
        Grading::Chi0 => spec
            .generators
            .iter()
            .map(|g| g.char_index.weight_with_base(q, chi0_base))
            .collect::<Result<_>>()?,
    };
    let gen_chars: Vec<usize> = spec.generators.iter().map(|g| g.char_index.0).collect();

    // Monomials per degree, respecting the guard.
    let mut monomials: Vec<Vec<Word>> = vec![vec![vec![]]];
    for n in 1..=n_max {
        let mut level: Vec<Word> = vec![];
        // Extend any monomial of degree n - w(g) by generator g.
        for g in 0..gens {
            let w = weights[g];
            if w > n {
                continue;
            }
            for m in &monomials[n - w] {
                let mut word = m.clone();
                word.push(g as u16);
                level.push(word);
                if level.len() as u64 > guard {
                    return Err(Error::ResourceGuard { largest_completed: n - 1 });
                }
            }
        }
        match order {
            MonomialOrder::Lex => level.sort(),
            MonomialOrder::RevLex => {
                level.sort();
                level.reverse();
            }
        }
        monomials.push(level);
    }

    let word_weight = |w: &Word| -> usize { w.iter().map(|&g| weights[g as usize]).sum() };
    let word_char = |w: &Word| -> usize { w.iter().map(|&g| gen_chars[g as usize]).sum::<usize>() % q };

    // Column layout per character: all monomials of degree 1..=n_max
    // with that character, in degree-ascending order.
    let mut col_index: Vec<HashMap<Word, u32>> = vec![HashMap::new(); q];
    let mut col_degree: Vec<Vec<usize>> = vec![vec![]; q];
    for (n, level) in monomials.iter().enumerate().skip(1) {
        for m in level {
            let c = word_char(m);
            let idx = col_degree[c].len() as u32;
            col_index[c].insert(m.clone(), idx);
            col_degree[c].push(n);
        }
    }

    // Relation expansions over F_p, truncated at standard degree n_max
    // (a word of chi0-weight <= n_max has length <= n_max).
    let mut expansions = vec![];
    for (k, rel) in spec.relations.iter().enumerate() {
        match rel {
            Relation::Explicit { .. } => {
                warnings.push(format!(
                    "relation {}: explicit data cannot enter the oracle ideal",
                    k + 1
                ));
            }
            Relation::Word { ast, .. } => {
                let u = magnus_expand(ast, n_max, NcMode::Mod(p))?.sub_one();
                if u.is_zero() {
                    warnings.push(format!(
                        "relation {}: expansion vanishes below degree {}",
                        k + 1,
                        n_max + 1
                    ));
                } else {
                    expansions.push(u);
                }
            }
        }
    }

    // Ideal rows: x * rho * y over monomial pairs within the weight
    // budget, split by character.
    let mut rows: Vec<Vec<FpRow>> = (0..q).map(|_| vec![]).collect();
    for rho in &expansions {
        let min_w = rho
            .terms()
            .map(|(w, _)| word_weight(w))
            .min()
            .expect("nonzero expansion");
        for (wx, xs) in monomials.iter().enumerate() {
            if wx + min_w > n_max {
                break;
            }
            for x in xs {
                for (wy, ys) in monomials.iter().enumerate() {
                    if wx + min_w + wy > n_max {
                        break;
                    }
                    for y in ys {
                        let mut buckets: Vec<Vec<(u32, u64)>> = vec![vec![]; q];
                        for (wmid, coeff) in rho.terms() {
                            let total = wx + word_weight(wmid) + wy;
                            if total > n_max {
                                continue;
                            }
                            let mut word = x.clone();
                            word.extend_from_slice(wmid);
                            word.extend_from_slice(y);
                            let c = word_char(&word);
                            let col = col_index[c][&word];
                            let cv = coeff.to_u64().expect("reduced mod p");
                            if cv != 0 {
                                buckets[c].push((col, cv));
                            }
                        }
                        for (c, mut bucket) in buckets.into_iter().enumerate() {
                            if bucket.is_empty() {
                                continue;
                            }
                            bucket.sort_by_key(|e| e.0);
                            // Merge duplicate columns (x rho y can revisit words).
                            let mut merged: Vec<(u32, u64)> = vec![];
                            for (col, v) in bucket {
                                match merged.last_mut() {
                                    Some(last) if last.0 == col => last.1 = (last.1 + v) % p,
                                    _ => merged.push((col, v)),
                                }
                            }
                            merged.retain(|e| e.1 != 0);
                            if !merged.is_empty() {
                                rows[c].push(FpRow { cols: merged });
                            }
                        }
                    }
                }
            }
        }
    }

    // Per-character echelon, tracking pivot degrees.
    let mut pivots_per_degree: Vec<Vec<u64>> = vec![vec![0; q]; n_max + 1];
    for c in 0..q {
        let ncols = col_degree[c].len();
        if ncols == 0 {
            continue;
        }
        let mut dense: Vec<Vec<u64>> = rows[c]
            .iter()
            .map(|r| {
                let mut v = vec![0u64; ncols];
                for &(col, val) in &r.cols {
                    v[col as usize] = val;
                }
                v
            })
            .collect();
        let mut pivot_rows: Vec<(usize, usize)> = vec![]; // (col, row index)
        let mut next_row = 0usize;
        for col in 0..ncols {
            let found = (next_row..dense.len()).find(|&r| dense[r][col] != 0);
            let r = match found {
                Some(r) => r,
                None => continue,
            };
            dense.swap(next_row, r);
            let inv = mod_pow(dense[next_row][col], p - 2, p);
            for x in dense[next_row][col..].iter_mut() {
                *x = (*x * inv) % p;
            }
            let (head, tail) = dense.split_at_mut(next_row);
            let (pivot_row, rest) = tail.split_first_mut().unwrap();
            for other in head.iter_mut().chain(rest.iter_mut()) {
                let f = other[col];
                if f != 0 {
                    for (o, pv) in other[col..].iter_mut().zip(pivot_row[col..].iter()) {
                        *o = (*o + (p - f % p) * pv) % p;
                    }
                }
            }
            pivot_rows.push((col, next_row));
            next_row += 1;
            if next_row == dense.len() {
                break;
            }
        }
        for (col, _) in pivot_rows {
            pivots_per_degree[col_degree[c][col]][c] += 1;
        }
    }

    let mut dims = Vec::with_capacity(n_max + 1);
    let mut per_char = Vec::with_capacity(n_max + 1);
    let mut monomial_counts = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let mut chars = vec![0u64; q];
        if n == 0 {
            chars[0] = 1;
        } else {
            for m in &monomials[n] {
                chars[word_char(m)] += 1;
            }
            for c in 0..q {
                chars[c] -= pivots_per_degree[n][c];
            }
        }
        monomial_counts.push(monomials[n].len() as u64);
        dims.push(chars.iter().sum());
        per_char.push(chars);
    }
    Ok(QuotientRanks { grading, n_max, dims, per_char, monomial_counts, warnings })
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// Counts of Lyndon words bucketed by (length, character).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LyndonTable {
    pub q: usize,
    pub n_max: usize,
    counts: HashMap<(usize, usize), u64>,
}

impl LyndonTable {
    pub fn get(&self, degree: usize, char_index: usize) -> u64 {
        self.counts.get(&(degree, char_index % self.q)).copied().unwrap_or(0)
    }

    pub fn total(&self, degree: usize) -> u64 {
        (0..self.q).map(|c| self.get(degree, c)).sum()
    }
}

/// Duval's generation of all Lyndon words of length <= n_max over the
/// generator alphabet, bucketed by length and total character.
pub fn lyndon_counts(gen_chars: &[CharIndex], q: usize, n_max: usize) -> LyndonTable {
    let d = gen_chars.len();
    let mut counts = HashMap::new();
    if d == 0 || n_max == 0 {
        return LyndonTable { q, n_max, counts };
    }
    let mut w: Vec<usize> = vec![0];
    loop {
        let len = w.len();
        if len <= n_max {
            let chr = w.iter().map(|&g| gen_chars[g].0).sum::<usize>() % q;
            *counts.entry((len, chr)).or_insert(0) += 1;
        }
        // Extend periodically to length n_max, then increment.
        let mut x = w.clone();
        while x.len() < n_max {
            let c = x[x.len() - w.len()];
            x.push(c);
        }
        while let Some(&last) = x.last() {
            if last == d - 1 {
                x.pop();
            } else {
                break;
            }
        }
        if x.is_empty() {
            break;
        }
        *x.last_mut().unwrap() += 1;
        w = x;
    }
    LyndonTable { q, n_max, counts }
}

/// One comparison line of the crosscheck report.
#[derive(Debug, Clone, serde::Serialize)]
pub struct CheckLine {
    pub check: String,
    pub location: String,
    pub oracle: String,
    pub formula: String,
    pub ok: bool,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct CrosscheckReport {
    pub lines: Vec<CheckLine>,
    pub skipped: Vec<String>,
    pub warnings: Vec<String>,
    pub all_match: bool,
    pub first_mismatch: Option<String>,
}

impl CrosscheckReport {
    fn push(&mut self, check: &str, location: String, oracle: String, formula: String) {
        let ok = oracle == formula;
        if !ok && self.first_mismatch.is_none() {
            self.first_mismatch = Some(format!("{check} at {location}"));
            self.all_match = false;
        }
        self.lines.push(CheckLine { check: check.into(), location, oracle, formula, ok });
    }

    fn push_bool(&mut self, check: &str, location: String, detail: String, ok: bool) {
        if !ok && self.first_mismatch.is_none() {
            self.first_mismatch = Some(format!("{check} at {location}"));
            self.all_match = false;
        }
        self.lines.push(CheckLine {
            check: check.into(),
            location,
            oracle: detail,
            formula: String::new(),
            ok,
        });
    }
}

fn ceil_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b) + i64::from(a.rem_euclid(b) != 0)
}

fn floor_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b)
}

/// Tabulate oracle values against the formula routes and flag every
/// mismatch: quotient dims vs. series expansions, the chi0 support
/// condition, the filtration comparison inequalities, free-case Lyndon
/// counts, and the agreement of the necklace and Moebius rank routes.
pub fn crosscheck(
    spec: &PresentationSpec,
    n_max: usize,
    mode: RingMode,
    guard: u64,
    chi0_base: usize,
) -> Result<CrosscheckReport> {
    let q = spec.q;
    let mut report = CrosscheckReport {
        lines: vec![],
        skipped: vec![],
        warnings: vec![],
        all_match: true,
        first_mismatch: None,
    };

    let trunc_chi0 = q * n_max + q;
    let gocha = gocha_from_presentation(spec, n_max.max(1), mode, chi0_base)?;
    let gocha_chi0_long = gocha.euler.chi_eul_chi0.retrunc(trunc_chi0).inv()?;

    let has_words = spec.relations.iter().any(|r| matches!(r, Relation::Word { .. }));
    let word_oracle_ok = spec.is_free() || has_words;

    // Oracle vs series, standard grading.
    let std_oracle = if word_oracle_ok {
        let o = quotient_ranks(spec, n_max, Grading::Standard, MonomialOrder::Lex, guard, chi0_base)?;
        report.warnings.extend(o.warnings.clone());
        for n in 0..=n_max {
            report.push(
                "quotient-vs-series",
                format!("degree {n}"),
                o.dims[n].to_string(),
                gocha.gocha.coeff(n).to_string(),
            );
            for c in 0..q {
                let formula = gocha.gocha_star.coeff(n).coeff(c).to_string();
                report.push(
                    "quotient-vs-series-char",
                    format!("degree {n} char {c}"),
                    o.per_char[n][c].to_string(),
                    formula,
                );
            }
        }
        Some(o)
    } else {
        report.skipped.push("standard quotient oracle: no word relations".into());
        None
    };

    // Oracle vs series, chi0 grading, plus the support condition.
    let chi0_oracle = if word_oracle_ok {
        let o = quotient_ranks(spec, n_max, Grading::Chi0, MonomialOrder::Lex, guard, chi0_base)?;
        for n in 0..=n_max {
            report.push(
                "chi0-quotient-vs-series",
                format!("chi0-degree {n}"),
                o.dims[n].to_string(),
                gocha_chi0_long.coeff(n).to_string(),
            );
            for c in 0..q {
                let supported = c == (chi0_base * n) % q;
                if !supported {
                    report.push_bool(
                        "chi0-support",
                        format!("chi0-degree {n} char {c}"),
                        format!("dim {}", o.per_char[n][c]),
                        o.per_char[n][c] == 0,
                    );
                }
            }
        }
        Some(o)
    } else {
        report.skipped.push("chi0 quotient oracle: no word relations".into());
        None
    };

    // Filtration comparison inequalities on the series. These are
    // theorems about actual graded algebras, so they are only asserted
    // for presentations the oracle can realize.
    if word_oracle_ok {
        let cs = &gocha.gocha_star;
        let cchi = &gocha_chi0_long;
        for i in 1..=q {
            let ci = i % q;
            for n in 0.. {
                let lhs_deg = q * n + i;
                if lhs_deg > n_max {
                    break;
                }
                let rhs: crate::Rat = (n..=lhs_deg)
                    .map(|j| cs.coeff(j).coeff(ci).clone())
                    .fold(crate::rat(0), |a, b| a + b);
                report.push_bool(
                    "filtration-compare-chi0-side",
                    format!("chi0-degree {lhs_deg} char {ci}"),
                    format!("{} <= {}", cchi.coeff(lhs_deg), rhs),
                    *cchi.coeff(lhs_deg) <= rhs,
                );
            }
        }
        for n in 0..=n_max {
            for c in 0..q {
                let psi = CharIndex(c).weight_with_base(q, chi0_base)? as i64;
                let lo = ceil_div(n as i64 - psi, q as i64);
                let hi = floor_div(q as i64 * n as i64 - psi, q as i64);
                let mut rhs = crate::rat(0);
                for k in lo..=hi {
                    let idx = q as i64 * k + psi;
                    if idx >= 0 && (idx as usize) <= trunc_chi0 {
                        rhs += cchi.coeff(idx as usize).clone();
                    }
                }
                let lhs = cs.coeff(n).coeff(c).clone();
                report.push_bool(
                    "filtration-compare-char-side",
                    format!("degree {n} char {c}"),
                    format!("{lhs} <= {rhs}"),
                    lhs <= rhs,
                );
            }
        }
    } else {
        report
            .skipped
            .push("filtration comparison inequalities: no oracle-realizable relations".into());
    }

    // Oracle-level inequalities where both gradings are in range.
    if let (Some(std_o), Some(chi0_o)) = (&std_oracle, &chi0_oracle) {
        for i in 1..=q {
            let ci = i % q;
            for n in 0.. {
                let lhs_deg = q * n + i;
                if lhs_deg > n_max {
                    break;
                }
                let rhs: u64 = (n..=lhs_deg).map(|j| std_o.per_char[j][ci]).sum();
                report.push_bool(
                    "filtration-compare-oracle",
                    format!("chi0-degree {lhs_deg} char {ci}"),
                    format!("{} <= {}", chi0_o.dims[lhs_deg], rhs),
                    chi0_o.dims[lhs_deg] <= rhs,
                );
            }
        }
    }

    // Free-case ranks: Lyndon words against the equivariant necklace
    // formula at every degree, and against the Moebius pipeline on
    // degrees coprime to q.
    if spec.is_free() {
        let chars: Vec<CharIndex> = spec.generators.iter().map(|g| g.char_index).collect();
        let ly = lyndon_counts(&chars, q, n_max);
        let star_poly = gocha.euler.chi_eul_star.clone();
        for n in 1..=n_max {
            match equivariant_necklace_ranks(&star_poly, n, RingMode::zp(spec.p)) {
                Ok(elt) => {
                    for c in 0..q {
                        report.push(
                            "lyndon-vs-necklace",
                            format!("degree {n} char {c}"),
                            ly.get(n, c).to_string(),
                            elt.coeff(c).to_string(),
                        );
                    }
                }
                Err(e) => report.skipped.push(format!("free necklace at degree {n}: {e}")),
            }
        }
        // Witt totals.
        for n in 1..=n_max {
            let d = spec.gen_count() as i64;
            let witt: i64 = divisors(n)
                .into_iter()
                .map(|m| mobius((n / m) as u64) * d.pow(m as u32))
                .sum::<i64>()
                / n as i64;
            report.push(
                "lyndon-witt-total",
                format!("degree {n}"),
                ly.total(n).to_string(),
                witt.to_string(),
            );
        }
    }

    // Necklace route against the Moebius route on the scalar and
    // equivariant polynomials.
    let b_star = BTable::from_eq_series(&gocha.gocha_star)?;
    let w_star = w_table_from_b(&b_star)?;
    let a_star = crate::inversion::a_from_w(&w_star, mode)?;
    let b_scalar = BTable::from_series(&gocha.gocha)?;
    let w_scalar = w_table_from_b(&b_scalar)?;
    let a_scalar = crate::inversion::a_from_w(&w_scalar, mode)?;
    for n in 1..=n_max {
        let neck = necklace_ranks(&gocha.euler.chi_eul, n, mode)?;
        report.push(
            "necklace-vs-moebius",
            format!("degree {n}"),
            neck.to_string(),
            BigInt::from(a_scalar.get(n, 0)).to_string(),
        );
        if num_integer::gcd(n, q) == 1 || q == 1 {
            let eq = equivariant_necklace_ranks(&gocha.euler.chi_eul_star, n, mode)?;
            for c in 0..q {
                report.push(
                    "necklace-vs-moebius-char",
                    format!("degree {n} char {c}"),
                    eq.coeff(c).to_string(),
                    a_star.get(n, c).to_string(),
                );
            }
        }
    }

    Ok(report)
}
