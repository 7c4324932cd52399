//! Eigenvalue analysis of inverse gocha polynomials.
//!
//! Rank formulas never touch roots: Newton's identities produce exact
//! power sums over Q or Q[Z/qZ], and necklace-polynomial sums with Adams
//! twists turn them into ranks. Floating point appears only in the root
//! approximations of the report; realness, positivity and L > 1 are
//! decided exactly by Sturm sequences and rational bisection.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::groupring::GroupRingElt;
use crate::inversion::{divisors, mobius, split_p_part};
use crate::presentation::PresentationSpec;
use crate::series::{EqSeries, Series};
use crate::{rat, Rat};

/// Power sums s_1..s_N of the inverse roots of a polynomial written as
/// prod (1 - lambda_i t), over any commutative coefficient ring.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSums<C: crate::series::Coeff> {
    pub values: Vec<C>,
}

impl<C: crate::series::Coeff> PowerSums<C> {
    pub fn get(&self, m: usize) -> &C {
        &self.values[m - 1]
    }
}

/// Newton recurrence on the coefficients of P = 1 + p_1 t + ... :
/// s_m = -(m p_m + sum_{j=1}^{m-1} p_j s_{m-j}).
pub fn newton_power_sums<C: crate::series::Coeff>(poly: &[C], n: usize) -> Result<PowerSums<C>> {
    if poly.is_empty() || poly[0] != poly[0].one_like() {
        return Err(Error::Domain("power sums need a polynomial with constant term 1".into()));
    }
    let zero = poly[0].zero_like();
    let coeff = |k: usize| -> &C {
        if k < poly.len() {
            &poly[k]
        } else {
            &zero
        }
    };
    let mut values: Vec<C> = Vec::with_capacity(n);
    for m in 1..=n {
        let mut acc = coeff(m).scale(&rat(m as i64));
        for j in 1..m {
            acc = acc.add(&coeff(j).mul(&values[m - j - 1]));
        }
        values.push(acc.neg());
    }
    Ok(PowerSums { values })
}

/// Scalar necklace rank: (1/n) sum_{m|n} mu(n/m) s_m in Zp mode, summed
/// along the p-power chain in Fp mode. The value must be an integer.
pub fn necklace_ranks(
    poly: &Series,
    n: usize,
    mode: crate::groupring::RingMode,
) -> Result<BigInt> {
    let sums = newton_power_sums(poly.coeffs(), n)?;
    let single = |d: usize| -> Rat {
        let mut acc = Rat::zero();
        for m in divisors(d) {
            let mu = mobius((d / m) as u64);
            if mu != 0 {
                acc += sums.get(m) * rat(mu);
            }
        }
        acc / rat(d as i64)
    };
    let total = match mode.kind {
        crate::groupring::RingKind::Zp => single(n),
        crate::groupring::RingKind::Fp => {
            let (m, k) = split_p_part(n, mode.p);
            (0..=k).map(|j| single(m * (mode.p as usize).pow(j))).sum()
        }
    };
    if !total.is_integer() {
        return Err(Error::NonIntegralRank(format!(
            "necklace sum at degree {n} is {total}"
        )));
    }
    Ok(total.to_integer())
}

/// Equivariant necklace rank: (1/n) sum_{m|n} mu(n/m) Adams_{n/m}(s_m),
/// Fp mode accumulating over the p-power chain. Meaningful for every
/// degree on free (linear) polynomials and on degrees coprime to q in
/// general; the result must be a nonnegative integer vector.
pub fn equivariant_necklace_ranks(
    poly: &EqSeries,
    n: usize,
    mode: crate::groupring::RingMode,
) -> Result<GroupRingElt> {
    let sums = newton_power_sums(poly.coeffs(), n)?;
    let q = poly.q();
    let single = |d: usize| -> Result<GroupRingElt> {
        let mut acc = GroupRingElt::zero(q);
        for m in divisors(d) {
            let mu = mobius((d / m) as u64);
            if mu != 0 {
                acc = acc.add(&sums.get(m).adams((d / m) as i64).scale(&rat(mu)))?;
            }
        }
        Ok(acc.scale(&Rat::new(BigInt::one(), BigInt::from(d as i64))))
    };
    let total = match mode.kind {
        crate::groupring::RingKind::Zp => single(n)?,
        crate::groupring::RingKind::Fp => {
            let (m, k) = split_p_part(n, mode.p);
            let mut acc = GroupRingElt::zero(q);
            for j in 0..=k {
                acc = acc.add(&single(m * (mode.p as usize).pow(j))?)?;
            }
            acc
        }
    };
    if !total.is_nonneg_integral() {
        return Err(Error::NonIntegralRank(format!(
            "equivariant necklace sum at degree {n} is {total}"
        )));
    }
    Ok(total)
}

// ---------------------------------------------------------------------
// Exact real-root machinery on rational polynomials.

/// Dense rational polynomial, lowest degree first, trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq)]
pub struct RatPoly(Vec<Rat>);

impl RatPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.len() > 1 && coeffs.last().map_or(false, Zero::is_zero) {
            coeffs.pop();
        }
        RatPoly(coeffs)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> RatPoly {
        if self.0.len() <= 1 {
            return RatPoly(vec![Rat::zero()]);
        }
        RatPoly::new(
            self.0[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * rat((i + 1) as i64))
                .collect(),
        )
    }

    /// Remainder of self / other (exact rational division).
    fn rem(&self, other: &RatPoly) -> RatPoly {
        let mut r = self.0.clone();
        let d = other.degree();
        let lead = other.0[d].clone();
        while r.len() > d && r.len() > 1 {
            let k = r.len() - 1;
            if r[k].is_zero() {
                r.pop();
                continue;
            }
            let f = &r[k] / &lead;
            for i in 0..=d {
                let t = &other.0[i] * &f;
                r[k - d + i] -= t;
            }
            r.pop();
        }
        RatPoly::new(r)
    }

    fn gcd(&self, other: &RatPoly) -> RatPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a
    }

    pub fn squarefree_part(&self) -> RatPoly {
        let g = self.gcd(&self.derivative());
        if g.degree() == 0 {
            return self.clone();
        }
        self.div_exact(&g)
    }

    fn div_exact(&self, other: &RatPoly) -> RatPoly {
        let mut r = self.0.clone();
        let d = other.degree();
        let lead = other.0[d].clone();
        let mut qcoeffs = vec![Rat::zero(); self.0.len().saturating_sub(d)];
        while r.len() > d {
            let k = r.len() - 1;
            let f = &r[k] / &lead;
            qcoeffs[k - d] = f.clone();
            for i in 0..=d {
                let t = &other.0[i] * &f;
                r[k - d + i] -= t;
            }
            r.pop();
            while r.len() > 1 && r.last().map_or(false, Zero::is_zero) {
                if r.len() - 1 <= d {
                    break;
                }
                r.pop();
            }
        }
        RatPoly::new(qcoeffs)
    }
}

/// Sturm chain of a squarefree polynomial.
pub struct SturmChain(Vec<RatPoly>);

impl SturmChain {
    pub fn new(p: &RatPoly) -> Self {
        let mut chain = vec![p.clone(), p.derivative()];
        loop {
            let k = chain.len();
            if chain[k - 1].is_zero() {
                chain.pop();
                break;
            }
            let r = chain[k - 2].rem(&chain[k - 1]);
            if r.is_zero() {
                break;
            }
            chain.push(RatPoly::new(r.0.iter().map(|c| -c).collect()));
        }
        SturmChain(chain)
    }

    fn variations_at(&self, x: &Rat) -> usize {
        let mut count = 0;
        let mut last = 0i8;
        for p in &self.0 {
            let v = p.eval(x);
            let s = if v.is_zero() {
                0
            } else if v.is_positive() {
                1
            } else {
                -1
            };
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    }

    /// Number of distinct real roots in the half-open interval (a, b].
    pub fn count_roots(&self, a: &Rat, b: &Rat) -> usize {
        self.variations_at(a) - self.variations_at(b)
    }
}

/// Cauchy bound: every root of p has modulus < bound.
pub fn root_bound(p: &RatPoly) -> Rat {
    let d = p.degree();
    let lead = p.0[d].clone();
    let mx = p.0[..d]
        .iter()
        .map(|c| (c / &lead).abs())
        .fold(Rat::zero(), |a, b| if b > a { b } else { a });
    mx + rat(1)
}

/// Isolating intervals (a, b] for every real root in (lo, hi], refined
/// to width <= eps. A width-zero interval marks an exact rational root.
pub fn isolate_real_roots(p: &RatPoly, lo: &Rat, hi: &Rat, eps: &Rat) -> Vec<(Rat, Rat)> {
    let sf = p.squarefree_part();
    let chain = SturmChain::new(&sf);
    let mut out = vec![];
    let total = chain.count_roots(lo, hi);
    if total > 0 {
        subdivide(&sf, &chain, lo, hi, total, eps, &mut out);
    }
    out.sort_by(|x, y| x.0.cmp(&y.0));
    out
}

fn subdivide(
    p: &RatPoly,
    chain: &SturmChain,
    a: &Rat,
    b: &Rat,
    count: usize,
    eps: &Rat,
    out: &mut Vec<(Rat, Rat)>,
) {
    if count == 0 {
        return;
    }
    let mid = (a + b) / rat(2);
    if count == 1 {
        if &(b - a) <= eps {
            out.push((a.clone(), b.clone()));
            return;
        }
        if p.eval(&mid).is_zero() {
            out.push((mid.clone(), mid));
            return;
        }
        let left = chain.count_roots(a, &mid);
        if left == 1 {
            subdivide(p, chain, a, &mid, 1, eps, out);
        } else {
            subdivide(p, chain, &mid, b, 1, eps, out);
        }
        return;
    }
    // Several roots: split. A root exactly at mid belongs to the left
    // half-open piece.
    let left = chain.count_roots(a, &mid);
    subdivide(p, chain, a, &mid, left, eps, out);
    subdivide(p, chain, &mid, b, count - left, eps, out);
}

// ---------------------------------------------------------------------
// Float root approximation with certified radii.

/// One eigenvalue approximation. The disk of the given radius around
/// the approximation is guaranteed to contain a root; when
/// `real_interval` is set the root is additionally certified real by
/// exact sign counting.
#[derive(Debug, Clone)]
pub struct RootWindow {
    pub approx: Complex64,
    pub radius: f64,
    pub real_interval: Option<(Rat, Rat)>,
}

fn to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Fall back through a scaled division for extreme values.
        let n = r.numer().to_f64().unwrap_or(f64::MAX);
        let d = r.denom().to_f64().unwrap_or(1.0);
        n / d
    })
}

fn eval_complex(coeffs: &[f64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

/// Aberth-Ehrlich iteration for all roots of a monic-normalized float
/// polynomial; coefficients lowest-first.
fn aberth_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let d = coeffs.len() - 1;
    if d == 0 {
        return vec![];
    }
    let deriv: Vec<f64> = coeffs[1..]
        .iter()
        .enumerate()
        .map(|(i, c)| c * (i + 1) as f64)
        .collect();
    let radius = 1.0
        + coeffs[..d]
            .iter()
            .map(|c| (c / coeffs[d]).abs())
            .fold(0.0f64, f64::max);
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * (k as f64 + 0.35) / d as f64;
            Complex64::from_polar(radius * 0.7, theta)
        })
        .collect();
    for _ in 0..300 {
        let mut moved = 0.0f64;
        let snapshot = z.clone();
        for i in 0..d {
            let pz = eval_complex(coeffs, snapshot[i]);
            let dz = eval_complex(&deriv, snapshot[i]);
            if dz.norm() == 0.0 {
                continue;
            }
            let newton = pz / dz;
            let mut s = Complex64::new(0.0, 0.0);
            for (j, zj) in snapshot.iter().enumerate() {
                if j != i {
                    s += (snapshot[i] - zj).inv();
                }
            }
            let denom = Complex64::new(1.0, 0.0) - newton * s;
            let step = if denom.norm() > 1e-14 { newton / denom } else { newton };
            z[i] -= step;
            moved = moved.max(step.norm());
        }
        if moved < 1e-14 {
            break;
        }
    }
    z
}

/// All eigenvalues (inverse roots) of a polynomial with constant term
/// 1, with certified containment radii; real roots are matched to exact
/// isolating intervals.
pub fn isolate_roots(poly: &[Rat]) -> Vec<RootWindow> {
    let p = RatPoly::new(poly.to_vec());
    let d = p.degree();
    if d == 0 {
        return vec![];
    }
    // Reverse to the eigenvalue polynomial: roots are the lambda_i with
    // P(t) = prod (1 - lambda_i t).
    let rev = RatPoly::new(p.coeffs().iter().rev().cloned().collect());
    let coeffs: Vec<f64> = rev.coeffs().iter().map(to_f64).collect();
    let approx = aberth_roots(&coeffs);
    let deriv: Vec<f64> = coeffs[1..]
        .iter()
        .enumerate()
        .map(|(i, c)| c * (i + 1) as f64)
        .collect();
    let rev_deg = rev.degree();

    // Exact real eigenvalue intervals.
    let bound = root_bound(&rev);
    let eps = Rat::new(BigInt::one(), BigInt::from(1_000_000_000_000i64));
    let mut real_iv = isolate_real_roots(&rev, &(-bound.clone()), &bound, &eps);

    let mut out: Vec<RootWindow> = approx
        .into_iter()
        .map(|z| {
            let pz = eval_complex(&coeffs, z).norm();
            let dz = eval_complex(&deriv, z).norm();
            let radius = if dz > 0.0 { rev_deg as f64 * pz / dz } else { f64::INFINITY };
            RootWindow { approx: z, radius, real_interval: None }
        })
        .collect();
    // Attach each certified real interval to the nearest approximation.
    for iv in real_iv.drain(..) {
        let mid = to_f64(&((&iv.0 + &iv.1) / rat(2)));
        if let Some(best) = out
            .iter_mut()
            .filter(|w| w.real_interval.is_none())
            .min_by(|a, b| {
                let da = (a.approx - Complex64::new(mid, 0.0)).norm() + a.approx.im.abs();
                let db = (b.approx - Complex64::new(mid, 0.0)).norm() + b.approx.im.abs();
                da.partial_cmp(&db).unwrap()
            })
        {
            best.real_interval = Some(iv);
        }
    }
    out.sort_by(|a, b| b.approx.norm().partial_cmp(&a.approx.norm()).unwrap());
    out
}

// ---------------------------------------------------------------------
// Verdicts.

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Dominance {
    #[serde(rename = "unique-real-dominant")]
    UniqueRealDominant,
    #[serde(rename = "tied")]
    Tied,
    #[serde(rename = "complex-dominant")]
    ComplexDominant,
    #[serde(rename = "inconclusive")]
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Verdict {
    #[serde(rename = "all-eigenspaces-infinite")]
    AllEigenspacesInfinite,
    #[serde(rename = "analytic-like")]
    AnalyticLike,
    #[serde(rename = "trivial")]
    Trivial,
    #[serde(rename = "inconclusive")]
    Inconclusive,
}

/// Spectrum analysis of an inverse gocha polynomial.
#[derive(Debug, Clone)]
pub struct SpectrumReport {
    pub polynomial: Vec<Rat>,
    pub eigenvalues: Vec<RootWindow>,
    /// Rational interval certified to contain the entropy L, when a
    /// positive real dominance candidate exists.
    pub entropy: Option<(Rat, Rat)>,
    pub dominance: Dominance,
    pub verdict: Verdict,
    /// (degree, b_n * n / L^n) over degrees 8..=24: finite evidence for
    /// the exponential growth of the log coefficients.
    pub growth_ratios: Vec<(usize, f64)>,
    /// Spread of the last quarter of the growth ratios within 0.5%.
    pub growth_stable: Option<bool>,
    pub notes: Vec<String>,
}

const GROWTH_LO: usize = 8;
const GROWTH_HI: usize = 24;

/// Certified dominance analysis of chi0_poly = 1/gocha_chi0.
///
/// The dominance candidate is the smallest positive real root of the
/// polynomial (the only possible location of the radius-defining
/// singularity, since gocha_chi0 has nonnegative coefficients). Its
/// realness, simplicity and L > 1 are decided exactly; the modulus gap
/// against every other root uses float approximations with certified
/// containment radii and must exceed the tolerance, otherwise the
/// verdict degrades to inconclusive rather than risking a false
/// certificate.
pub fn entropy_verdict(chi0_poly: &Series, tolerance: f64) -> SpectrumReport {
    let coeffs = chi0_poly.coeffs().to_vec();
    let p = RatPoly::new(coeffs.clone());
    let mut report = SpectrumReport {
        polynomial: coeffs,
        eigenvalues: vec![],
        entropy: None,
        dominance: Dominance::Inconclusive,
        verdict: Verdict::Inconclusive,
        growth_ratios: vec![],
        growth_stable: None,
        notes: vec![],
    };
    if p.degree() == 0 {
        report.notes.push("constant polynomial: trivial group".into());
        report.verdict = Verdict::Trivial;
        return report;
    }
    report.eigenvalues = isolate_roots(p.coeffs());

    // Exact candidate: smallest positive real root of P.
    let bound = root_bound(&p);
    let eps = Rat::new(BigInt::one(), BigInt::from(1_000_000_000_000i64));
    let sf = p.squarefree_part();
    let chain = SturmChain::new(&sf);
    let pos_roots = isolate_real_roots(&p, &Rat::zero(), &bound, &eps);
    let (mut s_lo, mut s_hi) = match pos_roots.first() {
        Some(iv) => iv.clone(),
        None => {
            // No positive real root: with nonnegative series
            // coefficients the dominant eigenvalues form complex pairs.
            report.dominance = Dominance::ComplexDominant;
            report.notes.push("no positive real root; dominant eigenvalues are non-real".into());
            return report;
        }
    };
    // The constant term is nonzero, so the root is strictly positive;
    // push the lower endpoint off 0 if bisection stopped there.
    let mut guard = 0;
    while s_lo.is_zero() && s_lo != s_hi && guard < 128 {
        let mid = (&s_lo + &s_hi) / rat(2);
        if sf.eval(&mid).is_zero() {
            s_lo = mid.clone();
            s_hi = mid;
            break;
        }
        if chain.count_roots(&mid, &s_hi) == 1 {
            s_lo = mid;
        } else {
            s_hi = mid;
        }
        guard += 1;
    }
    if s_lo.is_zero() && s_lo != s_hi {
        report.notes.push("could not separate the candidate root from 0".into());
        return report;
    }

    // Multiplicity check: the candidate must be a simple root.
    let g = p.gcd(&p.derivative());
    if g.degree() > 0 {
        let gchain = SturmChain::new(&g.squarefree_part());
        if gchain.count_roots(&(&s_lo - &eps), &s_hi) > 0 {
            report.dominance = Dominance::Tied;
            report.notes.push("dominance candidate is a multiple root".into());
            return report;
        }
    }

    // Exact mirror check: a root in [-s_hi, -s_lo] ties the modulus.
    if chain.count_roots(&(-&s_hi - &eps), &(-&s_lo)) > 0 {
        report.dominance = Dominance::Tied;
        report.notes.push("negative real root of equal modulus".into());
        return report;
    }

    // Entropy interval L = 1/s, s in [s_lo, s_hi].
    let lambda_lo = (&s_hi).recip();
    let lambda_hi = (&s_lo).recip();
    report.entropy = Some((lambda_lo.clone(), lambda_hi.clone()));

    // Exact decision of L > 1, i.e. some root in (0, 1) strictly.
    let one = rat(1);
    let roots_to_one = chain.count_roots(&Rat::zero(), &one);
    let one_is_root = sf.eval(&one).is_zero();
    let l_gt_1 = roots_to_one > usize::from(one_is_root);
    if !l_gt_1 && one_is_root && roots_to_one == 1 {
        report.notes.push("entropy is exactly 1".into());
    }

    // Modulus gap against every other approximated root.
    let lambda_lo_f = to_f64(&lambda_lo);
    let lambda_mid = to_f64(&((&lambda_lo + &lambda_hi) / rat(2)));
    let candidates: Vec<usize> = report
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, w)| match &w.real_interval {
            Some((a, b)) => *a <= lambda_hi && lambda_lo <= *b,
            None => (w.approx - Complex64::new(lambda_mid, 0.0)).norm() <= w.radius.max(1e-9),
        })
        .map(|(i, _)| i)
        .collect();
    if candidates.len() != 1 {
        report.dominance = Dominance::Inconclusive;
        report
            .notes
            .push("could not pair the exact dominance candidate with a unique approximation".into());
        return report;
    }
    let mut second = 0.0f64;
    let mut gap_certified = true;
    for (i, w) in report.eigenvalues.iter().enumerate() {
        if i == candidates[0] {
            continue;
        }
        if !w.radius.is_finite() {
            gap_certified = false;
            break;
        }
        second = second.max(w.approx.norm() + w.radius);
    }
    if !gap_certified {
        report.dominance = Dominance::Inconclusive;
        report.notes.push("uncertified approximation radius".into());
        return report;
    }
    let gap = lambda_lo_f - second;
    if gap <= tolerance {
        report.dominance = Dominance::Tied;
        report.notes.push(format!(
            "modulus gap {gap:.3e} below tolerance {tolerance:.1e}"
        ));
        return report;
    }
    report.dominance = Dominance::UniqueRealDominant;

    // Growth-ratio evidence b_n * n / L^n over degrees 8..24.
    if let Ok(series) = chi0_poly.retrunc(GROWTH_HI).inv() {
        if let Ok(l) = series.log() {
            let lam = to_f64(&((lambda_lo.clone() + lambda_hi.clone()) / rat(2)));
            for n in GROWTH_LO..=GROWTH_HI {
                let bn = to_f64(l.coeff(n)) * n as f64;
                report.growth_ratios.push((n, bn / lam.powi(n as i32)));
            }
            let tail: Vec<f64> = report
                .growth_ratios
                .iter()
                .filter(|(n, _)| *n >= GROWTH_HI - 4)
                .map(|(_, r)| *r)
                .collect();
            let mx = tail.iter().cloned().fold(f64::MIN, f64::max);
            let mn = tail.iter().cloned().fold(f64::MAX, f64::min);
            report.growth_stable = Some(mn > 0.0 && (mx - mn) / mn < 0.005);
        }
    }

    if l_gt_1 {
        report.verdict = Verdict::AllEigenspacesInfinite;
    } else {
        // L <= 1: with a unique real dominant this is the analytic-like
        // regime (rank tail hits zero for a single eigenvalue <= 1).
        report.verdict = if p.degree() == 1 {
            Verdict::AnalyticLike
        } else {
            Verdict::Inconclusive
        };
    }
    report
}

/// Verdict for a free presentation: rank >= 2 is unconditionally
/// infinite in every eigenspace, rank 1 is analytic-like, rank 0
/// trivial.
pub fn free_group_verdict(
    spec: &PresentationSpec,
    chi0_poly: &Series,
    tolerance: f64,
) -> Result<SpectrumReport> {
    if !spec.is_free() {
        return Err(Error::Usage("free-group verdict called with relations present".into()));
    }
    let d = spec.gen_count();
    let mut report = entropy_verdict(chi0_poly, tolerance);
    match d {
        0 => {
            report.verdict = Verdict::Trivial;
            report.notes.push("free of rank 0".into());
        }
        1 => {
            report.verdict = Verdict::AnalyticLike;
            report.notes.push("free of rank 1".into());
        }
        _ => {
            report.verdict = Verdict::AllEigenspacesInfinite;
            report.notes.push(format!("noncommutative free of rank {d}"));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupring::RingMode;

    #[test]
    fn power_sums_by_hand() {
        let s = newton_power_sums(Series::from_ints(3, &[1, -3, 1]).coeffs(), 3).unwrap();
        assert_eq!(s.values, vec![rat(3), rat(7), rat(18)]);

        let one_root = newton_power_sums(Series::from_ints(4, &[1, -1]).coeffs(), 4).unwrap();
        assert!(one_root.values.iter().all(|v| *v == rat(1)));
    }

    #[test]
    fn power_sums_equivariant_example3() {
        let q = 17;
        let mut lin = vec![0i64; q];
        lin[1] = -1;
        lin[2] = -1;
        lin[3] = -1;
        let mut quad = vec![0i64; q];
        quad[3] = 1;
        let poly = EqSeries::from_coeffs(
            3,
            vec![
                GroupRingElt::one(q),
                GroupRingElt::from_ints(q, &lin),
                GroupRingElt::from_ints(q, &quad),
            ],
        );
        let s = newton_power_sums(poly.coeffs(), 2).unwrap();
        let mut want = vec![0i64; q];
        want[2] = 1;
        want[4] = 3;
        want[5] = 2;
        want[6] = 1;
        assert_eq!(s.values[1], GroupRingElt::from_ints(q, &want));
    }

    #[test]
    fn power_sums_additive_under_multiplication() {
        let a = Series::from_ints(6, &[1, -2, 3]);
        let b = Series::from_ints(6, &[1, 1, 0, -1]);
        let ab = a.mul(&b);
        let sa = newton_power_sums(a.coeffs(), 5).unwrap();
        let sb = newton_power_sums(b.coeffs(), 5).unwrap();
        let sab = newton_power_sums(ab.coeffs(), 5).unwrap();
        for m in 0..5 {
            assert_eq!(sab.values[m], sa.values[m].clone() + sb.values[m].clone());
        }
    }

    #[test]
    fn necklace_example3_scalar() {
        let poly = Series::from_ints(3, &[1, -3, 1]);
        let zp = RingMode::zp(103);
        assert_eq!(necklace_ranks(&poly, 2, zp).unwrap(), BigInt::from(2));
        assert_eq!(necklace_ranks(&poly, 3, zp).unwrap(), BigInt::from(5));
    }

    #[test]
    fn necklace_free_matches_witt() {
        let d = 3i64;
        let poly = Series::from_ints(1, &[1, -d]);
        let zp = RingMode::zp(7);
        // Witt numbers for a 3-letter alphabet: 3, 3, 8, 18, 48.
        for (n, want) in [(1, 3i64), (2, 3), (3, 8), (4, 18), (5, 48)] {
            assert_eq!(necklace_ranks(&poly, n, zp).unwrap(), BigInt::from(want));
        }
    }

    #[test]
    fn equivariant_necklace_example3() {
        let q = 17;
        let mut lin = vec![0i64; q];
        lin[1] = -1;
        lin[2] = -1;
        lin[3] = -1;
        let mut quad = vec![0i64; q];
        quad[3] = 1;
        let poly = EqSeries::from_coeffs(
            3,
            vec![
                GroupRingElt::one(q),
                GroupRingElt::from_ints(q, &lin),
                GroupRingElt::from_ints(q, &quad),
            ],
        );
        let zp = RingMode::zp(103);
        let a2 = equivariant_necklace_ranks(&poly, 2, zp).unwrap();
        let mut w2 = vec![0i64; q];
        w2[4] = 1;
        w2[5] = 1;
        assert_eq!(a2, GroupRingElt::from_ints(q, &w2));
        let a3 = equivariant_necklace_ranks(&poly, 3, zp).unwrap();
        let mut w3 = vec![0i64; q];
        w3[5] = 1;
        w3[6] = 1;
        w3[7] = 2;
        w3[8] = 1;
        assert_eq!(a3, GroupRingElt::from_ints(q, &w3));
    }

    #[test]
    fn equivariant_necklace_free_mixed_q2() {
        // 1 - (1+chi0)t at q=2, n=3: ranks 1 + chi0.
        let poly = EqSeries::from_coeffs(
            1,
            vec![GroupRingElt::one(2), GroupRingElt::from_ints(2, &[-1, -1])],
        );
        let a3 = equivariant_necklace_ranks(&poly, 3, RingMode::zp(5)).unwrap();
        assert_eq!(a3, GroupRingElt::from_ints(2, &[1, 1]));
    }

    #[test]
    fn real_root_isolation_golden_ratio() {
        let p = RatPoly::new(vec![rat(1), -rat(1), -rat(1)]);
        let rev = RatPoly::new(p.coeffs().iter().rev().cloned().collect());
        let eps = Rat::new(1.into(), 1_000_000_000_000i64.into());
        let roots = isolate_real_roots(&rev, &rat(-10), &rat(10), &eps);
        assert_eq!(roots.len(), 2);
        let phi = 1.618_033_988_749_895f64;
        let hi = &roots[1];
        let mid = to_f64(&((&hi.0 + &hi.1) / rat(2)));
        assert!((mid - phi).abs() < 1e-9);
    }

    #[test]
    fn isolate_roots_reports_eigenvalues() {
        let ws = isolate_roots(Series::from_ints(2, &[1, -1, -1]).coeffs());
        assert_eq!(ws.len(), 2);
        assert!(ws[0].real_interval.is_some());
        assert!((ws[0].approx.re - 1.618_033_988_749_895).abs() < 1e-9);
        assert!((ws[1].approx.re + 0.618_033_988_749_895).abs() < 1e-9);

        let single = isolate_roots(Series::from_ints(1, &[1, -4]).coeffs());
        assert_eq!(single.len(), 1);
        assert!((single[0].approx.re - 4.0).abs() < 1e-12);

        // 1 - t - t^2 + t^4: dominant real eigenvalue in (1, 2).
        let ws = isolate_roots(Series::from_ints(4, &[1, -1, -1, 0, 1]).coeffs());
        let dom = &ws[0];
        assert!(dom.real_interval.is_some());
        assert!(dom.approx.re > 1.0 && dom.approx.re < 2.0);
    }

    #[test]
    fn verdict_fibonacci_polynomial() {
        let r = entropy_verdict(&Series::from_ints(2, &[1, -1, -1]), 1e-9);
        assert_eq!(r.dominance, Dominance::UniqueRealDominant);
        assert_eq!(r.verdict, Verdict::AllEigenspacesInfinite);
        let (lo, hi) = r.entropy.unwrap();
        let phi = 1.618_033_988_749_895f64;
        assert!(to_f64(&lo) <= phi && phi <= to_f64(&hi));
        assert!(to_f64(&hi) - to_f64(&lo) < 1e-9);
        assert_eq!(r.growth_stable, Some(true));
    }

    #[test]
    fn verdict_introex_polynomial() {
        let r = entropy_verdict(&Series::from_ints(4, &[1, -1, -1, 0, 1]), 1e-9);
        assert_eq!(r.dominance, Dominance::UniqueRealDominant);
        assert_eq!(r.verdict, Verdict::AllEigenspacesInfinite);
        assert_eq!(r.growth_stable, Some(true));
    }

    #[test]
    fn verdict_complex_dominant_never_certifies() {
        for tol in [1e-3, 1e-9, 1e-15] {
            let r = entropy_verdict(&Series::from_ints(4, &[1, -2, 0, 0, 2]), tol);
            assert_eq!(r.dominance, Dominance::ComplexDominant);
            assert_ne!(r.verdict, Verdict::AllEigenspacesInfinite);
        }
    }

    #[test]
    fn verdict_fab_intro_polynomial() {
        let r = entropy_verdict(&Series::from_ints(4, &[1, -1, -5, 0, 6]), 1e-9);
        assert_eq!(r.dominance, Dominance::UniqueRealDominant);
        assert_eq!(r.verdict, Verdict::AllEigenspacesInfinite);
    }

    #[test]
    fn verdict_aritex2_polynomial() {
        let r = entropy_verdict(&Series::from_ints(4, &[1, -4, 0, 0, 4]), 1e-9);
        assert_eq!(r.dominance, Dominance::UniqueRealDominant);
        assert_eq!(r.verdict, Verdict::AllEigenspacesInfinite);
    }

    #[test]
    fn verdict_single_eigenvalue_one_is_analytic_like() {
        let r = entropy_verdict(&Series::from_ints(1, &[1, -1]), 1e-9);
        assert_ne!(r.verdict, Verdict::AllEigenspacesInfinite);
        assert_eq!(r.verdict, Verdict::AnalyticLike);
    }

    #[test]
    fn free_verdicts() {
        use crate::presentation::{fixtures, parse_presentation};
        let s = parse_presentation(fixtures::FREE2_MIXED).unwrap();
        let poly = Series::from_ints(2, &[1, -1, -1]);
        let r = free_group_verdict(&s, &poly, 1e-9).unwrap();
        assert_eq!(r.verdict, Verdict::AllEigenspacesInfinite);

        let one_gen = parse_presentation(
            r#"{"p": 5, "q": 2, "generators": [{"name": "x", "char": 1}], "relations": []}"#,
        )
        .unwrap();
        let r1 = free_group_verdict(&one_gen, &Series::from_ints(1, &[1, -1]), 1e-9).unwrap();
        assert_eq!(r1.verdict, Verdict::AnalyticLike);

        let zero_gen =
            parse_presentation(r#"{"p": 5, "q": 2, "generators": [], "relations": []}"#).unwrap();
        let r0 = free_group_verdict(&zero_gen, &Series::from_ints(0, &[1]), 1e-9).unwrap();
        assert_eq!(r0.verdict, Verdict::Trivial);

        let presented = parse_presentation(fixtures::EXAMPLE3).unwrap();
        assert!(free_group_verdict(&presented, &poly, 1e-9).is_err());
    }
}
