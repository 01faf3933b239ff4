//! Explicit constants, auxiliary functions and error bounds for the average
//! value set, evaluated exactly where rational and by outward-rounded
//! intervals where `e`, square roots or `π` enter.

mod interval;

pub use interval::{Interval, PRECISION};

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{binom, factorial, int, qpow, render, Rational};
use crate::regime::{validate_regime, RegimeReport};

/// `μ_d = sum_{r=1}^d (-1)^{r-1} / r!`.
pub fn mu(d: u64) -> Result<Rational> {
    if d == 0 {
        return Err(Error::OutOfRange {
            what: "d",
            value: 0,
            range: "[1, inf)".into(),
        });
    }
    Ok((1..=d).fold(Rational::zero(), |acc, r| {
        let term = Rational::new(BigInt::one(), factorial(r).into());
        if r % 2 == 1 {
            acc + term
        } else {
            acc - term
        }
    }))
}

/// Row `n` of the unsigned Stirling numbers of the first kind.
pub fn stirling1_row(n: u64) -> Vec<BigUint> {
    let mut row = vec![BigUint::one()];
    for m in 1..=n {
        let mut next = vec![BigUint::zero(); m as usize + 1];
        for k in 1..=m as usize {
            next[k] = row[k - 1].clone();
            if k < row.len() {
                next[k] += &row[k] * (m - 1);
            }
        }
        row = next;
    }
    row
}

/// `c(n, k)`, permutations of `n` elements with `k` cycles.
pub fn stirling1_unsigned(n: u64, k: u64) -> Result<BigUint> {
    if k > n {
        return Err(Error::OutOfRange {
            what: "k",
            value: k as i64,
            range: format!("[0, {n}]"),
        });
    }
    Ok(stirling1_row(n).swap_remove(k as usize))
}

fn check_r(d: u64, s: u64, r: u64) -> Result<()> {
    if r + s <= d || r > d {
        return Err(Error::OutOfRange {
            what: "r",
            value: r as i64,
            range: format!("[{}, {d}]", d - s + 1),
        });
    }
    Ok(())
}

/// `(δ_r, D_r)` with `δ_r = prod_{j=d-r+1}^s j = s!/(d-r)!` and
/// `D_r = sum_{j=d-r+1}^s (j - 1)`.
pub fn delta_d(d: u64, s: u64, r: u64) -> Result<(BigUint, BigUint)> {
    if s > d {
        return Err(Error::OutOfRange {
            what: "s",
            value: s as i64,
            range: format!("[0, {d}]"),
        });
    }
    check_r(d, s, r)?;
    let lo = d - r + 1;
    let delta: BigUint = (lo..=s).map(BigUint::from).product();
    debug_assert_eq!(delta, factorial(s) / factorial(d - r));
    let big_d: BigUint = (lo..=s).map(|j| BigUint::from(j - 1)).sum();
    Ok((delta, big_d))
}

fn require(ok: bool, what: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Regime(what()))
    }
}

/// Right side of the estimate
/// `|χ_r - q^{d-s}/r!| <= r(r-1)/(2 r!) δ_r q^{d-s-1} + 14/r! D_r^3 δ_r^2 (q+1) q^{d-s-2}`.
pub fn chi_bound(q: u64, d: usize, s: usize, r: usize) -> Result<Rational> {
    let (d, s, r64) = (d as u64, s as u64, r as u64);
    check_r(d, s, r64)?;
    require(validate_regime(q, d, s, Some(r64)).chi_estimate, || {
        format!("estimate needs q > d and 2(s+1) <= d (q={q}, d={d}, s={s})")
    })?;
    let (delta, big_d) = delta_d(d, s, r64)?;
    let rf: BigInt = factorial(r64).into();
    let delta: BigInt = delta.into();
    let big_d: BigInt = big_d.into();
    let first = Rational::new(BigInt::from(r64 * (r64 - 1)) * &delta, 2 * rf.clone())
        * qpow(q, (d - s - 1) as i64);
    let second = Rational::new(14 * big_d.pow(3) * delta.pow(2), rf)
        * int(q + 1)
        * qpow(q, d as i64 - s as i64 - 2);
    Ok(first + second)
}

fn check_ds(d: u64, s: u64) -> Result<()> {
    if s < 1 || s + 2 > d {
        return Err(Error::OutOfRange {
            what: "s",
            value: s as i64,
            range: format!("[1, {}]", d as i64 - 2),
        });
    }
    Ok(())
}

/// `sum_{r=1}^{d-s} (-q)^{1-r} (binom(q, r) - q^r / r!)`, the part of the
/// average not involving `χ`, minus `μ_d q`.
pub fn first_sum_deficit(q: u64, d: u64, s: u64) -> Result<Rational> {
    check_ds(d, s)?;
    Ok((1..=d - s).fold(Rational::zero(), |acc, r| acc + deficit_term(q, r)))
}

fn deficit_term(q: u64, r: u64) -> Rational {
    let diff = Rational::from(BigInt::from(binom(q, r)))
        - Rational::new(BigInt::from(q).pow(r as u32), factorial(r).into());
    let signed = if r % 2 == 1 { diff } else { -diff };
    signed * qpow(q, 1 - r as i64)
}

/// `A(d, s) = sum_{r=2}^{d-s} (-q)^{1-r} (binom(q, r) - q^r / r!)`.
pub fn a_term(q: u64, d: u64, s: u64) -> Result<Rational> {
    check_ds(d, s)?;
    Ok((2..=d - s).fold(Rational::zero(), |acc, r| acc + deficit_term(q, r)))
}

/// `A(d, s)` through the Stirling expansion
/// `sum_{r=0}^{d-s-2} (-1)^r/(2 r!) + sum_{r=2}^{d-s} q^{1-r} sum_{k=0}^{r-2} (-1)^{k+1} c(r,k) q^k / r!`.
pub fn a_term_stirling(q: u64, d: u64, s: u64) -> Result<Rational> {
    check_ds(d, s)?;
    let m = d - s;
    let mut acc = Rational::zero();
    for r in 0..=m - 2 {
        let t = Rational::new(BigInt::one(), 2 * BigInt::from(factorial(r)));
        acc += if r % 2 == 0 { t } else { -t };
    }
    for r in 2..=m {
        let row = stirling1_row(r);
        let rf: BigInt = factorial(r).into();
        let mut inner = Rational::zero();
        for (k, c) in row.iter().enumerate().take(r as usize - 1) {
            let t = Rational::new(BigInt::from(c.clone()) * BigInt::from(q).pow(k as u32), rf.clone());
            inner += if k % 2 == 1 { t } else { -t };
        }
        acc += inner * qpow(q, 1 - r as i64);
    }
    Ok(acc)
}

/// `H(d, s) = s^6 (s!)^2 / d! · sum_{k=0}^{s-1} binom(d, k) / k!`.
pub fn h_total(d: u64, s: u64) -> Rational {
    let sum = (0..s).fold(Rational::zero(), |acc, k| acc + h_value(d, k));
    sum * Rational::new(
        BigInt::from(s).pow(6) * BigInt::from(factorial(s)).pow(2),
        factorial(d).into(),
    )
}

/// `h(k) = binom(d, k) / k!`.
pub fn h_value(d: u64, k: u64) -> Rational {
    Rational::new(binom(d, k).into(), factorial(k).into())
}

/// Right side of the Corollary:
/// `(s^2+1)/(d-s-1)! + 21/8 H(d, s) + 7/q`.
pub fn corollary_bound(q: u64, d: u64, s: u64) -> Result<Rational> {
    check_ds(d, s)?;
    require(q > d && 2 * (s + 1) <= d, || {
        format!("corollary needs q > d and 2(s+1) <= d (q={q}, d={d}, s={s})")
    })?;
    Ok(Rational::new(BigInt::from(s * s + 1), factorial(d - s - 1).into())
        + Rational::new(21.into(), 8.into()) * h_total(d, s)
        + Rational::new(7.into(), q.into()))
}

/// `f(d) = e^{2√d} (d-2)^5 / 2^{d-2}`.
pub fn f_profile(d: u64) -> Interval {
    let growth = Interval::from_int(d as i64).sqrt().scale(&int(2)).exp();
    let poly = Interval::exact(int(d as i64 - 2).pow(5));
    growth.mul(&poly).scale(&qpow(2, 2 - d as i64))
}

/// `g(d) = 9 (d-6) e^{2√d} / 2^{d-2}`.
pub fn g_profile(d: u64) -> Interval {
    let growth = Interval::from_int(d as i64).sqrt().scale(&int(2)).exp();
    growth.scale(&(int(9 * (d as i64 - 6)) * qpow(2, 2 - d as i64)))
}

/// `f(d) + 7/q`.
pub fn main_bound(q: u64, d: u64) -> Result<Interval> {
    if d < 3 {
        return Err(Error::OutOfRange {
            what: "d",
            value: d as i64,
            range: "[3, inf)".into(),
        });
    }
    require(q > d, || format!("main bound needs q > d (q={q}, d={d})"))?;
    Ok(f_profile(d).add(&Interval::exact(Rational::new(7.into(), q.into()))))
}

/// `g(d) + 7/q`.
pub fn restricted_bound(q: u64, d: u64) -> Result<Interval> {
    if d < 7 {
        return Err(Error::OutOfRange {
            what: "d",
            value: d as i64,
            range: "[7, inf)".into(),
        });
    }
    require(q > d, || format!("restricted bound needs q > d (q={q}, d={d})"))?;
    Ok(g_profile(d).add(&Interval::exact(Rational::new(7.into(), q.into()))))
}

/// Largest integer `m` with `m <= k_0 = -1/2 + √(5+4d)/2`.
pub fn k0_floor(d: u64) -> u64 {
    let mut m = 0u64;
    while (2 * (m + 1) + 1).pow(2) <= 5 + 4 * d {
        m += 1;
    }
    m
}

/// `k_0 = (√(5+4d) - 1) / 2`.
pub fn k0(d: u64) -> Interval {
    Interval::from_int(5 + 4 * d as i64)
        .sqrt()
        .sub(&Interval::from_int(1))
        .scale(&Rational::new(1.into(), 2.into()))
}

/// `C(d, s) = s^7 (s!)^2 / ((d - ⌊k_0⌋)! (⌊k_0⌋!)^2)`.
pub fn c_value(d: u64, s: u64) -> Rational {
    let k = k0_floor(d).min(d);
    Rational::new(
        BigInt::from(s).pow(7) * BigInt::from(factorial(s)).pow(2),
        BigInt::from(factorial(d - k)) * BigInt::from(factorial(k)).pow(2),
    )
}

/// `3 (d/2-1)^5 e^{1/(3d-6) + 4/d - 1/5 + 3 + √(5+4d)} / (5 √(2π) 2^d)`.
pub fn c_envelope(d: u64) -> Interval {
    let di = d as i64;
    let base = Interval::exact(Rational::new(BigInt::from(di - 2), 2.into()).pow(5));
    let exponent = Interval::exact(
        Rational::new(1.into(), (3 * di - 6).into()) + Rational::new(4.into(), di.into())
            - Rational::new(1.into(), 5.into())
            + int(3),
    )
    .add(&Interval::from_int(5 + 4 * di).sqrt());
    let denom = Interval::pi()
        .scale(&int(2))
        .sqrt()
        .scale(&(int(5) * int(2).pow(d as i32)));
    base.mul(&exponent.exp()).scale(&int(3)).div(&denom)
}

/// `(1/√(2e)) (e/d)^d (s/e)^{2s} s^7 e^{2(s-√d)} d^{-3/4}`, as a float.
pub fn h_asymptote(d: u64, s: u64) -> f64 {
    let (df, sf) = (d as f64, s as f64);
    let log = -0.5 * (2.0f64.ln() + 1.0) + df * (1.0 - df.ln()) + 2.0 * sf * (sf.ln() - 1.0)
        + 7.0 * sf.ln()
        + 2.0 * (sf - df.sqrt())
        - 0.75 * df.ln();
    log.exp()
}

#[derive(Debug, Clone, Serialize)]
pub struct AuxProfile {
    pub d: u64,
    pub s: u64,
    pub k0: f64,
    pub k0_floor: u64,
    /// `h(k)` for `0 <= k <= s - 1`, rendered exactly.
    pub h: Vec<String>,
    /// Largest index attaining the maximum; `h(k_0 - 1) = h(k_0)` when
    /// `k_0` is an integer.
    pub h_argmax: u64,
    /// `min(⌊k_0⌋, s - 1)`.
    pub expected_argmax: u64,
    pub unimodal: bool,
    pub c: String,
    pub h_total: String,
    pub c_envelope: f64,
    pub h_le_c: bool,
    pub c_le_envelope: bool,
    pub asymptote: f64,
}

fn is_unimodal(values: &[Rational]) -> bool {
    let mut falling = false;
    for w in values.windows(2) {
        if w[1] < w[0] {
            falling = true;
        } else if falling && w[1] > w[0] {
            return false;
        }
    }
    true
}

pub fn aux_profiles(d: u64, s: u64) -> Result<AuxProfile> {
    check_ds(d, s)?;
    let h: Vec<Rational> = (0..s).map(|k| h_value(d, k)).collect();
    let h_argmax = (0..s as usize)
        .max_by(|&a, &b| h[a].cmp(&h[b]).then(a.cmp(&b)))
        .expect("s >= 1") as u64;
    let kf = k0_floor(d);
    let c = c_value(d, s);
    let total = h_total(d, s);
    let envelope = c_envelope(d);
    Ok(AuxProfile {
        d,
        s,
        k0: k0(d).midpoint_f64(),
        k0_floor: kf,
        h: h.iter().map(render).collect(),
        h_argmax,
        expected_argmax: kf.min(s - 1),
        unimodal: is_unimodal(&h),
        h_le_c: total <= c,
        c_le_envelope: Interval::exact(c.clone()).certainly_le(&envelope),
        c: render(&c),
        h_total: render(&total),
        c_envelope: envelope.midpoint_f64(),
        asymptote: h_asymptote(d, s),
    })
}

/// Decomposition of the deviation `V - μ_d q = A + B'` with
/// `B' = q^{1-(d-s)} sum_{r>d-s} (-1)^{r-1} (χ_r - q^{d-s}/r!)`, plus the
/// per-part bounds used to reach the Corollary.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub a: Rational,
    /// `|A - 1/(2e)|`.
    pub a_deviation: Interval,
    /// `1/(2 (d-s-1)!) + 7/q`.
    pub a_bound: Rational,
    /// `q^{-(d-s-1)} sum_r |χ_r - q^{d-s}/r!|`.
    pub b: Rational,
    /// `sum_r r(r-1)/(2 r!) δ_r + sum_r 14/r! D_r^3 δ_r^2 (1 + 1/q)`.
    pub b_bound: Rational,
    /// `s^2/(2 (d-s-1)!) + 21/8 H(d, s)`.
    pub b_envelope: Rational,
}

impl Decomposition {
    pub fn a_holds(&self) -> bool {
        self.a_deviation.certainly_le(&Interval::exact(self.a_bound.clone()))
    }

    pub fn b_holds(&self) -> bool {
        self.b <= self.b_bound && self.b_bound <= self.b_envelope
    }
}

pub fn decomposition(q: u64, d: u64, s: u64, chi: &BTreeMap<usize, u64>) -> Result<Decomposition> {
    check_ds(d, s)?;
    let a = a_term(q, d, s)?;
    let half_inv_e = Interval::from_int(1).div(&Interval::e().scale(&int(2)));
    let a_deviation = Interval::exact(a.clone()).sub(&half_inv_e).abs();
    let a_bound = Rational::new(1.into(), 2 * BigInt::from(factorial(d - s - 1)))
        + Rational::new(7.into(), q.into());
    let mut b = Rational::zero();
    let mut b_bound = Rational::zero();
    for r in d - s + 1..=d {
        let c = *chi.get(&(r as usize)).ok_or_else(|| Error::InvalidFamily(format!("missing chi_{r}")))?;
        let expected = Rational::new(BigInt::from(q).pow((d - s) as u32), factorial(r).into());
        b += (int(c) - expected).abs();
        let (delta, big_d) = delta_d(d, s, r)?;
        let (delta, big_d): (BigInt, BigInt) = (delta.into(), big_d.into());
        let rf: BigInt = factorial(r).into();
        b_bound += Rational::new(BigInt::from(r * (r - 1)) * &delta, 2 * rf.clone());
        b_bound += Rational::new(14 * big_d.pow(3) * delta.pow(2), rf)
            * (int(1) + Rational::new(1.into(), q.into()));
    }
    b *= qpow(q, 1 - (d - s) as i64);
    let b_envelope = Rational::new(BigInt::from(s * s), 2 * BigInt::from(factorial(d - s - 1)))
        + Rational::new(21.into(), 8.into()) * h_total(d, s);
    Ok(Decomposition {
        a,
        a_deviation,
        a_bound,
        b,
        b_bound,
        b_envelope,
    })
}

/// Outcome of comparing `|V - μ_d q - 1/(2e)|` with the three bounds.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub q: u64,
    pub d: u64,
    pub s: u64,
    /// Enclosure of the left side, as floats.
    pub lhs: [f64; 2],
    pub rhs_corollary: Option<f64>,
    pub rhs_main: Option<f64>,
    pub rhs_restricted: Option<f64>,
    pub corollary_holds: Option<bool>,
    pub main_holds: Option<bool>,
    pub restricted_holds: Option<bool>,
    pub regime: RegimeReport,
}

/// `|avg - μ_d q - 1/(2e)|` as an enclosure.
pub fn deviation(q: u64, d: u64, avg: &Rational) -> Result<Interval> {
    let center = avg - mu(d)? * int(q);
    let half_inv_e = Interval::from_int(1).div(&Interval::e().scale(&int(2)));
    Ok(Interval::exact(center).sub(&half_inv_e).abs())
}

/// Checks every bound whose hypotheses hold for `(q, d, s)` against the
/// exact average `avg`.
pub fn check_bounds(q: u64, d: u64, s: u64, avg: &Rational) -> Result<BoundReport> {
    let regime = validate_regime(q, d, s, None);
    let lhs = deviation(q, d, avg)?;
    let to_f = |x: &Rational| crate::rational::to_f64(x);
    let corollary = if regime.main {
        Some(corollary_bound(q, d, s)?)
    } else {
        None
    };
    let main = if regime.main { Some(main_bound(q, d)?) } else { None };
    let restricted = if regime.restricted {
        Some(restricted_bound(q, d)?)
    } else {
        None
    };
    Ok(BoundReport {
        q,
        d,
        s,
        lhs: [to_f(lhs.lo()), to_f(lhs.hi())],
        rhs_corollary: corollary.as_ref().map(to_f),
        rhs_main: main.as_ref().map(Interval::midpoint_f64),
        rhs_restricted: restricted.as_ref().map(Interval::midpoint_f64),
        corollary_holds: corollary.map(|c| lhs.certainly_le(&Interval::exact(c))),
        main_holds: main.map(|m| lhs.certainly_le(&m)),
        restricted_holds: restricted.map(|g| lhs.certainly_le(&g)),
        regime,
    })
}

/// Smallest `n >= from` with `value(m) < 1` for all `n <= m <= to`.
pub fn eventually_below_one(from: u64, to: u64, value: impl Fn(u64) -> Interval) -> Option<u64> {
    let one = Interval::from_int(1);
    let mut first = None;
    for d in (from..=to).rev() {
        if value(d).certainly_lt(&one) {
            first = Some(d);
        } else {
            break;
        }
    }
    first
}

/// Integer argmax over `[from, to]`, with every other value certainly below.
pub fn certified_argmax(from: u64, to: u64, value: impl Fn(u64) -> Interval) -> Option<u64> {
    let values: Vec<(u64, Interval)> = (from..=to).map(|d| (d, value(d))).collect();
    let (best, top) = values
        .iter()
        .max_by(|a, b| a.1.lo().cmp(b.1.lo()))
        .expect("nonempty range");
    values
        .iter()
        .all(|(d, v)| d == best || v.certainly_lt(top))
        .then_some(*best)
}

#[cfg(test)]
mod tests;
