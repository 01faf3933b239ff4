//! Exact value-set statistics for the family
//! `f_b = T^d + a_{d-1} T^{d-1} + ... + a_{d-s} T^{d-s} + b_{d-s-1} T^{d-s-1} + ... + b_1 T`.
//!
//! Two independent routes compute the average value set: exhaustive
//! enumeration of every `b` ([`avg_value_set_brute`]), and the
//! inclusion-exclusion expression in the interpolating-set counts `chi_r`
//! ([`avg_value_set_formula`]). [`verify_identity`] runs both and compares
//! them exactly.

mod brute;
mod chi;

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::Serialize;

pub use brute::{brute_cost, brute_sum};
pub use chi::{chi_cost, chi_cost_dfs, chi_cost_symmetric, chi_counts, chi_counts_dfs, chi_counts_symmetric};

use crate::error::{Error, Result};
use crate::gf::{FieldCtx, FieldElement};
use crate::rational::{binom, qpow, render, Rational, RationalJson};
use crate::unipoly::Poly;

/// Default work budget in estimated field operations.
pub const DEFAULT_BUDGET: u128 = 10_000_000_000;

/// Upper limit on estimated field operations for one computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget(pub u128);

impl Default for Budget {
    fn default() -> Self {
        Budget(DEFAULT_BUDGET)
    }
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget(u128::MAX)
    }

    pub fn check(&self, required: u128) -> Result<()> {
        if required > self.0 {
            return Err(Error::BudgetExceeded {
                required,
                budget: self.0,
            });
        }
        Ok(())
    }
}

/// Parameters `(F_q, d, s, a)` of a polynomial family.
///
/// `a[0] = a_{d-1}`, ..., `a[s-1] = a_{d-s}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilySpec {
    field: FieldCtx,
    d: usize,
    s: usize,
    a: Vec<u32>,
}

impl FamilySpec {
    /// Requires `1 <= s <= d - 2`, `d < q` and `len(a) = s`.
    pub fn new(field: &FieldCtx, d: usize, s: usize, a: Vec<u32>) -> Result<Self> {
        if s < 1 || s + 2 > d {
            return Err(Error::InvalidFamily(format!(
                "need 1 <= s <= d - 2, got d = {d}, s = {s}"
            )));
        }
        if d as u64 >= field.q() as u64 {
            return Err(Error::InvalidFamily(format!(
                "need d < q, got d = {d}, q = {}",
                field.q()
            )));
        }
        if a.len() != s {
            return Err(Error::Dimension {
                expected: s,
                got: a.len(),
            });
        }
        if let Some(&bad) = a.iter().find(|&&v| v >= field.q()) {
            return Err(Error::NotAnElement {
                value: bad as u64,
                q: field.q(),
            });
        }
        Ok(FamilySpec {
            field: field.clone(),
            d,
            s,
            a,
        })
    }

    pub fn from_elements(field: &FieldCtx, d: usize, s: usize, a: &[FieldElement]) -> Result<Self> {
        let raw = a
            .iter()
            .map(|e| field.check(e))
            .collect::<Result<Vec<_>>>()?;
        Self::new(field, d, s, raw)
    }

    /// The all-zero coefficient vector.
    pub fn zero_a(field: &FieldCtx, d: usize, s: usize) -> Result<Self> {
        Self::new(field, d, s, vec![0; s])
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn s(&self) -> usize {
        self.s
    }

    /// `d - s`: number of free coefficients plus one.
    pub fn m(&self) -> usize {
        self.d - self.s
    }

    pub fn a(&self) -> &[u32] {
        &self.a
    }

    /// Coefficient of `T^j` in `f_a`: 1 for `j = d`, `a_j` for
    /// `d - s <= j < d`, otherwise 0.
    pub fn coefficient(&self, j: usize) -> u32 {
        if j == self.d {
            1
        } else if j < self.d && j >= self.d - self.s {
            self.a[self.d - 1 - j]
        } else {
            0
        }
    }

    /// Ascending coefficients of `f_a`.
    pub fn fa_coeffs(&self) -> Vec<u32> {
        (0..=self.d).map(|j| self.coefficient(j)).collect()
    }

    pub fn f_a(&self) -> Poly {
        Poly::from_raw(&self.field, self.fa_coeffs())
    }
}

/// Number of `g` of degree at most `d - s - 1` with `(f_a + g)(x) = 0` for all
/// `x` in `points`.
pub fn interp_space_size(spec: &FamilySpec, points: &[u32]) -> Result<BigUint> {
    let r = points.len();
    if r == 0 {
        return Err(Error::OutOfRange {
            what: "r",
            value: 0,
            range: "[1, q]".into(),
        });
    }
    check_points(spec.field(), points)?;
    let m = spec.m();
    let q = spec.field().q();
    if r <= m {
        return Ok(BigUint::from(q).pow((m - r) as u32));
    }
    if r > spec.d() {
        return Ok(BigUint::zero());
    }
    let rem = spec.f_a().rem_by_roots(points);
    let ok = rem.degree().is_none_or(|deg| deg < m);
    Ok(if ok { BigUint::one() } else { BigUint::zero() })
}

pub(crate) fn check_points(field: &FieldCtx, points: &[u32]) -> Result<()> {
    if let Some(&bad) = points.iter().find(|&&x| x >= field.q()) {
        return Err(Error::NotAnElement {
            value: bad as u64,
            q: field.q(),
        });
    }
    let mut sorted = points.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::DuplicatePoints);
    }
    Ok(())
}

/// Number of `r`-subsets of F_q on which `f_a` agrees with a polynomial of
/// degree at most `d - s - 1`.
pub fn chi_subsets(spec: &FamilySpec, r: usize, budget: Budget) -> Result<u64> {
    let lo = spec.m() + 1;
    if r < lo || r > spec.d() {
        return Err(Error::OutOfRange {
            what: "r",
            value: r as i64,
            range: format!("[{lo}, {}]", spec.d()),
        });
    }
    let counts = chi_counts(spec, r, budget)?;
    Ok(counts[&r])
}

/// `sum_{r=1}^{d-s} (-1)^{r-1} binom(q, r) q^{1-r}`.
pub fn first_sum(q: u64, m: usize) -> Rational {
    let mut acc = Rational::zero();
    for r in 1..=m {
        let term = Rational::from_integer(BigInt::from(binom(q, r as u64))) * qpow(q, 1 - r as i64);
        if r % 2 == 1 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// Combines the first sum with `q^{-(d-s-1)} sum_r (-1)^{r-1} chi_r`.
pub fn formula_from_chi(q: u64, d: usize, s: usize, chi: &BTreeMap<usize, u64>) -> Rational {
    let m = d - s;
    let mut alt = BigInt::zero();
    for r in m + 1..=d {
        let c = BigInt::from(chi.get(&r).copied().unwrap_or(0));
        if r % 2 == 1 {
            alt += c;
        } else {
            alt -= c;
        }
    }
    first_sum(q, m) + Rational::from_integer(alt) * qpow(q, -(m as i64 - 1))
}

pub fn avg_value_set_formula(spec: &FamilySpec, budget: Budget) -> Result<Rational> {
    let chi = chi_counts(spec, spec.d(), budget)?;
    Ok(formula_from_chi(
        spec.field().q() as u64,
        spec.d(),
        spec.s(),
        &chi,
    ))
}

/// Average of `V(f_b)` over all `b`, by exhaustive enumeration.
pub fn avg_value_set_brute(spec: &FamilySpec, budget: Budget) -> Result<Rational> {
    let sum = brute_sum(spec, budget)?;
    Ok(Rational::new(
        BigInt::from(sum),
        BigInt::from(spec.field().q()).pow(spec.m() as u32 - 1),
    ))
}

/// Which computation paths to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Brute,
    Formula,
    Both,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactReport {
    pub q: u32,
    pub p: u32,
    pub k: u32,
    pub d: usize,
    pub s: usize,
    pub a: Vec<u32>,
    pub avg_brute: Option<Rational>,
    pub avg_formula: Option<Rational>,
    pub first_sum: Rational,
    pub chi: BTreeMap<usize, u64>,
    /// Present only when both paths ran.
    pub identity_holds: Option<bool>,
    pub elapsed_ms: u128,
}

#[derive(Debug, Serialize)]
struct ExactJson<'a> {
    q: u32,
    p: u32,
    k: u32,
    d: usize,
    s: usize,
    a: &'a [u32],
    avg_brute: Option<RationalJson>,
    avg_formula: Option<RationalJson>,
    first_sum: RationalJson,
    chi: BTreeMap<String, u64>,
    identity_holds: Option<bool>,
    elapsed_ms: u128,
}

/// Flat CSV form of an [`ExactReport`]. Rationals render as `num/den`,
/// `a` as `;`-separated values and `chi` as `r:count` pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExactCsvRow {
    pub q: u32,
    pub p: u32,
    pub k: u32,
    pub d: usize,
    pub s: usize,
    pub a: String,
    pub avg_brute: String,
    pub avg_formula: String,
    pub first_sum: String,
    pub chi: String,
    pub identity_holds: String,
    pub elapsed_ms: u128,
}

impl ExactReport {
    pub fn to_json(&self) -> serde_json::Value {
        let view = ExactJson {
            q: self.q,
            p: self.p,
            k: self.k,
            d: self.d,
            s: self.s,
            a: &self.a,
            avg_brute: self.avg_brute.as_ref().map(RationalJson::from),
            avg_formula: self.avg_formula.as_ref().map(RationalJson::from),
            first_sum: RationalJson::from(&self.first_sum),
            chi: self.chi.iter().map(|(r, c)| (r.to_string(), *c)).collect(),
            identity_holds: self.identity_holds,
            elapsed_ms: self.elapsed_ms,
        };
        serde_json::to_value(view).expect("report serializes")
    }

    pub fn csv_row(&self) -> ExactCsvRow {
        let opt = |r: &Option<Rational>| r.as_ref().map(render).unwrap_or_default();
        ExactCsvRow {
            q: self.q,
            p: self.p,
            k: self.k,
            d: self.d,
            s: self.s,
            a: join(self.a.iter(), ";"),
            avg_brute: opt(&self.avg_brute),
            avg_formula: opt(&self.avg_formula),
            first_sum: render(&self.first_sum),
            chi: join(self.chi.iter().map(|(r, c)| format!("{r}:{c}")), ";"),
            identity_holds: self.identity_holds.map(|b| b.to_string()).unwrap_or_default(),
            elapsed_ms: self.elapsed_ms,
        }
    }
}

fn join<T: ToString>(items: impl Iterator<Item = T>, sep: &str) -> String {
    items.map(|i| i.to_string()).collect::<Vec<_>>().join(sep)
}

/// Runs the requested paths. All budget checks happen before any enumeration
/// starts.
pub fn run_exact(spec: &FamilySpec, method: Method, budget: Budget) -> Result<ExactReport> {
    let start = Instant::now();
    let do_brute = matches!(method, Method::Brute | Method::Both);
    let do_formula = matches!(method, Method::Formula | Method::Both);
    if do_brute {
        budget.check(brute_cost(spec))?;
    }
    if do_formula {
        budget.check(chi_cost(spec, spec.d()))?;
    }
    let q = spec.field().q();
    let chi = if do_formula {
        chi_counts(spec, spec.d(), budget)?
    } else {
        BTreeMap::new()
    };
    let avg_formula = do_formula.then(|| formula_from_chi(q as u64, spec.d(), spec.s(), &chi));
    let avg_brute = if do_brute {
        Some(avg_value_set_brute(spec, budget)?)
    } else {
        None
    };
    let identity_holds = match (&avg_brute, &avg_formula) {
        (Some(b), Some(f)) => Some(b == f),
        _ => None,
    };
    Ok(ExactReport {
        q,
        p: spec.field().p(),
        k: spec.field().k(),
        d: spec.d(),
        s: spec.s(),
        a: spec.a().to_vec(),
        avg_brute,
        avg_formula,
        first_sum: first_sum(q as u64, spec.m()),
        chi,
        identity_holds,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

/// Computes both sides of the identity and compares them exactly.
pub fn verify_identity(spec: &FamilySpec, budget: Budget) -> Result<ExactReport> {
    run_exact(spec, Method::Both, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn spec(q: u64, d: usize, s: usize, a: Vec<u32>) -> FamilySpec {
        FamilySpec::new(&FieldCtx::parse(&q.to_string()).unwrap(), d, s, a).unwrap()
    }

    #[test]
    fn family_validation() {
        let f7 = FieldCtx::prime(7).unwrap();
        assert!(FamilySpec::new(&f7, 3, 2, vec![0, 0]).is_err());
        assert!(FamilySpec::new(&f7, 3, 0, vec![]).is_err());
        assert!(FamilySpec::new(&f7, 7, 1, vec![0]).is_err());
        assert!(FamilySpec::new(&f7, 4, 1, vec![0, 0]).is_err());
        assert!(FamilySpec::new(&f7, 4, 1, vec![7]).is_err());
        let s = FamilySpec::new(&f7, 5, 2, vec![3, 4]).unwrap();
        assert_eq!(s.fa_coeffs(), vec![0, 0, 0, 4, 3, 1]);
    }

    #[test]
    fn brute_fixtures() {
        let b = Budget::default();
        assert_eq!(avg_value_set_brute(&spec(7, 3, 1, vec![0]), b).unwrap(), rat(33, 7));
        assert_eq!(avg_value_set_brute(&spec(5, 3, 1, vec![0]), b).unwrap(), rat(17, 5));
        assert_eq!(brute_sum(&spec(7, 3, 1, vec![0]), b).unwrap(), 33);
    }

    #[test]
    fn chi_fixtures() {
        let b = Budget::default();
        assert_eq!(chi_subsets(&spec(7, 3, 1, vec![0]), 3, b).unwrap(), 5);
        assert_eq!(chi_subsets(&spec(5, 3, 1, vec![0]), 3, b).unwrap(), 2);
        assert!(chi_subsets(&spec(7, 3, 1, vec![0]), 2, b).is_err());
        assert!(chi_subsets(&spec(7, 3, 1, vec![0]), 4, b).is_err());
    }

    #[test]
    fn formula_fixtures() {
        let b = Budget::default();
        assert_eq!(first_sum(7, 2), rat(4, 1));
        assert_eq!(avg_value_set_formula(&spec(7, 3, 1, vec![0]), b).unwrap(), rat(33, 7));
        assert_eq!(avg_value_set_formula(&spec(5, 3, 1, vec![0]), b).unwrap(), rat(17, 5));
    }

    #[test]
    fn interp_space_examples() {
        let s = spec(7, 4, 1, vec![0]);
        assert_eq!(interp_space_size(&s, &[2, 5]).unwrap(), BigUint::from(7u32));
        let s = spec(7, 3, 1, vec![0]);
        assert_eq!(interp_space_size(&s, &[1, 2, 4]).unwrap(), BigUint::one());
        assert_eq!(interp_space_size(&s, &[1, 2, 3]).unwrap(), BigUint::zero());
        assert_eq!(interp_space_size(&s, &[0, 1, 2, 3]).unwrap(), BigUint::zero());
        assert_eq!(interp_space_size(&s, &[1, 1]), Err(Error::DuplicatePoints));
    }

    #[test]
    fn identity_extension_fields() {
        let f9 = FieldCtx::parse("3^2:1,0,1").unwrap();
        let s = FamilySpec::new(&f9, 4, 2, vec![5, 7]).unwrap();
        let rep = verify_identity(&s, Budget::default()).unwrap();
        assert_eq!(rep.identity_holds, Some(true));
        let f8 = FieldCtx::parse("2^3").unwrap();
        let s = FamilySpec::new(&f8, 4, 1, vec![1]).unwrap();
        let rep = verify_identity(&s, Budget::default()).unwrap();
        assert_eq!(rep.identity_holds, Some(true));
    }

    #[test]
    fn budget_refusal_reports_requirement() {
        let s = spec(101, 8, 2, vec![0, 0]);
        match avg_value_set_brute(&s, Budget(1000)) {
            Err(Error::BudgetExceeded { required, budget }) => {
                assert_eq!(budget, 1000);
                assert_eq!(required, brute_cost(&s));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn report_serialization() {
        let rep = verify_identity(&spec(7, 3, 1, vec![0]), Budget::default()).unwrap();
        let j = rep.to_json();
        assert_eq!(j["avg_brute"]["num"], "33");
        assert_eq!(j["avg_formula"]["den"], "7");
        assert_eq!(j["chi"]["3"], 5);
        assert_eq!(j["identity_holds"], true);
        let row = rep.csv_row();
        assert_eq!(row.avg_brute, "33/7");
        assert_eq!(row.chi, "3:5");
    }
}
