use num_bigint::BigUint;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use super::{distinct_count, rank, Evaluator, RModel};
use crate::bounds::chi_bound;
use crate::error::{Error, Result};
use crate::exact::{chi_counts, Budget, FamilySpec};
use crate::gf::FieldCtx;
use crate::rational::{binom, factorial, int, render, Rational};
use crate::regime::validate_regime;
use crate::symcore::elem_sym_raw;

pub const DEFAULT_SCAN_BUDGET: u128 = 1_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScanMode {
    /// Every `x` in F_q^r in odometer order, each evaluated from scratch.
    #[default]
    Odometer,
    /// One nondecreasing representative per orbit of the coordinate
    /// permutations, weighted by the orbit size `r! / prod mult!`; the
    /// elementary symmetric values are updated incrementally along the walk.
    Orbit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanOptions {
    pub mode: ScanMode,
    pub evaluator: Evaluator,
    /// Maximum number of visited points.
    pub budget: Budget,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            mode: ScanMode::Odometer,
            evaluator: Evaluator::Symbolic,
            budget: Budget(DEFAULT_SCAN_BUDGET),
        }
    }
}

/// Point statistics of `V_r^a(F_q)`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct PointCount {
    pub total: u64,
    pub distinct_coords: u64,
    /// Points of `V_r^a` where the Jacobian has rank below `r - d + s`.
    pub rank_deficient: u64,
    /// Points of `V_r^a` with a repeated coordinate.
    pub equal_coords: u64,
    /// `r(r-1)/2 · δ_r · q^{d-s-1}`, an upper bound for `equal_coords`.
    pub equal_coords_bound: String,
}

impl PointCount {
    fn merge(mut self, other: PointCount) -> PointCount {
        self.total += other.total;
        self.distinct_coords += other.distinct_coords;
        self.rank_deficient += other.rank_deficient;
        self.equal_coords += other.equal_coords;
        self
    }

    pub fn equal_coords_within_bound(&self) -> bool {
        self.equal_coords_bound
            .parse::<BigUint>()
            .map(|b| BigUint::from(self.equal_coords) <= b)
            .unwrap_or(false)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JacobianReport {
    pub point: Vec<u32>,
    pub rank: usize,
    pub distinct_coordinate_count: usize,
    /// Number of coordinate permutations of `point` the report stands for.
    pub orbit_size: u64,
}

/// Number of points a scan visits.
pub fn scan_cost(q: u32, r: usize, mode: ScanMode) -> u128 {
    let size = match mode {
        ScanMode::Odometer => BigUint::from(q).pow(r as u32),
        ScanMode::Orbit => binom(q as u64 + r as u64 - 1, r as u64),
    };
    size.to_u128().unwrap_or(u128::MAX)
}

fn check_r(spec: &FamilySpec, r: usize) -> Result<()> {
    if r < spec.m() + 1 || r > spec.d() {
        return Err(Error::OutOfRange {
            what: "r",
            value: r as i64,
            range: format!("[{}, {}]", spec.m() + 1, spec.d()),
        });
    }
    Ok(())
}

/// Visits every point (or orbit representative) of F_q^r. `visit` receives
/// the point, its elementary symmetric values and its weight. Work is split on
/// the leading coordinate (odometer) or the leading pair (orbit); results come
/// back in task order.
fn traverse<A, M, V>(field: &FieldCtx, r: usize, mode: ScanMode, make: M, visit: V) -> Vec<A>
where
    A: Send,
    M: Fn() -> A + Sync + Send,
    V: Fn(&mut A, &[u32], &[u32], u64) + Sync + Send,
{
    let q = field.q();
    match mode {
        ScanMode::Odometer => (0..q)
            .into_par_iter()
            .map(|x1| {
                let mut acc = make();
                let mut x = vec![0u32; r];
                x[0] = x1;
                loop {
                    let pis = elem_sym_raw(field, &x, r);
                    visit(&mut acc, &x, &pis, 1);
                    let mut i = r;
                    loop {
                        i -= 1;
                        if i == 0 {
                            return acc;
                        }
                        x[i] += 1;
                        if x[i] < q {
                            break;
                        }
                        x[i] = 0;
                    }
                }
            })
            .collect(),
        ScanMode::Orbit => {
            let factorials: Vec<u64> = (0..=r as u64)
                .scan(1u64, |f, n| {
                    *f *= n.max(1);
                    Some(*f)
                })
                .collect();
            let prefixes: Vec<(u32, u32)> = if r == 1 {
                (0..q).map(|x| (x, x)).collect()
            } else {
                (0..q).flat_map(|a| (a..q).map(move |b| (a, b))).collect()
            };
            prefixes
                .into_par_iter()
                .map(|(x1, x2)| {
                    let mut acc = make();
                    let mut walk = OrbitWalk {
                        field,
                        r,
                        x: vec![0; r],
                        levels: vec![vec![0u32; r + 1]; r + 1],
                        factorials: &factorials,
                    };
                    walk.levels[0][0] = 1;
                    walk.push(0, x1);
                    if r == 1 {
                        walk.leaf(&mut acc, &visit);
                    } else {
                        walk.push(1, x2);
                        walk.descend(2, &mut acc, &visit);
                    }
                    acc
                })
                .collect()
        }
    }
}

struct OrbitWalk<'a> {
    field: &'a FieldCtx,
    r: usize,
    x: Vec<u32>,
    // levels[i][t] = e_t(x_1, ..., x_i)
    levels: Vec<Vec<u32>>,
    factorials: &'a [u64],
}

impl OrbitWalk<'_> {
    fn push(&mut self, i: usize, v: u32) {
        let f = self.field;
        self.x[i] = v;
        let (lower, upper) = self.levels.split_at_mut(i + 1);
        let prev = &lower[i];
        let next = &mut upper[0];
        next[0] = 1;
        for t in 1..=i + 1 {
            next[t] = f.add(prev[t], f.mul(v, prev[t - 1]));
        }
    }

    fn leaf<A, V: Fn(&mut A, &[u32], &[u32], u64)>(&self, acc: &mut A, visit: &V) {
        let mut weight = self.factorials[self.r];
        let mut run = 1usize;
        for i in 1..=self.r {
            if i < self.r && self.x[i] == self.x[i - 1] {
                run += 1;
            } else {
                weight /= self.factorials[run];
                run = 1;
            }
        }
        visit(acc, &self.x, &self.levels[self.r][1..], weight);
    }

    fn descend<A, V: Fn(&mut A, &[u32], &[u32], u64)>(&mut self, i: usize, acc: &mut A, visit: &V) {
        if i == self.r {
            self.leaf(acc, visit);
            return;
        }
        for v in self.x[i - 1]..self.field.q() {
            self.push(i, v);
            self.descend(i + 1, acc, visit);
        }
    }
}

/// `r(r-1)/2 · δ_r · q^{d-s-1}` with `δ_r = s!/(d-r)!`.
pub fn equal_coords_bound(q: u64, d: usize, s: usize, r: usize) -> BigUint {
    let delta = factorial(s as u64) / factorial((d - r) as u64);
    BigUint::from((r * (r - 1) / 2) as u64) * delta * BigUint::from(q).pow((d - s - 1) as u32)
}

/// Exhaustive point count of `V_r^a(F_q)`.
pub fn count_points(spec: &FamilySpec, r: usize, opts: ScanOptions) -> Result<PointCount> {
    check_r(spec, r)?;
    let field = spec.field();
    opts.budget.check(scan_cost(field.q(), r, opts.mode))?;
    let model = RModel::new(spec, r, opts.evaluator)?;
    let eqs = model.equations();
    let parts = traverse(field, r, opts.mode, PointCount::default, |acc, x, pis, w| {
        if model.values(pis).iter().any(|&v| v != 0) {
            return;
        }
        acc.total += w;
        if distinct_count(x) == r {
            acc.distinct_coords += w;
        } else {
            acc.equal_coords += w;
        }
        if rank(field, &model.jacobian(x)) < eqs {
            acc.rank_deficient += w;
        }
    });
    let mut out = parts.into_iter().fold(PointCount::default(), PointCount::merge);
    out.equal_coords_bound = equal_coords_bound(field.q() as u64, spec.d(), spec.s(), r).to_string();
    Ok(out)
}

/// Every `x` in F_q^r where the Jacobian of the `R_j` has rank below
/// `r - d + s`. Fails with the first point having `s` or more distinct
/// coordinates.
pub fn singular_scan(spec: &FamilySpec, r: usize, opts: ScanOptions) -> Result<Vec<JacobianReport>> {
    check_r(spec, r)?;
    let field = spec.field();
    opts.budget.check(scan_cost(field.q(), r, opts.mode))?;
    let model = RModel::new(spec, r, opts.evaluator)?;
    let eqs = model.equations();
    let parts = traverse(field, r, opts.mode, Vec::new, |acc: &mut Vec<JacobianReport>, x, _, w| {
        let rank = rank(field, &model.jacobian(x));
        if rank < eqs {
            acc.push(JacobianReport {
                point: x.to_vec(),
                rank,
                distinct_coordinate_count: distinct_count(x),
                orbit_size: w,
            });
        }
    });
    let reports: Vec<JacobianReport> = parts.into_iter().flatten().collect();
    if let Some(bad) = reports.iter().find(|rep| rep.distinct_coordinate_count >= spec.s()) {
        return Err(Error::PropertyViolation(format!(
            "x = {:?} has Jacobian rank {} < {} but {} distinct coordinates (at most {} expected)",
            bad.point,
            bad.rank,
            eqs,
            bad.distinct_coordinate_count,
            spec.s() - 1
        )));
    }
    Ok(reports)
}

/// Exact comparison of `|chi_r - q^{d-s}/r!|` with the estimate's right side.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EstimateCheck {
    pub chi: u64,
    pub deviation: String,
    pub bound: String,
    pub holds: bool,
}

pub fn chi_estimate_check(spec: &FamilySpec, r: usize, budget: Budget) -> Result<EstimateCheck> {
    let q = spec.field().q() as u64;
    let (d, s) = (spec.d(), spec.s());
    if !validate_regime(q, d as u64, s as u64, Some(r as u64)).chi_estimate {
        return Err(Error::Regime(format!(
            "estimate needs q > d, 2(s+1) <= d and d-s+1 <= r <= d (q={q}, d={d}, s={s}, r={r})"
        )));
    }
    let chi = chi_counts(spec, r, budget)?[&r];
    let expected = Rational::new(BigUint::from(q).pow((d - s) as u32).into(), factorial(r as u64).into());
    let deviation = (int(chi) - expected).abs();
    let bound = chi_bound(q, d, s, r)?;
    Ok(EstimateCheck {
        chi,
        holds: deviation <= bound,
        deviation: render(&deviation),
        bound: render(&bound),
    })
}
