use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use super::{Budget, FamilySpec};
use crate::error::{Error, Result};
use crate::gf::FieldCtx;
use crate::rational::binom;

/// Largest table, in entries, the symmetric path may allocate.
const SYMMETRIC_MAX_ENTRIES: u128 = 1 << 24;

/// Estimated field operations for the subset search: three per visited node,
/// where depth `i > d - s + 1` nodes survive pruning with probability about
/// `q^{-(i - 1 - (d - s))}`.
pub fn chi_cost_dfs(spec: &FamilySpec, r_max: usize) -> u128 {
    let q = spec.field().q() as u64;
    let m = spec.m();
    let mut nodes = BigUint::from(0u32);
    for i in 1..=r_max {
        let decay = i.saturating_sub(m + 1) as u32;
        nodes += binom(q, i as u64) / BigUint::from(q).pow(decay);
    }
    (nodes * 3u32 + q * q * spec.d() as u64).to_u128().unwrap_or(u128::MAX)
}

/// Estimated field operations for the symmetric path, or `None` when its
/// table would exceed the memory cap.
pub fn chi_cost_symmetric(spec: &FamilySpec, r_max: usize) -> Option<u128> {
    let q = spec.field().q() as u128;
    let s = spec.s() as u128;
    let states = q.checked_pow(spec.s() as u32)?;
    let rows = r_max as u128 + 1;
    if states.checked_mul(rows)? > SYMMETRIC_MAX_ENTRIES {
        return None;
    }
    let table = q * r_max as u128 * states * s;
    let checks = states * (r_max - spec.m()) as u128 * (spec.d() as u128 + 1) * s;
    Some(table + checks)
}

/// Estimated cost of [`chi_counts`], the cheaper of the two paths.
pub fn chi_cost(spec: &FamilySpec, r_max: usize) -> u128 {
    let dfs = chi_cost_dfs(spec, r_max);
    chi_cost_symmetric(spec, r_max).map_or(dfs, |c| c.min(dfs))
}

fn check_r_max(spec: &FamilySpec, r_max: usize) -> Result<()> {
    let m = spec.m();
    if r_max < m + 1 || r_max > spec.d() {
        return Err(Error::OutOfRange {
            what: "r",
            value: r_max as i64,
            range: format!("[{}, {}]", m + 1, spec.d()),
        });
    }
    Ok(())
}

/// `chi_r` for every `r` in `[d - s + 1, r_max]`, by whichever of
/// [`chi_counts_dfs`] and [`chi_counts_symmetric`] is estimated cheaper.
pub fn chi_counts(spec: &FamilySpec, r_max: usize, budget: Budget) -> Result<BTreeMap<usize, u64>> {
    check_r_max(spec, r_max)?;
    let dfs = chi_cost_dfs(spec, r_max);
    match chi_cost_symmetric(spec, r_max) {
        Some(sym) if sym < dfs => chi_counts_symmetric(spec, r_max, budget),
        _ => chi_counts_dfs(spec, r_max, budget),
    }
}

/// `chi_r` by one depth-first pass over increasing subsets `x_1 < x_2 < ...`.
///
/// Level `i` holds the values at every `y > x_i` of the quotient of `f_a`
/// after dividing by `(T - x_1)...(T - x_i)`; the value of the previous
/// quotient at `x_i` is the `i`-th Newton coefficient of `f_a`. The remainder
/// modulo the full product has degree below `d - s` exactly when the Newton
/// coefficients beyond position `d - s` vanish, so a nonzero one at depth
/// `i > d - s` prunes the whole subtree.
pub fn chi_counts_dfs(spec: &FamilySpec, r_max: usize, budget: Budget) -> Result<BTreeMap<usize, u64>> {
    check_r_max(spec, r_max)?;
    budget.check(chi_cost_dfs(spec, r_max))?;
    let m = spec.m();
    let field = spec.field();
    let q = field.q();
    let fa = spec.f_a();
    let values: Vec<u32> = (0..q).map(|x| fa.eval(x)).collect();
    let inverses = DiffInverses::new(field);

    // tasks are prefixes (x_1, x_2); valid specs have r_max >= 3
    let per_task = (0..q)
        .into_par_iter()
        .flat_map(|x1| (x1 + 1..q).into_par_iter().map(move |x2| (x1, x2)))
        .map(|(x1, x2)| {
            let mut walker = Walker::new(field, &inverses, &values, m, r_max);
            walker.run_prefix(&[x1, x2]);
            walker.counts
        })
        .reduce(
            || vec![0u64; r_max + 1],
            |mut acc, c| {
                acc.iter_mut().zip(c).for_each(|(a, b)| *a += b);
                acc
            },
        );
    Ok((m + 1..=r_max).map(|r| (r, per_task[r])).collect())
}

/// `chi_r` from the distribution of `(Π_1, ..., Π_s)` over subsets.
///
/// The remainder coefficients of `T^j` for `j >= d - s` only involve
/// `Π_1..Π_s`, so whether a subset counts depends on those values alone. A
/// subset-sum table over `F_q^s` counts the `r`-subsets with each value, and
/// each value is then tested once.
pub fn chi_counts_symmetric(spec: &FamilySpec, r_max: usize, budget: Budget) -> Result<BTreeMap<usize, u64>> {
    check_r_max(spec, r_max)?;
    let cost = chi_cost_symmetric(spec, r_max).ok_or(Error::BudgetExceeded {
        required: u128::MAX,
        budget: budget.0,
    })?;
    budget.check(cost)?;
    let field = spec.field();
    let q = field.q() as usize;
    let s = spec.s();
    let m = spec.m();
    let states = q.pow(s as u32);

    // table[k][v]: k-subsets whose (Π_1..Π_s), as base-q digits, encode v
    let mut table = vec![vec![0u64; states]; r_max + 1];
    table[0][0] = 1;
    let mut digits = vec![0u32; s + 1];
    for (n, x) in (0..q as u32).enumerate() {
        for k in (0..=n.min(r_max - 1)).rev() {
            let (lower, upper) = table.split_at_mut(k + 1);
            let (src, dst) = (&lower[k], &mut upper[0]);
            for (v, &count) in src.iter().enumerate() {
                if count == 0 {
                    continue;
                }
                decode(v, q, &mut digits);
                let mut w = 0usize;
                for t in (1..=s).rev() {
                    w = w * q + field.add(digits[t], field.mul(x, digits[t - 1])) as usize;
                }
                dst[w] += count;
            }
        }
    }

    let fa = spec.fa_coeffs();
    let counts = (m + 1..=r_max)
        .into_par_iter()
        .map(|r| {
            let mut digits = vec![0u32; s + 1];
            let mut rem = Vec::with_capacity(fa.len());
            let total = table[r]
                .iter()
                .enumerate()
                .filter(|&(_, &c)| c > 0)
                .filter(|&(v, _)| {
                    decode(v, q, &mut digits);
                    high_remainder_vanishes(field, &fa, &digits, r, m, &mut rem)
                })
                .map(|(_, &c)| c)
                .sum::<u64>();
            (r, total)
        })
        .collect();
    Ok(counts)
}

/// `digits[0] = 1`, `digits[t] = Π_t` for `t >= 1`.
fn decode(mut v: usize, q: usize, digits: &mut [u32]) {
    digits[0] = 1;
    for d in digits.iter_mut().skip(1) {
        *d = (v % q) as u32;
        v /= q;
    }
}

/// Whether `f mod Q` has no terms of degree `m..r`, where
/// `Q = T^r - Π_1 T^{r-1} + ... ± Π_s T^{r-s}` keeps only the given `Π_t`.
fn high_remainder_vanishes(field: &FieldCtx, f: &[u32], pis: &[u32], r: usize, m: usize, rem: &mut Vec<u32>) -> bool {
    rem.clear();
    rem.extend_from_slice(f);
    let s = pis.len() - 1;
    for deg in (r..rem.len()).rev() {
        let c = rem[deg];
        if c == 0 {
            continue;
        }
        rem[deg] = 0;
        // T^deg = T^{deg-r} (Q - lower part); Q contributes (-1)^t Π_t T^{deg-t}
        for t in 1..=s.min(r) {
            let term = field.mul(c, pis[t]);
            let i = deg - t;
            rem[i] = if t % 2 == 1 { field.add(rem[i], term) } else { field.sub(rem[i], term) };
        }
    }
    rem[m..r.min(rem.len())].iter().all(|&c| c == 0)
}

/// `1/(y - x)` for `x < y`, tabulated for small fields.
struct DiffInverses<'a> {
    field: &'a FieldCtx,
    table: Option<Vec<u32>>,
}

impl<'a> DiffInverses<'a> {
    fn new(field: &'a FieldCtx) -> Self {
        let q = field.q();
        let table = (q <= 1024).then(|| {
            let mut t = vec![0u32; (q * q) as usize];
            for x in 0..q {
                for y in x + 1..q {
                    t[(x * q + y) as usize] = field.inv(field.sub(y, x)).expect("distinct");
                }
            }
            t
        });
        DiffInverses { field, table }
    }

    /// Row `x` of the table, indexed by `y`.
    fn row(&self, x: u32) -> Option<&[u32]> {
        let q = self.field.q() as usize;
        self.table.as_ref().map(|t| &t[x as usize * q..(x as usize + 1) * q])
    }
}

struct Walker<'a> {
    field: &'a FieldCtx,
    inverses: &'a DiffInverses<'a>,
    m: usize,
    r_max: usize,
    // levels[i][y] = quotient after i divisions, evaluated at y > x_i
    levels: Vec<Vec<u32>>,
    counts: Vec<u64>,
}

impl<'a> Walker<'a> {
    fn new(field: &'a FieldCtx, inverses: &'a DiffInverses<'a>, values: &[u32], m: usize, r_max: usize) -> Self {
        let mut levels = vec![vec![0u32; field.q() as usize]; r_max + 1];
        levels[0].copy_from_slice(values);
        Walker {
            field,
            inverses,
            m,
            r_max,
            levels,
            counts: vec![0; r_max + 1],
        }
    }

    /// Divides level `i - 1` by `(T - x)` into level `i`.
    fn descend(&mut self, i: usize, x: u32) {
        let f = self.field;
        let (lower, upper) = self.levels.split_at_mut(i);
        let src = &lower[i - 1];
        let dst = &mut upper[0];
        let neg_c = f.neg(src[x as usize]);
        let start = x as usize + 1;
        match self.inverses.row(x) {
            Some(inv) => {
                for ((d, &v), &w) in dst[start..].iter_mut().zip(&src[start..]).zip(&inv[start..]) {
                    *d = f.mul(f.add(v, neg_c), w);
                }
            }
            None => {
                for y in x + 1..f.q() {
                    let w = f.inv(f.sub(y, x)).expect("distinct");
                    dst[y as usize] = f.mul(f.add(src[y as usize], neg_c), w);
                }
            }
        }
    }

    /// Visits `x` at depth `i`. Returns whether to descend below it.
    fn visit(&mut self, i: usize, x: u32) -> bool {
        let c = self.levels[i - 1][x as usize];
        if i > self.m {
            if c != 0 {
                return false;
            }
            self.counts[i] += 1;
        }
        if i < self.r_max {
            self.descend(i, x);
            true
        } else {
            false
        }
    }

    fn run_prefix(&mut self, prefix: &[u32]) {
        for (i, &x) in prefix.iter().enumerate() {
            if !self.visit(i + 1, x) {
                return;
            }
        }
        self.dfs(prefix.len(), *prefix.last().expect("nonempty prefix") + 1);
    }

    fn dfs(&mut self, depth: usize, start: u32) {
        let q = self.field.q();
        let i = depth + 1;
        for x in start..q {
            if self.visit(i, x) {
                self.dfs(i, x + 1);
            }
        }
    }
}
