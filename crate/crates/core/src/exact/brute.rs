use rayon::prelude::*;

use super::{Budget, FamilySpec};
use crate::error::Result;
use crate::gf::FieldCtx;

/// Estimated field operations for the exhaustive average: `q^{d-s-1}`
/// polynomials, `q` evaluations each.
pub fn brute_cost(spec: &FamilySpec) -> u128 {
    (spec.field().q() as u128)
        .checked_pow(spec.m() as u32)
        .unwrap_or(u128::MAX)
}

trait Adder: Sync {
    fn add(&self, a: u32, b: u32) -> u32;
}

struct PrimeAdd(u32);

impl Adder for PrimeAdd {
    #[inline(always)]
    fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.0 {
            s - self.0
        } else {
            s
        }
    }
}

struct XorAdd;

impl Adder for XorAdd {
    #[inline(always)]
    fn add(&self, a: u32, b: u32) -> u32 {
        a ^ b
    }
}

struct TableAdd<'a> {
    table: &'a [u16],
    q: u32,
}

impl Adder for TableAdd<'_> {
    #[inline(always)]
    fn add(&self, a: u32, b: u32) -> u32 {
        self.table[(a * self.q + b) as usize] as u32
    }
}

struct FieldAdd<'a>(&'a FieldCtx);

impl Adder for FieldAdd<'_> {
    #[inline(always)]
    fn add(&self, a: u32, b: u32) -> u32 {
        self.0.add(a, b)
    }
}

/// `sum_b V(f_b)` over all `b = (b_{d-s-1}, ..., b_1)`.
///
/// Work is split into chunks fixing `b_3, ..., b_{d-s-1}`; each chunk
/// tabulates `base(x) = f_a(x) + sum_{i>=3} b_i x^i` once. Inside a chunk `b_2`
/// and then `b_1` walk through F_q in integer order. Consecutive encodings
/// differ by an element whose digits are all 1 up to the carry position, so
/// each step adds one precomputed table `delta_t * x^i` to the running values.
pub fn brute_sum(spec: &FamilySpec, budget: Budget) -> Result<u128> {
    budget.check(brute_cost(spec))?;
    let field = spec.field();
    if field.k() == 1 {
        Ok(run(spec, &PrimeAdd(field.q())))
    } else if field.p() == 2 {
        Ok(run(spec, &XorAdd))
    } else if let Some(table) = field.add_table() {
        Ok(run(spec, &TableAdd { table, q: field.q() }))
    } else {
        Ok(run(spec, &FieldAdd(field)))
    }
}

fn run<A: Adder>(spec: &FamilySpec, adder: &A) -> u128 {
    let field = spec.field();
    let q = field.q();
    let p = field.p();
    let m = spec.m();
    let qs = q as usize;

    let fa = spec.f_a();
    let fa_vals: Vec<u32> = field.elements().map(|x| fa.eval(x)).collect();

    // delta_t has base-p digits 1 in positions 0..=t
    let deltas: Vec<u32> = (0..field.k())
        .scan(0u32, |delta, t| {
            *delta += p.pow(t);
            Some(*delta)
        })
        .collect();
    let step_tables = |power: u32| -> Vec<Vec<u32>> {
        deltas
            .iter()
            .map(|&dl| field.elements().map(|x| field.mul(dl, field.pow(x, power as u64))).collect())
            .collect()
    };
    let steps1 = step_tables(1);
    let steps2 = step_tables(2);
    // carry position for the step n -> n + 1
    let carry: Vec<u8> = (0..q)
        .map(|n| {
            let mut t = 0u8;
            let mut v = n;
            while v % p == p - 1 {
                t += 1;
                v /= p;
            }
            t
        })
        .collect();

    // each chunk fixes b_3..b_{m-1} and walks b_2 then b_1 incrementally
    let b2_range = if m >= 3 { q } else { 1 };
    let chunks = (q as u64).pow(m.saturating_sub(3) as u32);
    (0..chunks)
        .into_par_iter()
        .map_init(
            || (vec![0u32; qs], vec![0u32; qs], vec![0u32; qs], 0u32),
            |(base, values, stamps, epoch), idx| {
                let mut hi = Vec::with_capacity(m.saturating_sub(3));
                let mut rest = idx;
                for _ in 3..m {
                    hi.push((rest % q as u64) as u32);
                    rest /= q as u64;
                }
                for x in 0..q {
                    let mut acc = 0u32;
                    for &b in hi.iter().rev() {
                        acc = field.add(field.mul(acc, x), b);
                    }
                    let x3 = field.pow(x, 3);
                    base[x as usize] = field.add(fa_vals[x as usize], field.mul(acc, x3));
                }
                let mut total = 0u128;
                for b2 in 0..b2_range {
                    values.copy_from_slice(base);
                    for n in 0..q {
                        if *epoch == u32::MAX {
                            stamps.iter_mut().for_each(|s| *s = 0);
                            *epoch = 0;
                        }
                        *epoch += 1;
                        let e = *epoch;
                        let mut distinct = 0u32;
                        if n + 1 < q {
                            let step = &steps1[carry[n as usize] as usize];
                            for (v, &st) in values.iter_mut().zip(step.iter()) {
                                let slot = &mut stamps[*v as usize];
                                distinct += (*slot != e) as u32;
                                *slot = e;
                                *v = adder.add(*v, st);
                            }
                        } else {
                            for &v in values.iter() {
                                let slot = &mut stamps[v as usize];
                                distinct += (*slot != e) as u32;
                                *slot = e;
                            }
                        }
                        total += distinct as u128;
                    }
                    if b2 + 1 < b2_range {
                        let step = &steps2[carry[b2 as usize] as usize];
                        for (v, &st) in base.iter_mut().zip(step.iter()) {
                            *v = adder.add(*v, st);
                        }
                    }
                }
                total
            },
        )
        .sum()
}
