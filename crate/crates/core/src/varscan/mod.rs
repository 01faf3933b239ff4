//! Exhaustive checks on the variety `V_r^a = {x in F_q^r : R_j^a(x) = 0}`:
//! point counts, Jacobian ranks and the Vandermonde determinant identities.

mod linalg;
mod scan;

pub use linalg::{determinant, rank, Matrix};
pub use scan::{
    chi_estimate_check, count_points, singular_scan, JacobianReport, PointCount, ScanMode,
    ScanOptions, DEFAULT_SCAN_BUDGET,
};

use crate::error::{Error, Result};
use crate::exact::FamilySpec;
use crate::gf::{FieldCtx, FieldElement};
use crate::symcore::{assemble_r, elem_sym_raw, CompiledSym, PowerTable};

/// `(Π_1(x), ..., Π_upto(x))`.
pub fn elem_sym_values(field: &FieldCtx, x: &[FieldElement], upto: usize) -> Result<Vec<FieldElement>> {
    if upto > x.len() {
        return Err(Error::OutOfRange {
            what: "upto",
            value: upto as i64,
            range: format!("[0, {}]", x.len()),
        });
    }
    let raw = x
        .iter()
        .map(|v| field.check(v))
        .collect::<Result<Vec<_>>>()?;
    Ok(elem_sym_raw(field, &raw, upto)
        .into_iter()
        .map(|v| field.wrap(v))
        .collect())
}

/// `(∂Π_t/∂X_k)(x)` for `1 <= t, k <= r`, i.e. `e_{t-1}` of `x` with `x_k`
/// deleted, via `e_t(x \ x_k) = Π_t(x) - x_k e_{t-1}(x \ x_k)`.
pub fn pi_jacobian(field: &FieldCtx, x: &[u32]) -> Matrix {
    let r = x.len();
    let pis = elem_sym_raw(field, x, r);
    let mut a = vec![vec![0u32; r]; r];
    for (k, &xk) in x.iter().enumerate() {
        let mut prev = 1u32;
        a[0][k] = 1;
        for t in 1..r {
            prev = field.sub(pis[t - 1], field.mul(xk, prev));
            a[t][k] = prev;
        }
    }
    a
}

/// How `R_j` and `∂R_j/∂Π_t` are evaluated at a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Evaluator {
    /// Compiled symbolic expressions from [`assemble_r`].
    #[default]
    Symbolic,
    /// Division of `f_a` by `Q = T^r - Π_1 T^{r-1} + ... + (-1)^r Π_r`. With
    /// `f_a = U Q + R`, differentiating gives `∂R/∂Π_t ≡ -(-1)^t U T^{r-t}`
    /// modulo `Q`.
    Remainder,
}

/// Evaluation engine for the system `R_{d-s}, ..., R_{r-1}` of one family.
#[derive(Debug, Clone)]
pub struct RModel {
    field: FieldCtx,
    fa: Vec<u32>,
    r: usize,
    m: usize,
    evaluator: Evaluator,
    values: Vec<CompiledSym>,
    partials: Vec<Vec<CompiledSym>>,
    max_exp: usize,
}

impl RModel {
    pub fn new(spec: &FamilySpec, r: usize, evaluator: Evaluator) -> Result<Self> {
        let m = spec.m();
        let (mut values, mut partials, mut max_exp) = (Vec::new(), Vec::new(), 1);
        if evaluator == Evaluator::Symbolic {
            let sys = assemble_r(spec, r)?;
            for (_, p) in &sys.equations {
                let c = CompiledSym::new(p);
                max_exp = max_exp.max(c.max_exp());
                values.push(c);
                let row = (1..=r as u32)
                    .map(|t| p.partial(t).map(|d| CompiledSym::new(&d)))
                    .collect::<Result<Vec<_>>>()?;
                partials.push(row);
            }
        } else if r < m + 1 || r > spec.d() {
            return Err(Error::OutOfRange {
                what: "r",
                value: r as i64,
                range: format!("[{}, {}]", m + 1, spec.d()),
            });
        }
        Ok(RModel {
            field: spec.field().clone(),
            fa: spec.fa_coeffs(),
            r,
            m,
            evaluator,
            values,
            partials,
            max_exp,
        })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Number of equations, `r - d + s`.
    pub fn equations(&self) -> usize {
        self.r - self.m
    }

    fn q_coeffs(&self, pis: &[u32]) -> Vec<u32> {
        // ascending coefficients of Q; coefficient of T^{r-t} is (-1)^t Π_t
        let f = &self.field;
        let mut q = vec![0u32; self.r + 1];
        q[self.r] = 1;
        for t in 1..=self.r {
            let v = pis[t - 1];
            q[self.r - t] = if t % 2 == 0 { v } else { f.neg(v) };
        }
        q
    }

    /// Quotient and remainder of `f_a` by the monic `q`.
    fn divide(&self, q: &[u32]) -> (Vec<u32>, Vec<u32>) {
        let f = &self.field;
        let r = self.r;
        let mut rem = self.fa.clone();
        let mut quot = vec![0u32; rem.len().saturating_sub(r)];
        for top in (r..rem.len()).rev() {
            let c = rem[top];
            if c == 0 {
                continue;
            }
            quot[top - r] = c;
            for (i, &qi) in q.iter().enumerate() {
                rem[top - r + i] = f.sub(rem[top - r + i], f.mul(c, qi));
            }
        }
        rem.truncate(r);
        rem.resize(r, 0);
        (quot, rem)
    }

    /// `R_j(Π)` for `j = d - s, ..., r - 1`.
    pub fn values(&self, pis: &[u32]) -> Vec<u32> {
        match self.evaluator {
            Evaluator::Symbolic => {
                let powers = PowerTable::new(&self.field, pis, self.max_exp);
                self.values.iter().map(|c| c.eval(&self.field, &powers)).collect()
            }
            Evaluator::Remainder => {
                let (_, rem) = self.divide(&self.q_coeffs(pis));
                rem[self.m..self.r].to_vec()
            }
        }
    }

    /// `(∂R_j/∂Π_t)(Π)`, one row per equation, `r` columns.
    pub fn d_r_d_pi(&self, pis: &[u32]) -> Matrix {
        let f = &self.field;
        match self.evaluator {
            Evaluator::Symbolic => {
                let powers = PowerTable::new(f, pis, self.max_exp);
                self.partials
                    .iter()
                    .map(|row| row.iter().map(|c| c.eval(f, &powers)).collect())
                    .collect()
            }
            Evaluator::Remainder => {
                let r = self.r;
                let q = self.q_coeffs(pis);
                let (quot, _) = self.divide(&q);
                // w[k] = U T^k mod Q
                let mut w = vec![0u32; r];
                let mut reduced = quot.clone();
                for top in (r..reduced.len()).rev() {
                    let c = reduced[top];
                    if c != 0 {
                        for (i, &qi) in q.iter().enumerate() {
                            reduced[top - r + i] = f.sub(reduced[top - r + i], f.mul(c, qi));
                        }
                    }
                }
                for (i, &c) in reduced.iter().take(r).enumerate() {
                    w[i] = c;
                }
                let mut powers_of_t = Vec::with_capacity(r);
                powers_of_t.push(w.clone());
                for _ in 1..r {
                    let lead = w[r - 1];
                    let mut next = vec![0u32; r];
                    for i in (1..r).rev() {
                        next[i] = w[i - 1];
                    }
                    if lead != 0 {
                        for i in 0..r {
                            next[i] = f.sub(next[i], f.mul(lead, q[i]));
                        }
                    }
                    w = next;
                    powers_of_t.push(w.clone());
                }
                let mut out = vec![vec![0u32; r]; self.r - self.m];
                for t in 1..=r {
                    let col = &powers_of_t[r - t];
                    for (row, j) in (self.m..self.r).enumerate() {
                        // -(-1)^t = +1 for odd t
                        out[row][t - 1] = if t % 2 == 1 { col[j] } else { f.neg(col[j]) };
                    }
                }
                out
            }
        }
    }

    /// `(∂R/∂X)(x) = (∂R/∂Π)(Π(x)) · (∂Π/∂X)(x)`.
    pub fn jacobian(&self, x: &[u32]) -> Matrix {
        let f = &self.field;
        let pis = elem_sym_raw(f, x, self.r);
        let b = self.d_r_d_pi(&pis);
        let a = pi_jacobian(f, x);
        linalg::matmul(f, &b, &a)
    }
}

fn check_point(field: &FieldCtx, x: &[u32], r: usize) -> Result<()> {
    if x.len() != r {
        return Err(Error::Dimension {
            expected: r,
            got: x.len(),
        });
    }
    if let Some(&bad) = x.iter().find(|&&v| v >= field.q()) {
        return Err(Error::NotAnElement {
            value: bad as u64,
            q: field.q(),
        });
    }
    Ok(())
}

/// Jacobian of `R_{d-s}, ..., R_{r-1}` (rows, ascending `j`) with respect to
/// `X_1, ..., X_r` at `x`, by the chain rule.
pub fn jacobian_r(spec: &FamilySpec, r: usize, x: &[u32]) -> Result<Matrix> {
    check_point(spec.field(), x, r)?;
    Ok(RModel::new(spec, r, Evaluator::Symbolic)?.jacobian(x))
}

/// Sign relating `det(∂Π/∂X)` (or a minor) to `prod_{i<j} (x_i - x_j)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DetSign {
    Plus,
    Minus,
    /// The product equals its own negative (it is zero, or `p = 2`).
    Indeterminate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DetCheck {
    pub det: u32,
    pub product: u32,
    /// `det = ±product`.
    pub holds: bool,
    pub sign: Option<DetSign>,
}

fn compare_det(field: &FieldCtx, det: u32, product: u32) -> DetCheck {
    let neg = field.neg(product);
    let holds = det == product || det == neg;
    let sign = holds.then(|| {
        if product == neg {
            DetSign::Indeterminate
        } else if det == product {
            DetSign::Plus
        } else {
            DetSign::Minus
        }
    });
    DetCheck {
        det,
        product,
        holds,
        sign,
    }
}

fn difference_product(field: &FieldCtx, x: &[u32]) -> u32 {
    let mut acc = 1u32;
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            acc = field.mul(acc, field.sub(x[i], x[j]));
        }
    }
    acc
}

/// Compares `det((∂Π_i/∂X_j)(x))` with `prod_{i<j} (x_i - x_j)`.
pub fn vandermonde_det_check(field: &FieldCtx, x: &[u32]) -> Result<DetCheck> {
    check_point(field, x, x.len())?;
    let det = determinant(field, &pi_jacobian(field, x));
    Ok(compare_det(field, det, difference_product(field, x)))
}

/// Compares the minor of `(∂Π_i/∂X_j)(x)` on rows `1..=|cols|` and columns
/// `cols` with `prod_{m<n} (x_{l_m} - x_{l_n})`.
pub fn minor_det_check(field: &FieldCtx, x: &[u32], cols: &[usize]) -> Result<DetCheck> {
    check_point(field, x, x.len())?;
    if cols.iter().any(|&c| c >= x.len()) || cols.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::OutOfRange {
            what: "column",
            value: cols.iter().copied().max().unwrap_or(0) as i64,
            range: format!("increasing indices in [0, {})", x.len()),
        });
    }
    let a = pi_jacobian(field, x);
    let s = cols.len();
    let minor: Matrix = (0..s).map(|i| cols.iter().map(|&c| a[i][c]).collect()).collect();
    let sub: Vec<u32> = cols.iter().map(|&c| x[c]).collect();
    Ok(compare_det(field, determinant(field, &minor), difference_product(field, &sub)))
}

/// Number of distinct values among the coordinates.
pub fn distinct_count(x: &[u32]) -> usize {
    let mut v = x.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}
