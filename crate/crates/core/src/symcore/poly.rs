use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::gf::{FieldCtx, FieldElement};

/// Coefficient domain of a [`SymPoly`].
pub trait CoeffRing: Clone + fmt::Debug {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn from_int(&self, v: i64) -> Self::Elem;
    fn render(&self, a: &Self::Elem) -> String;
}

/// The integers, for characteristic-free tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Integers;

impl CoeffRing for Integers {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn from_int(&self, v: i64) -> BigInt {
        BigInt::from(v)
    }
    fn render(&self, a: &BigInt) -> String {
        a.to_string()
    }
}

impl CoeffRing for FieldCtx {
    type Elem = u32;

    fn zero(&self) -> u32 {
        0
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        FieldCtx::add(self, *a, *b)
    }
    fn neg(&self, a: &u32) -> u32 {
        FieldCtx::neg(self, *a)
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        FieldCtx::mul(self, *a, *b)
    }
    fn from_int(&self, v: i64) -> u32 {
        FieldCtx::from_int(self, v)
    }
    fn render(&self, a: &u32) -> String {
        a.to_string()
    }
}

/// Sparse exponent vector: `(t, e_t)` pairs with ascending `t >= 1` and
/// `e_t > 0`, standing for `Π_t^{e_t}`.
pub type Monomial = Vec<(u32, u32)>;

pub fn weighted_degree(mono: &Monomial) -> u32 {
    mono.iter().map(|&(t, e)| t * e).sum()
}

fn mono_mul(a: &Monomial, b: &Monomial) -> Monomial {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some(&(ta, ea)), Some(&(tb, eb))) if ta == tb => {
                out.push((ta, ea + eb));
                i += 1;
                j += 1;
            }
            (Some(&(ta, ea)), Some(&(tb, _))) if ta < tb => {
                out.push((ta, ea));
                i += 1;
            }
            (Some(&(ta, ea)), None) => {
                out.push((ta, ea));
                i += 1;
            }
            (_, Some(&(tb, eb))) => {
                out.push((tb, eb));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

/// Polynomial in the elementary symmetric functions `Π_1, ..., Π_r`.
#[derive(Clone, PartialEq)]
pub struct SymPoly<R: CoeffRing> {
    ring: R,
    r: usize,
    terms: BTreeMap<Monomial, R::Elem>,
}

impl<R: CoeffRing> fmt::Debug for SymPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SymPoly(r={}, {})", self.r, self)
    }
}

/// Terms rendered `c·Π1^e1·Π2^e2`, sorted by weighted degree.
impl<R: CoeffRing> fmt::Display for SymPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut sorted: Vec<_> = self.terms.iter().collect();
        sorted.sort_by_key(|(m, _)| (weighted_degree(m), (*m).clone()));
        let parts: Vec<String> = sorted
            .into_iter()
            .map(|(mono, c)| {
                let mut s = self.ring.render(c);
                for &(t, e) in mono {
                    if e == 1 {
                        s.push_str(&format!("·Π{t}"));
                    } else {
                        s.push_str(&format!("·Π{t}^{e}"));
                    }
                }
                s
            })
            .collect();
        let mut out = parts[0].clone();
        for part in &parts[1..] {
            match part.strip_prefix('-') {
                Some(rest) => {
                    out.push_str(" - ");
                    out.push_str(rest);
                }
                None => {
                    out.push_str(" + ");
                    out.push_str(part);
                }
            }
        }
        write!(f, "{out}")
    }
}

impl<R: CoeffRing> SymPoly<R> {
    pub fn zero(ring: &R, r: usize) -> Self {
        SymPoly {
            ring: ring.clone(),
            r,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &R, r: usize, c: R::Elem) -> Self {
        let mut p = Self::zero(ring, r);
        p.add_term(Vec::new(), c);
        p
    }

    /// `c · Π_t`.
    pub fn pi(ring: &R, r: usize, t: u32, c: R::Elem) -> Self {
        let mut p = Self::zero(ring, r);
        p.add_term(vec![(t, 1)], c);
        p
    }

    pub fn from_terms(ring: &R, r: usize, terms: impl IntoIterator<Item = (Monomial, R::Elem)>) -> Self {
        let mut p = Self::zero(ring, r);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    /// Number of underlying variables `X_1..X_r`.
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, R::Elem> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, mono: Monomial, c: R::Elem) {
        if self.ring.is_zero(&c) {
            return;
        }
        match self.terms.get_mut(&mono) {
            Some(existing) => {
                let sum = self.ring.add(existing, &c);
                if self.ring.is_zero(&sum) {
                    self.terms.remove(&mono);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(mono, c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        SymPoly {
            ring: self.ring.clone(),
            r: self.r,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), self.ring.neg(c)))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(&self.ring, self.r.max(other.r));
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(mono_mul(ma, mb), self.ring.mul(ca, cb));
            }
        }
        out
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        let mut out = Self::zero(&self.ring, self.r);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), self.ring.mul(v, c));
        }
        out
    }

    /// Weighted degree if every term has the same one; `None` for zero or
    /// inhomogeneous polynomials.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degrees = self.terms.keys().map(weighted_degree);
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    /// Largest `t` with `Π_t` present.
    pub fn max_index(&self) -> Option<u32> {
        self.terms
            .keys()
            .filter_map(|m| m.last().map(|&(t, _)| t))
            .max()
    }

    /// Degree in `Π_t`, `None` for the zero polynomial.
    pub fn degree_in(&self, t: u32) -> Option<u32> {
        self.terms
            .keys()
            .map(|m| m.iter().find(|&&(i, _)| i == t).map_or(0, |&(_, e)| e))
            .max()
    }

    /// Coefficient of `Π_t^e`, as a polynomial in the remaining `Π`.
    pub fn coefficient_of(&self, t: u32, e: u32) -> Self {
        let mut out = Self::zero(&self.ring, self.r);
        for (m, c) in &self.terms {
            let et = m.iter().find(|&&(i, _)| i == t).map_or(0, |&(_, e)| e);
            if et == e {
                let rest: Monomial = m.iter().copied().filter(|&(i, _)| i != t).collect();
                out.add_term(rest, c.clone());
            }
        }
        out
    }

    /// Constant value if the polynomial has no `Π` at all.
    pub fn as_constant(&self) -> Option<R::Elem> {
        match self.terms.len() {
            0 => Some(self.ring.zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    /// Formal partial derivative with respect to `Π_t`.
    pub fn partial(&self, t: u32) -> Result<Self> {
        if t == 0 || t as usize > self.r {
            return Err(Error::OutOfRange {
                what: "t",
                value: t as i64,
                range: format!("[1, {}]", self.r),
            });
        }
        let mut out = Self::zero(&self.ring, self.r);
        for (m, c) in &self.terms {
            if let Some(pos) = m.iter().position(|&(i, _)| i == t) {
                let e = m[pos].1;
                let mut mono = m.clone();
                if e == 1 {
                    mono.remove(pos);
                } else {
                    mono[pos].1 = e - 1;
                }
                out.add_term(mono, self.ring.mul(c, &self.ring.from_int(e as i64)));
            }
        }
        Ok(out)
    }

    /// Evaluates at given values of `Π_1, ..., Π_n` (`pis[t - 1] = Π_t`).
    pub fn eval_at_pis(&self, pis: &[R::Elem]) -> R::Elem {
        let ring = &self.ring;
        let mut acc = ring.zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for &(t, e) in m {
                let v = &pis[t as usize - 1];
                for _ in 0..e {
                    term = ring.mul(&term, v);
                }
            }
            acc = ring.add(&acc, &term);
        }
        acc
    }
}

impl SymPoly<Integers> {
    /// Image under the canonical map Z -> F_q.
    pub fn reduce(&self, field: &FieldCtx) -> SymPoly<FieldCtx> {
        let p = BigInt::from(field.p());
        let mut out = SymPoly::zero(field, self.r);
        for (m, c) in &self.terms {
            let v = c.mod_floor(&p).to_u32().expect("residue fits");
            out.add_term(m.clone(), v);
        }
        out
    }

    /// Whether the polynomial is a constant `±1`; returns the sign.
    pub fn unit_sign(&self) -> Option<i32> {
        let c = self.as_constant()?;
        if c.is_one() {
            Some(1)
        } else if (-&c).is_one() {
            Some(-1)
        } else {
            None
        }
    }
}

/// `(Π_1(x), ..., Π_upto(x))` by the incremental product recurrence.
pub fn elem_sym_raw(field: &FieldCtx, x: &[u32], upto: usize) -> Vec<u32> {
    // e[j] after processing a prefix holds Π_j of that prefix
    let mut e = vec![0u32; upto + 1];
    e[0] = 1;
    for (n, &xi) in x.iter().enumerate() {
        for j in (1..=upto.min(n + 1)).rev() {
            e[j] = field.add(e[j], field.mul(e[j - 1], xi));
        }
    }
    e.remove(0);
    e
}

impl SymPoly<FieldCtx> {
    /// Evaluates with `Π_t` replaced by the elementary symmetric values of `x`.
    pub fn sym_eval(&self, x: &[FieldElement]) -> Result<FieldElement> {
        if x.len() != self.r {
            return Err(Error::Dimension {
                expected: self.r,
                got: x.len(),
            });
        }
        let raw = x
            .iter()
            .map(|v| self.ring.check(v))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.ring.wrap(self.eval_raw(&raw)))
    }

    /// [`SymPoly::sym_eval`] on raw values; `x.len()` must equal `r`.
    pub fn eval_raw(&self, x: &[u32]) -> u32 {
        let pis = elem_sym_raw(&self.ring, x, self.r);
        self.eval_at_pis(&pis)
    }
}

/// Flattened [`SymPoly`] over a field for repeated evaluation.
#[derive(Debug, Clone)]
pub struct CompiledSym {
    // (coefficient, start, len) into `factors`
    terms: Vec<(u32, u32, u32)>,
    // (t, e): Π_t^e
    factors: Vec<(u16, u16)>,
    max_exp: usize,
}

impl CompiledSym {
    pub fn new(p: &SymPoly<FieldCtx>) -> Self {
        let mut terms = Vec::with_capacity(p.terms.len());
        let mut factors = Vec::new();
        let mut max_exp = 1;
        for (m, &c) in &p.terms {
            terms.push((c, factors.len() as u32, m.len() as u32));
            for &(t, e) in m {
                factors.push((t as u16, e as u16));
                max_exp = max_exp.max(e as usize);
            }
        }
        CompiledSym {
            terms,
            factors,
            max_exp,
        }
    }

    pub fn max_exp(&self) -> usize {
        self.max_exp
    }

    pub fn eval(&self, field: &FieldCtx, powers: &PowerTable) -> u32 {
        let mut acc = 0u32;
        for &(c, start, len) in &self.terms {
            let mut term = c;
            for &(t, e) in &self.factors[start as usize..(start + len) as usize] {
                term = field.mul(term, powers.get(t as usize, e as usize));
            }
            acc = field.add(acc, term);
        }
        acc
    }
}

/// `Π_t^e` for `1 <= t <= r`, `0 <= e <= max_exp`.
#[derive(Debug, Clone)]
pub struct PowerTable {
    stride: usize,
    values: Vec<u32>,
}

impl PowerTable {
    pub fn new(field: &FieldCtx, pis: &[u32], max_exp: usize) -> Self {
        let stride = max_exp + 1;
        let mut values = vec![0u32; pis.len() * stride];
        for (t, &v) in pis.iter().enumerate() {
            let row = &mut values[t * stride..(t + 1) * stride];
            row[0] = 1;
            for e in 1..stride {
                row[e] = field.mul(row[e - 1], v);
            }
        }
        PowerTable { stride, values }
    }

    #[inline]
    pub fn get(&self, t: usize, e: usize) -> u32 {
        self.values[(t - 1) * self.stride + e]
    }
}
