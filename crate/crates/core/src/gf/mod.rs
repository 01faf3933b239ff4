//! Arithmetic in finite fields F_q, q = p^k <= 2^20.
//!
//! Elements are canonical integers in `[0, q)`. For `k > 1` the integer is the
//! base-p digit encoding of the residue polynomial modulo the field's
//! irreducible modulus (digit `i` is the coefficient of `x^i`).
//!
//! [`FieldCtx`] is an immutable, cheaply clonable handle. The hot-path
//! operations (`add`, `mul`, ...) take and return raw `u32` values and do no
//! validation; [`FieldElement`] together with [`FieldCtx::arith`] is the
//! checked surface that rejects foreign elements and zero divisors.

mod irreducible;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

pub use irreducible::{builtin_modulus, is_irreducible, BUILTIN_MODULI};

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 20;
/// Fields up to this order get discrete log / antilog tables.
pub const LOG_TABLE_LIMIT: u32 = 1 << 16;
const ADD_TABLE_LIMIT: u32 = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// A field element tagged with the fingerprint of the field it belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u32,
    tag: u64,
}

impl FieldElement {
    pub fn value(&self) -> u32 {
        self.value
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

struct LogTables {
    generator: u32,
    // log[0] is unused
    log: Vec<u32>,
    // exp has length 2(q-1) so that log a + log b never needs reducing
    exp: Vec<u32>,
}

struct Inner {
    p: u32,
    k: u32,
    q: u32,
    tag: u64,
    modulus: Option<Vec<u32>>,
    digit_weights: Vec<u32>,
    logs: Option<LogTables>,
    add_table: Option<Vec<u16>>,
}

/// A concrete finite field with its arithmetic tables.
#[derive(Clone)]
pub struct FieldCtx {
    inner: Arc<Inner>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p())
            .field("k", &self.k())
            .field("modulus", &self.inner.modulus)
            .finish()
    }
}

impl fmt::Display for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.spec_string())
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.inner.tag == other.inner.tag
    }
}

impl Eq for FieldCtx {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn fingerprint(p: u32, k: u32, modulus: Option<&[u32]>) -> u64 {
    // FNV-1a over (p, k, modulus)
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut feed = |v: u32| {
        for b in v.to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    };
    feed(p);
    feed(k);
    for &c in modulus.unwrap_or(&[]) {
        feed(c);
    }
    h
}

impl FieldCtx {
    /// Constructs F_{p^k}. For `k > 1` the modulus is taken from `modulus`
    /// (ascending coefficients, length `k + 1`) or from the built-in table.
    pub fn new(p: u64, k: u32, modulus: Option<&[u32]>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::UnsupportedField("extension degree must be >= 1".into()));
        }
        let q = (p as u128).checked_pow(k).unwrap_or(u128::MAX);
        if q > MAX_ORDER as u128 {
            return Err(Error::UnsupportedField(format!(
                "{p}^{k} exceeds the maximum order 2^20"
            )));
        }
        let p = p as u32;
        let q = q as u32;
        let modulus = if k == 1 {
            if let Some(m) = modulus {
                if m.len() != 2 || m[1] % p == 0 {
                    return Err(Error::FieldSpec(format!(
                        "modulus {m:?} does not have degree 1"
                    )));
                }
            }
            None
        } else {
            let m = match modulus {
                Some(m) => m.to_vec(),
                None => builtin_modulus(p, k).ok_or_else(|| {
                    Error::UnsupportedField(format!(
                        "no built-in modulus for {p}^{k}; supply one explicitly"
                    ))
                })?,
            };
            if m.len() != k as usize + 1 {
                return Err(Error::FieldSpec(format!(
                    "modulus {m:?} must have {} coefficients",
                    k + 1
                )));
            }
            if m.iter().any(|&c| c >= p) {
                return Err(Error::FieldSpec(format!(
                    "modulus {m:?} has coefficients outside [0, {p})"
                )));
            }
            if m[k as usize] == 0 {
                return Err(Error::FieldSpec(format!("modulus {m:?} has zero leading coefficient")));
            }
            // normalize to monic; irreducibility is unaffected
            let lead_inv = irreducible::pow_mod(m[k as usize], p - 2, p) as u64;
            let m: Vec<u32> = m
                .iter()
                .map(|&c| (c as u64 * lead_inv % p as u64) as u32)
                .collect();
            if !is_irreducible(&m, p) {
                return Err(Error::ReducibleModulus { p, modulus: m });
            }
            Some(m)
        };

        let mut digit_weights = Vec::with_capacity(k as usize);
        let mut w = 1u32;
        for _ in 0..k {
            digit_weights.push(w);
            w = w.wrapping_mul(p);
        }
        let tag = fingerprint(p, k, modulus.as_deref());
        let mut inner = Inner {
            p,
            k,
            q,
            tag,
            modulus,
            digit_weights,
            logs: None,
            add_table: None,
        };
        if k > 1 && p != 2 && q <= ADD_TABLE_LIMIT {
            let mut table = vec![0u16; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    table[(a * q + b) as usize] = inner.digit_add(a, b) as u16;
                }
            }
            inner.add_table = Some(table);
        }
        if q <= LOG_TABLE_LIMIT {
            inner.logs = Some(inner.build_logs());
        }
        Ok(FieldCtx {
            inner: Arc::new(inner),
        })
    }

    pub fn prime(p: u64) -> Result<Self> {
        Self::new(p, 1, None)
    }

    /// Parses `"q"`, `"p^k"` or `"p^k:c0,c1,...,ck"`.
    ///
    /// A bare prime power `q = p^k` with `k > 1` is accepted and uses the
    /// built-in modulus.
    pub fn parse(spec: &str) -> Result<Self> {
        let bad = || Error::FieldSpec(spec.to_string());
        let spec_trim = spec.trim();
        let (head, modulus) = match spec_trim.split_once(':') {
            Some((h, m)) => {
                let coeffs = m
                    .split(',')
                    .map(|c| c.trim().parse::<u32>().map_err(|_| bad()))
                    .collect::<Result<Vec<_>>>()?;
                (h, Some(coeffs))
            }
            None => (spec_trim, None),
        };
        let (p, k) = match head.split_once('^') {
            Some((p, k)) => (
                p.trim().parse::<u64>().map_err(|_| bad())?,
                k.trim().parse::<u32>().map_err(|_| bad())?,
            ),
            None => {
                let q = head.parse::<u64>().map_err(|_| bad())?;
                if modulus.is_some() {
                    return Err(bad());
                }
                match perfect_prime_power(q) {
                    Some((p, k)) => (p, k),
                    None => return Err(Error::NotPrime(q)),
                }
            }
        };
        Self::new(p, k, modulus.as_deref())
    }

    pub fn p(&self) -> u32 {
        self.inner.p
    }

    pub fn k(&self) -> u32 {
        self.inner.k
    }

    pub fn q(&self) -> u32 {
        self.inner.q
    }

    /// Monic modulus (ascending), absent for prime fields.
    pub fn modulus(&self) -> Option<&[u32]> {
        self.inner.modulus.as_deref()
    }

    pub fn generator(&self) -> Option<u32> {
        self.inner.logs.as_ref().map(|l| l.generator)
    }

    /// Row-major `q x q` addition table, present for odd-characteristic
    /// extension fields with `q <= 1024`.
    pub(crate) fn add_table(&self) -> Option<&[u16]> {
        self.inner.add_table.as_deref()
    }

    pub fn has_log_tables(&self) -> bool {
        self.inner.logs.is_some()
    }

    /// Canonical textual form accepted by [`FieldCtx::parse`].
    pub fn spec_string(&self) -> String {
        match &self.inner.modulus {
            None => self.q().to_string(),
            Some(m) => {
                let cs: Vec<String> = m.iter().map(|c| c.to_string()).collect();
                format!("{}^{}:{}", self.p(), self.k(), cs.join(","))
            }
        }
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let inner = &*self.inner;
        if inner.k == 1 {
            let s = a + b;
            if s >= inner.q {
                s - inner.q
            } else {
                s
            }
        } else if inner.p == 2 {
            a ^ b
        } else if let Some(t) = &inner.add_table {
            t[(a * inner.q + b) as usize] as u32
        } else {
            inner.digit_add(a, b)
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        let inner = &*self.inner;
        if inner.k == 1 {
            if a == 0 {
                0
            } else {
                inner.q - a
            }
        } else if inner.p == 2 {
            a
        } else {
            inner.digit_neg(a)
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        let inner = &*self.inner;
        if let Some(l) = &inner.logs {
            if a == 0 || b == 0 {
                0
            } else {
                l.exp[(l.log[a as usize] + l.log[b as usize]) as usize]
            }
        } else if inner.k == 1 {
            (a as u64 * b as u64 % inner.p as u64) as u32
        } else {
            inner.poly_mul(a, b)
        }
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let inner = &*self.inner;
        Some(match &inner.logs {
            Some(l) => {
                let la = l.log[a as usize];
                l.exp[((inner.q - 1 - la) % (inner.q - 1)) as usize]
            }
            None => self.pow(a, inner.q as u64 - 2),
        })
    }

    pub fn div(&self, a: u32, b: u32) -> Option<u32> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: u32, mut n: u64) -> u32 {
        let mut acc = 1u32;
        let mut base = a;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, v: i64) -> u32 {
        v.rem_euclid(self.p() as i64) as u32
    }

    /// `a * n` where `n` is an integer (i.e. `a` added to itself `n` times).
    pub fn mul_int(&self, a: u32, n: u64) -> u32 {
        let c = (n % self.p() as u64) as u32;
        self.mul(a, c)
    }

    pub fn elements(&self) -> std::ops::Range<u32> {
        0..self.q()
    }

    pub fn element(&self, v: u64) -> Result<FieldElement> {
        if v >= self.q() as u64 {
            return Err(Error::NotAnElement { value: v, q: self.q() });
        }
        Ok(FieldElement {
            value: v as u32,
            tag: self.inner.tag,
        })
    }

    pub(crate) fn wrap(&self, v: u32) -> FieldElement {
        debug_assert!(v < self.q());
        FieldElement {
            value: v,
            tag: self.inner.tag,
        }
    }

    pub(crate) fn check(&self, a: &FieldElement) -> Result<u32> {
        if a.tag != self.inner.tag {
            return Err(Error::ContextMismatch);
        }
        Ok(a.value)
    }

    pub fn arith(&self, a: FieldElement, b: FieldElement, op: ArithOp) -> Result<FieldElement> {
        let (x, y) = (self.check(&a)?, self.check(&b)?);
        let v = match op {
            ArithOp::Add => self.add(x, y),
            ArithOp::Sub => self.sub(x, y),
            ArithOp::Mul => self.mul(x, y),
            ArithOp::Div => self.div(x, y).ok_or(Error::DivisionByZero)?,
        };
        Ok(self.wrap(v))
    }

    pub fn inv_elem(&self, a: FieldElement) -> Result<FieldElement> {
        let x = self.check(&a)?;
        self.inv(x).map(|v| self.wrap(v)).ok_or(Error::DivisionByZero)
    }

    pub fn pow_elem(&self, a: FieldElement, n: u64) -> Result<FieldElement> {
        let x = self.check(&a)?;
        Ok(self.wrap(self.pow(x, n)))
    }
}

impl FromStr for FieldCtx {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FieldCtx::parse(s)
    }
}

fn perfect_prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = prime_factors(q);
    if p.len() != 1 {
        return None;
    }
    let p = p[0];
    let mut k = 0;
    let mut n = q;
    while n > 1 {
        n /= p;
        k += 1;
    }
    Some((p, k))
}

impl Inner {
    fn digits(&self, mut a: u32) -> impl Iterator<Item = u32> + '_ {
        (0..self.k).map(move |_| {
            let d = a % self.p;
            a /= self.p;
            d
        })
    }

    fn from_digits(&self, digits: impl Iterator<Item = u32>) -> u32 {
        digits
            .zip(&self.digit_weights)
            .map(|(d, w)| d * w)
            .sum()
    }

    fn digit_add(&self, a: u32, b: u32) -> u32 {
        let p = self.p;
        self.from_digits(self.digits(a).zip(self.digits(b)).map(|(x, y)| (x + y) % p))
    }

    fn digit_neg(&self, a: u32) -> u32 {
        let p = self.p;
        self.from_digits(self.digits(a).map(|x| (p - x) % p))
    }

    /// Multiplication by schoolbook product of residue polynomials.
    fn poly_mul(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        let k = self.k as usize;
        if k == 1 {
            return (a as u64 * b as u64 % p) as u32;
        }
        let m = self.modulus.as_ref().expect("extension field has a modulus");
        let da: Vec<u64> = self.digits(a).map(u64::from).collect();
        let db: Vec<u64> = self.digits(b).map(u64::from).collect();
        let mut prod = vec![0u64; 2 * k - 1];
        for i in 0..k {
            if da[i] == 0 {
                continue;
            }
            for j in 0..k {
                prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
            }
        }
        for top in (k..2 * k - 1).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            // monic modulus: x^k = -(m_0 + ... + m_{k-1} x^{k-1})
            for i in 0..k {
                prod[top - k + i] = (prod[top - k + i] + (p - c) * m[i] as u64) % p;
            }
            prod[top] = 0;
        }
        self.from_digits(prod.into_iter().take(k).map(|v| v as u32))
    }

    fn slow_pow(&self, a: u32, mut n: u64) -> u32 {
        let mut acc = 1u32;
        let mut base = a;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.poly_mul(acc, base);
            }
            base = self.poly_mul(base, base);
            n >>= 1;
        }
        acc
    }

    fn build_logs(&self) -> LogTables {
        let q = self.q;
        let order = (q - 1) as u64;
        let factors = prime_factors(order);
        let generator = (1..q)
            .find(|&g| factors.iter().all(|&l| self.slow_pow(g, order / l) != 1))
            .expect("multiplicative group of a finite field is cyclic");
        let n = (q - 1) as usize;
        let mut exp = vec![0u32; 2 * n.max(1)];
        let mut log = vec![u32::MAX; q as usize];
        let mut x = 1u32;
        for i in 0..n {
            exp[i] = x;
            exp[i + n] = x;
            log[x as usize] = i as u32;
            x = self.poly_mul(x, generator);
        }
        if n == 0 {
            exp[0] = 1;
        }
        LogTables {
            generator,
            log,
            exp,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_examples() {
        let f7 = FieldCtx::new(7, 1, None).unwrap();
        assert_eq!(f7.q(), 7);
        assert_eq!(f7.elements().collect::<Vec<_>>(), (0..7).collect::<Vec<_>>());
        assert_eq!(f7.mul(3, 5), 1);
        assert_eq!(f7.inv(2), Some(4));
        assert_eq!(f7.inv(0), None);
        assert_eq!(f7.sub(2, 5), 4);
    }

    #[test]
    fn rejects_composite_characteristic() {
        assert_eq!(FieldCtx::new(4, 1, None).unwrap_err(), Error::NotPrime(4));
        assert!(matches!(
            FieldCtx::new(3, 2, Some(&[2, 0, 1])),
            Err(Error::ReducibleModulus { .. })
        ));
        assert!(matches!(
            FieldCtx::new(2, 21, None),
            Err(Error::UnsupportedField(_))
        ));
        assert!(matches!(
            FieldCtx::new(2, 13, None),
            Err(Error::UnsupportedField(_))
        ));
    }

    #[test]
    fn f9_with_x2_plus_1() {
        let f9 = FieldCtx::new(3, 2, Some(&[1, 0, 1])).unwrap();
        // x is encoded as digit vector (0, 1) = 3
        let x = 3;
        assert_eq!(f9.mul(x, x), 2);
        // 2x = 6, and x * 2x = 2x^2 = -2 = 1
        assert_eq!(f9.inv(x), Some(6));
        assert_eq!(f9.mul(x, 6), 1);
    }

    #[test]
    fn checked_surface() {
        let f7 = FieldCtx::prime(7).unwrap();
        let f5 = FieldCtx::prime(5).unwrap();
        let a = f7.element(3).unwrap();
        let b = f7.element(5).unwrap();
        assert_eq!(f7.arith(a, b, ArithOp::Mul).unwrap().value(), 1);
        let z = f7.element(0).unwrap();
        assert_eq!(f7.arith(a, z, ArithOp::Div), Err(Error::DivisionByZero));
        assert_eq!(f7.inv_elem(z), Err(Error::DivisionByZero));
        let c = f5.element(1).unwrap();
        assert_eq!(f7.arith(a, c, ArithOp::Add), Err(Error::ContextMismatch));
        assert!(f7.element(7).is_err());
        assert_eq!(f7.pow_elem(a, 6).unwrap().value(), 1);
        // identical construction yields a compatible context
        let f7b = FieldCtx::prime(7).unwrap();
        assert_eq!(f7b.arith(a, b, ArithOp::Add).unwrap().value(), 1);
    }

    #[test]
    fn parse_specs() {
        let f = FieldCtx::parse("3^2:1,0,1").unwrap();
        assert_eq!((f.p(), f.k(), f.q()), (3, 2, 9));
        assert_eq!(f.spec_string(), "3^2:1,0,1");
        let g = FieldCtx::parse("8").unwrap();
        assert_eq!((g.p(), g.k()), (2, 3));
        let h: FieldCtx = "101".parse().unwrap();
        assert_eq!(h.q(), 101);
        assert!(FieldCtx::parse("6").is_err());
        assert!(FieldCtx::parse("3^2:1,x").is_err());
        assert!(FieldCtx::parse("abc").is_err());
        let big = FieldCtx::parse("2^17:1,0,0,1,0,0,0,0,0,0,0,0,0,0,0,0,0,1").unwrap();
        assert_eq!(big.q(), 1 << 17);
        assert!(!big.has_log_tables());
    }

    fn check_axioms(f: &FieldCtx) {
        let q = f.q();
        for a in 0..q {
            assert_eq!(f.add(a, 0), a);
            assert_eq!(f.mul(a, 1), a);
            assert_eq!(f.add(a, f.neg(a)), 0);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
            assert_eq!(f.pow(a, q as u64), a, "Frobenius fails at {a} in {f}");
            for b in 0..q {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for c in 0..q {
                    assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for spec in ["2", "3", "5", "7", "4", "8", "9", "16", "25", "27", "49", "64"] {
            check_axioms(&FieldCtx::parse(spec).unwrap());
        }
    }

    #[test]
    fn log_tables_match_schoolbook_multiplication() {
        for spec in ["16", "27", "125", "3^4", "7^3"] {
            let f = FieldCtx::parse(spec).unwrap();
            for a in 0..f.q() {
                for b in (0..f.q()).step_by(7) {
                    assert_eq!(f.mul(a, b), f.inner.poly_mul(a, b), "{spec}: {a}*{b}");
                }
            }
        }
    }

    #[test]
    fn multiplicative_group_is_cyclic() {
        for spec in ["7", "9", "16", "27", "101", "3^4"] {
            let f = FieldCtx::parse(spec).unwrap();
            let g = f.generator().unwrap();
            let mut seen = std::collections::HashSet::new();
            let mut x = 1;
            for _ in 0..f.q() - 1 {
                seen.insert(x);
                x = f.mul(x, g);
            }
            assert_eq!(seen.len() as u32, f.q() - 1);
        }
    }

    #[test]
    fn frobenius_exhaustive_up_to_4096() {
        for spec in ["4096", "3^4", "2^4", "5^4", "7^4", "13^3", "61^2", "4093"] {
            let f = FieldCtx::parse(spec).unwrap();
            assert!(f.q() <= 4096);
            for a in f.elements() {
                assert_eq!(f.pow(a, f.q() as u64), a);
            }
        }
    }

    #[test]
    fn large_fields_without_tables() {
        let f = FieldCtx::prime(1_048_573).unwrap();
        assert!(!f.has_log_tables());
        let a = 123_456;
        assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        let g = FieldCtx::parse("2^17:1,0,0,1,0,0,0,0,0,0,0,0,0,0,0,0,0,1").unwrap();
        for a in [1u32, 2, 5, 1000, 100_000] {
            assert_eq!(g.mul(a, g.inv(a).unwrap()), 1);
            assert_eq!(g.pow(a, g.q() as u64), a);
        }
    }
}
