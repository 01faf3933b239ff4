//! Dense univariate polynomials over a [`FieldCtx`].

use std::fmt;

use crate::error::{Error, Result};
use crate::gf::{FieldCtx, FieldElement};

/// Polynomial with coefficients in ascending degree order, trailing zeros
/// trimmed.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<u32>,
    field: FieldCtx,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{}]({})", self.field, self)
    }
}

/// Renders the CLI text format: ascending coefficients separated by commas.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl Poly {
    pub fn new(field: &FieldCtx, coeffs: Vec<u32>) -> Result<Self> {
        if let Some(&bad) = coeffs.iter().find(|&&c| c >= field.q()) {
            return Err(Error::NotAnElement {
                value: bad as u64,
                q: field.q(),
            });
        }
        Ok(Self::from_raw(field, coeffs))
    }

    pub(crate) fn from_raw(field: &FieldCtx, mut coeffs: Vec<u32>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly {
            coeffs,
            field: field.clone(),
        }
    }

    pub fn from_elements(field: &FieldCtx, coeffs: &[FieldElement]) -> Result<Self> {
        let raw = coeffs
            .iter()
            .map(|c| field.check(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_raw(field, raw))
    }

    pub fn zero(field: &FieldCtx) -> Self {
        Self::from_raw(field, Vec::new())
    }

    /// `c * T^deg`.
    pub fn monomial(field: &FieldCtx, c: u32, deg: usize) -> Self {
        let mut coeffs = vec![0; deg + 1];
        coeffs[deg] = c;
        Self::from_raw(field, coeffs)
    }

    /// The monic polynomial `(T - x_1)...(T - x_r)`.
    pub fn from_roots(field: &FieldCtx, roots: &[u32]) -> Self {
        let mut coeffs = vec![1u32];
        for &x in roots {
            let nx = field.neg(x);
            let mut next = vec![0u32; coeffs.len() + 1];
            for (i, &c) in coeffs.iter().enumerate() {
                next[i + 1] = field.add(next[i + 1], c);
                next[i] = field.add(next[i], field.mul(c, nx));
            }
            coeffs = next;
        }
        Self::from_raw(field, coeffs)
    }

    /// Parses ascending comma-separated coefficients, e.g. `"0,1,0,1"` for T^3 + T.
    pub fn parse(field: &FieldCtx, text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Err(Error::PolySyntax(text.to_string()));
        }
        let coeffs = text
            .split(',')
            .map(|c| {
                c.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::PolySyntax(text.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(field, coeffs)
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, c: u32) -> u32 {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &a| f.add(f.mul(acc, c), a))
    }

    pub fn eval_elem(&self, c: FieldElement) -> Result<FieldElement> {
        let v = self.field.check(&c)?;
        Ok(self.field.wrap(self.eval(v)))
    }

    fn same_field(&self, other: &Poly) -> Result<()> {
        if self.field != other.field {
            return Err(Error::ContextMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Poly) -> Result<Poly> {
        self.same_field(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| self.field.add(self.coeff(i), other.coeff(i)))
            .collect();
        Ok(Self::from_raw(&self.field, coeffs))
    }

    pub fn sub(&self, other: &Poly) -> Result<Poly> {
        self.same_field(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| self.field.sub(self.coeff(i), other.coeff(i)))
            .collect();
        Ok(Self::from_raw(&self.field, coeffs))
    }

    pub fn mul(&self, other: &Poly) -> Result<Poly> {
        self.same_field(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.field));
        }
        let f = &self.field;
        let mut coeffs = vec![0u32; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = f.add(coeffs[i + j], f.mul(a, b));
            }
        }
        Ok(Self::from_raw(f, coeffs))
    }

    /// Euclidean division: `self = quot * g + rem` with `deg rem < deg g`.
    pub fn divrem(&self, g: &Poly) -> Result<(Poly, Poly)> {
        self.same_field(g)?;
        let dg = g.degree().ok_or(Error::ZeroPolynomial)?;
        let f = &self.field;
        let lead_inv = f.inv(g.coeffs[dg]).expect("leading coefficient is nonzero");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dg {
            return Ok((Self::zero(f), self.clone()));
        }
        let mut quot = vec![0u32; rem.len() - dg];
        for top in (dg..rem.len()).rev() {
            let c = f.mul(rem[top], lead_inv);
            if c == 0 {
                continue;
            }
            let shift = top - dg;
            quot[shift] = c;
            for (i, &gi) in g.coeffs.iter().enumerate() {
                rem[shift + i] = f.sub(rem[shift + i], f.mul(c, gi));
            }
        }
        rem.truncate(dg);
        Ok((Self::from_raw(f, quot), Self::from_raw(f, rem)))
    }

    /// Coefficients of `self` in the Newton basis of `roots`:
    /// `self = c_0 + c_1 (T-x_1) + ... + c_{r-1} (T-x_1)...(T-x_{r-1}) + Q * quot`,
    /// computed by `r` successive synthetic divisions.
    pub fn newton_divide(&self, roots: &[u32]) -> (Vec<u32>, Poly) {
        let f = &self.field;
        let mut cur = self.coeffs.clone();
        let mut newton = Vec::with_capacity(roots.len());
        for &x in roots {
            let (c, next) = synthetic_division(f, &cur, x);
            newton.push(c);
            cur = next;
        }
        (newton, Self::from_raw(f, cur))
    }

    /// Remainder of `self` modulo `(T - x_1)...(T - x_r)` without forming the
    /// product.
    pub fn rem_by_roots(&self, roots: &[u32]) -> Poly {
        let f = &self.field;
        let (newton, _) = self.newton_divide(roots);
        // Horner in the Newton basis: c_0 + (T-x_1)(c_1 + (T-x_2)(c_2 + ...))
        let mut acc: Vec<u32> = Vec::new();
        for (i, &c) in newton.iter().enumerate().rev() {
            // acc <- acc * (T - x_{i+1}) + c_i, where x_{i+1} = roots[i]
            let mut next = vec![0u32; acc.len() + 1];
            if !acc.is_empty() {
                let nx = f.neg(roots[i]);
                for (k, &a) in acc.iter().enumerate() {
                    next[k + 1] = f.add(next[k + 1], a);
                    next[k] = f.add(next[k], f.mul(a, nx));
                }
            }
            next[0] = f.add(next[0], c);
            acc = next;
        }
        Self::from_raw(f, acc)
    }

    /// Size of the image of `self` on F_q.
    pub fn value_set(&self) -> u32 {
        let mut scratch = ValueSetScratch::new(self.field.q());
        scratch.count(self.field.elements().map(|c| self.eval(c)))
    }

    /// Number of roots in F_q.
    pub fn root_count(&self) -> Result<u32> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(self.field.elements().filter(|&c| self.eval(c) == 0).count() as u32)
    }
}

/// Divides `coeffs` by `(T - x)`; returns `(remainder, quotient)`.
pub(crate) fn synthetic_division(f: &FieldCtx, coeffs: &[u32], x: u32) -> (u32, Vec<u32>) {
    if coeffs.is_empty() {
        return (0, Vec::new());
    }
    let n = coeffs.len();
    let mut quot = vec![0u32; n - 1];
    let mut acc = 0u32;
    for i in (0..n).rev() {
        acc = f.add(f.mul(acc, x), coeffs[i]);
        if i > 0 {
            quot[i - 1] = acc;
        }
    }
    (acc, quot)
}

/// Presence bitmap over F_q with versioned stamps, so that resetting between
/// polynomials is O(1).
#[derive(Debug, Clone)]
pub struct ValueSetScratch {
    stamps: Vec<u32>,
    epoch: u32,
}

impl ValueSetScratch {
    pub fn new(q: u32) -> Self {
        ValueSetScratch {
            stamps: vec![0; q as usize],
            epoch: 0,
        }
    }

    fn next_epoch(&mut self) -> u32 {
        if self.epoch == u32::MAX {
            self.stamps.iter_mut().for_each(|s| *s = 0);
            self.epoch = 0;
        }
        self.epoch += 1;
        self.epoch
    }

    /// Number of distinct values yielded.
    pub fn count(&mut self, values: impl IntoIterator<Item = u32>) -> u32 {
        let epoch = self.next_epoch();
        let mut distinct = 0;
        for v in values {
            let slot = &mut self.stamps[v as usize];
            if *slot != epoch {
                *slot = epoch;
                distinct += 1;
            }
        }
        distinct
    }

    pub fn count_slice(&mut self, values: &[u32]) -> u32 {
        self.count(values.iter().copied())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f7() -> FieldCtx {
        FieldCtx::prime(7).unwrap()
    }

    #[test]
    fn eval_examples() {
        let f = f7();
        assert_eq!(Poly::parse(&f, "0,1").unwrap().eval(5), 5);
        assert_eq!(Poly::parse(&f, "0,1,0,1").unwrap().eval(2), 3);
        assert_eq!(Poly::zero(&f).eval(4), 0);
        let c = f.element(2).unwrap();
        assert_eq!(Poly::parse(&f, "0,1,0,1").unwrap().eval_elem(c).unwrap().value(), 3);
        let other = FieldCtx::prime(5).unwrap().element(2).unwrap();
        assert_eq!(Poly::zero(&f).eval_elem(other), Err(Error::ContextMismatch));
    }

    #[test]
    fn divrem_examples() {
        let f = f7();
        let t3 = Poly::monomial(&f, 1, 3);
        let g = Poly::from_roots(&f, &[1, 2]);
        let (_, r) = t3.divrem(&g).unwrap();
        assert_eq!(r.coeffs(), &[1]);
        let (_, r) = g.divrem(&g).unwrap();
        assert!(r.is_zero());
        let g3 = Poly::from_roots(&f, &[1, 2, 3]);
        let (_, r) = t3.divrem(&g3).unwrap();
        assert_eq!(r.coeffs(), &[6, 3, 6]);
        assert_eq!(t3.divrem(&Poly::zero(&f)), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn value_set_examples() {
        let f = f7();
        assert_eq!(Poly::parse(&f, "0,1").unwrap().value_set(), 7);
        assert_eq!(Poly::monomial(&f, 1, 3).value_set(), 3);
        let f5 = FieldCtx::prime(5).unwrap();
        assert_eq!(Poly::monomial(&f5, 1, 2).value_set(), 3);
    }

    #[test]
    fn root_count_examples() {
        let f = f7();
        assert_eq!(Poly::parse(&f, "6,0,1").unwrap().root_count().unwrap(), 2);
        assert_eq!(Poly::parse(&f, "1,0,1").unwrap().root_count().unwrap(), 0);
        assert_eq!(Poly::parse(&f, "0,1").unwrap().root_count().unwrap(), 1);
        assert_eq!(Poly::zero(&f).root_count(), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn parse_and_display() {
        let f = f7();
        let p = Poly::parse(&f, "0, 1,0,1,0").unwrap();
        assert_eq!(p.to_string(), "0,1,0,1");
        assert_eq!(p.degree(), Some(3));
        assert!(Poly::parse(&f, "1,9").is_err());
        assert!(Poly::parse(&f, "1,,2").is_err());
        assert!(Poly::parse(&f, "").is_err());
        assert_eq!(Poly::zero(&f).to_string(), "0");
    }

    #[test]
    fn rem_by_roots_matches_divrem() {
        let f = FieldCtx::parse("3^2:1,0,1").unwrap();
        let p = Poly::parse(&f, "4,0,7,1,2,8,1").unwrap();
        for roots in [vec![1u32, 2], vec![0, 3, 5], vec![2, 4, 6, 8], vec![1, 2, 3, 4, 5, 6, 7]] {
            let (_, expected) = p.divrem(&Poly::from_roots(&f, &roots)).unwrap();
            assert_eq!(p.rem_by_roots(&roots), expected, "{roots:?}");
        }
    }

    #[test]
    fn scratch_reuse() {
        let mut s = ValueSetScratch::new(5);
        assert_eq!(s.count_slice(&[0, 1, 1, 4]), 3);
        assert_eq!(s.count_slice(&[2, 2]), 1);
        assert_eq!(s.count_slice(&[]), 0);
    }
}
