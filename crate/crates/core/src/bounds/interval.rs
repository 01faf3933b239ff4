use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::rational::{int, Rational};

/// Endpoints are rounded outward onto multiples of `2^-PRECISION`.
pub const PRECISION: u32 = 160;

/// Closed interval `[lo, hi]` with exact rational endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
}

fn scale() -> BigInt {
    BigInt::one() << PRECISION
}

fn round_down(x: &Rational) -> Rational {
    let s = scale();
    Rational::new((x * Rational::from(s.clone())).floor().to_integer(), s)
}

fn round_up(x: &Rational) -> Rational {
    let s = scale();
    Rational::new((x * Rational::from(s.clone())).ceil().to_integer(), s)
}

impl Interval {
    pub fn exact(x: Rational) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn from_int(v: i64) -> Self {
        Interval::exact(int(v))
    }

    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "empty interval");
        Interval { lo, hi }
    }

    fn rounded(lo: Rational, hi: Rational) -> Self {
        Interval::new(round_down(&lo), round_up(&hi))
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn midpoint_f64(&self) -> f64 {
        crate::rational::to_f64(&((&self.lo + &self.hi) / int(2)))
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval::rounded(&self.lo + &o.lo, &self.hi + &o.hi)
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        Interval::rounded(&self.lo - &o.hi, &self.hi - &o.lo)
    }

    pub fn neg(&self) -> Interval {
        Interval::new(-self.hi.clone(), -self.lo.clone())
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().expect("four products").clone();
        let hi = c.iter().max().expect("four products").clone();
        Interval::rounded(lo, hi)
    }

    /// Panics if `o` contains zero.
    pub fn div(&self, o: &Interval) -> Interval {
        assert!(o.lo.is_positive() || o.hi.is_negative(), "division by an interval containing 0");
        let inv = Interval::rounded(o.hi.recip(), o.lo.recip());
        self.mul(&inv)
    }

    pub fn scale(&self, c: &Rational) -> Interval {
        self.mul(&Interval::exact(c.clone()))
    }

    /// `|x|`.
    pub fn abs(&self) -> Interval {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            Interval::new(Rational::zero(), self.hi.clone().max(-self.lo.clone()))
        }
    }

    pub fn powi(&self, n: u32) -> Interval {
        (0..n).fold(Interval::from_int(1), |acc, _| acc.mul(self))
    }

    /// Certainly `self <= o` for every choice of points.
    pub fn certainly_le(&self, o: &Interval) -> bool {
        self.hi <= o.lo
    }

    pub fn certainly_lt(&self, o: &Interval) -> bool {
        self.hi < o.lo
    }

    pub fn exp(&self) -> Interval {
        Interval::new(exp_bounds(&self.lo).0, exp_bounds(&self.hi).1)
    }

    /// Panics on negative input.
    pub fn sqrt(&self) -> Interval {
        assert!(!self.lo.is_negative(), "sqrt of a negative interval");
        Interval::new(sqrt_bounds(&self.lo).0, sqrt_bounds(&self.hi).1)
    }

    pub fn pi() -> Interval {
        // 50 correct decimals, widened by one unit in the last place
        let digits: BigInt = "314159265358979323846264338327950288419716939937510"
            .parse()
            .expect("digits");
        let den = BigInt::from(10u32).pow(50);
        Interval::rounded(
            Rational::new(digits.clone(), den.clone()),
            Rational::new(digits + 1, den),
        )
    }

    pub fn e() -> Interval {
        Interval::from_int(1).exp()
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{:.12e}, {:.12e}]",
            crate::rational::to_f64(&self.lo),
            crate::rational::to_f64(&self.hi)
        )
    }
}

/// Lower and upper bounds of `e^x` on the dyadic grid.
fn exp_bounds(x: &Rational) -> (Rational, Rational) {
    // e^x = (e^{x / 2^k})^{2^k} with |x / 2^k| <= 1/2
    let half = Rational::new(1.into(), 2.into());
    let mut k = 0u32;
    let mut y = x.clone();
    while y.abs() > half {
        y /= int(2);
        k += 1;
    }
    let tol = Rational::new(1.into(), BigInt::one() << (PRECISION + 40));
    let mut term = int(1);
    let mut sum = int(1);
    let mut n = 1u32;
    // tail after term n-1 is at most 2|term_n| since |y| <= 1/2
    loop {
        term = term * &y / int(n);
        sum += &term;
        n += 1;
        let next = (&term * &y / int(n)).abs();
        if &next * int(2) < tol {
            let rem = next * int(2);
            let mut lo = round_down(&(&sum - &rem));
            let mut hi = round_up(&(&sum + &rem));
            for _ in 0..k {
                lo = round_down(&(&lo * &lo));
                hi = round_up(&(&hi * &hi));
            }
            return (lo, hi);
        }
    }
}

fn sqrt_bounds(x: &Rational) -> (Rational, Rational) {
    let s2: BigInt = BigInt::one() << (2 * PRECISION);
    let scaled = x * Rational::from(s2);
    let floor = scaled.floor().to_integer();
    let ceil = scaled.ceil().to_integer();
    let to_u = |v: BigInt| v.to_biguint().unwrap_or_else(BigUint::zero);
    let lo = to_u(floor).sqrt();
    let hi_floor = to_u(ceil.clone()).sqrt();
    let hi = if &hi_floor * &hi_floor == to_u(ceil) {
        hi_floor
    } else {
        hi_floor + 1u32
    };
    (
        Rational::new(lo.into(), scale()),
        Rational::new(hi.into(), scale()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn encloses_known_constants() {
        let e = Interval::e();
        assert!((e.midpoint_f64() - std::f64::consts::E).abs() < 1e-15);
        assert!(e.width() < rat(1, 1u64 << 60));
        let pi = Interval::pi();
        assert!((pi.midpoint_f64() - std::f64::consts::PI).abs() < 1e-15);
        let r2 = Interval::from_int(2).sqrt();
        assert!((r2.midpoint_f64() - std::f64::consts::SQRT_2).abs() < 1e-15);
        // exact squares stay tight
        let three = Interval::from_int(9).sqrt();
        assert!(three.contains(&int(3)) && three.width().is_zero());
    }

    #[test]
    fn exp_matches_float_across_range() {
        for v in [-20i64, -3, -1, 0, 1, 5, 12, 30] {
            let x = Interval::from_int(v).exp();
            let f = (v as f64).exp();
            assert!((x.midpoint_f64() - f).abs() <= 1e-12 * f, "e^{v}");
            assert!(x.width() < rat(1, 1u64 << 40) * int(1 + f as i64));
        }
        // e^a e^b = e^{a+b} as enclosures
        let a = Interval::exact(rat(7, 3));
        let b = Interval::exact(rat(-5, 4));
        let lhs = a.exp().mul(&b.exp());
        let rhs = a.add(&b).exp();
        assert!(lhs.lo() <= rhs.hi() && rhs.lo() <= lhs.hi());
    }

    #[test]
    fn arithmetic_is_outward() {
        let third = Interval::from_int(1).div(&Interval::from_int(3));
        assert!(third.contains(&rat(1, 3)));
        let back = third.mul(&Interval::from_int(3));
        assert!(back.contains(&int(1)));
        assert!(Interval::new(int(-2), int(1)).abs() == Interval::new(int(0), int(2)));
    }
}
