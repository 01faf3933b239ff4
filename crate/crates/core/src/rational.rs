//! Exact numbers shared by the exact and bounds modules.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

pub type Rational = BigRational;

pub fn binom(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

pub fn rat(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Rational {
    Rational::new(num.into(), den.into())
}

pub fn int(v: impl Into<BigInt>) -> Rational {
    Rational::from_integer(v.into())
}

/// `q^e` for a possibly negative exponent.
pub fn qpow(q: u64, e: i64) -> Rational {
    let p = BigInt::from(q).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        Rational::from_integer(p)
    } else {
        Rational::new(BigInt::one(), p)
    }
}

/// JSON form of an exact rational: decimal strings, so no precision is lost.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RationalJson {
    pub num: String,
    pub den: String,
}

impl From<&Rational> for RationalJson {
    fn from(r: &Rational) -> Self {
        RationalJson {
            num: r.numer().to_string(),
            den: r.denom().to_string(),
        }
    }
}

/// `"num/den"`, or just `"num"` for integers.
pub fn render(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binom(7, 3), BigUint::from(35u32));
        assert_eq!(binom(3, 7), BigUint::zero());
        assert_eq!(binom(1 << 20, 0), BigUint::one());
        let b: BigUint = binom(60, 30);
        assert_eq!(b.to_string(), "118264581564861424");
    }

    #[test]
    fn rendering() {
        assert_eq!(render(&rat(33, 7)), "33/7");
        assert_eq!(render(&rat(14, 7)), "2");
        assert_eq!(qpow(7, -2), rat(1, 49));
        assert_eq!(RationalJson::from(&rat(-4, 6)).num, "-2");
    }
}
