//! Exact rational scalars.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms with a positive denominator.
pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Scalar {
    Scalar::new(BigInt::from(p), BigInt::from(q))
}

/// Formats as `p/q`, or `p` when the denominator is one.
pub fn format(x: &Scalar) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse(s: &str) -> Result<Scalar> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Scalar::new(p, q))
        }
        None => Ok(Scalar::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Lossy conversion; handles numerators and denominators far outside the `f64` range.
pub fn to_f64(x: &Scalar) -> f64 {
    if let (Some(p), Some(q)) = (x.numer().to_f64(), x.denom().to_f64()) {
        if p.is_finite() && q.is_finite() && q != 0.0 {
            return p / q;
        }
    }
    let sign = if x.is_negative() { -1.0 } else { 1.0 };
    (sign * (log_abs(x.numer()) - log_abs(x.denom())).exp()).max(f64::MIN)
}

/// Natural log of |n| for big integers.
pub fn log_abs(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits < 1000 {
        return n.abs().to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 900;
    let top: BigInt = n.abs() >> shift;
    top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// Exact square root when both numerator and denominator are perfect squares.
pub fn exact_sqrt(x: &Scalar) -> Option<Scalar> {
    if x.is_negative() {
        return None;
    }
    let p = x.numer().sqrt();
    let q = x.denom().sqrt();
    if &(&p * &p) == x.numer() && &(&q * &q) == x.denom() {
        Some(Scalar::new(p, q))
    } else {
        None
    }
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

pub fn pow(base: &Scalar, exp: u32) -> Scalar {
    num_traits::pow(base.clone(), exp as usize)
}

/// `coeff·√radicand` with a square-free integer radicand, or a plain rational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExactValue {
    Rational(Scalar),
    Surd { coeff: Scalar, radicand: BigInt },
}

impl ExactValue {
    /// `coeff·√radicand` in lowest terms; `radicand` must be positive.
    pub fn with_sqrt(coeff: Scalar, radicand: &Scalar) -> Self {
        assert!(radicand.is_positive(), "radicand must be positive");
        if coeff.is_zero() {
            return ExactValue::Rational(coeff);
        }
        // √(a/b) = √(ab)/b
        let mut rad = radicand.numer() * radicand.denom();
        let mut out = Scalar::new(BigInt::one(), radicand.denom().clone());
        rad = pull_squares(rad, &mut out);
        let coeff = coeff * out;
        if rad.is_one() {
            ExactValue::Rational(coeff)
        } else {
            ExactValue::Surd { coeff, radicand: rad }
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExactValue::Rational(x) => to_f64(x),
            ExactValue::Surd { coeff, radicand } => {
                if coeff.is_zero() {
                    return 0.0;
                }
                let sign = if coeff.is_negative() { -1.0 } else { 1.0 };
                sign * (log_abs(coeff.numer()) - log_abs(coeff.denom()) + 0.5 * log_abs(radicand)).exp()
            }
        }
    }

    pub fn as_rational(&self) -> Option<&Scalar> {
        match self {
            ExactValue::Rational(x) => Some(x),
            ExactValue::Surd { .. } => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExactValue::Rational(x) if x.is_zero())
    }
}

impl fmt::Display for ExactValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactValue::Rational(x) => f.write_str(&format(x)),
            ExactValue::Surd { coeff, radicand } => write!(f, "{}*sqrt({radicand})", format(coeff)),
        }
    }
}

impl Serialize for ExactValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Moves square factors of `rad` found by trial division into `out`.
fn pull_squares(mut rad: BigInt, out: &mut Scalar) -> BigInt {
    let root = rad.sqrt();
    if &root * &root == rad {
        *out *= Scalar::from_integer(root);
        return BigInt::one();
    }
    let mut p = BigInt::from(2u32);
    let limit = BigInt::from(100_000u32);
    while &p * &p <= rad && p < limit {
        let sq = &p * &p;
        while (&rad % &sq).is_zero() {
            rad /= &sq;
            *out *= Scalar::from_integer(p.clone());
        }
        p += 1;
    }
    rad
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["0", "1", "-3/4", "12345678901234567890/7"] {
            assert_eq!(format(&parse(s).unwrap()), s);
        }
        assert_eq!(format(&parse("2/4").unwrap()), "1/2");
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
    }

    #[test]
    fn huge_values_convert() {
        let big = Scalar::new(factorial(400), factorial(398));
        assert!((to_f64(&big) - 400.0 * 399.0).abs() < 1e-6);
    }

    #[test]
    fn square_roots() {
        assert_eq!(exact_sqrt(&ratio(9, 4)), Some(ratio(3, 2)));
        assert_eq!(exact_sqrt(&ratio(2, 1)), None);
    }

    #[test]
    fn surds() {
        assert_eq!(ExactValue::with_sqrt(ratio(1, 2), &ratio(1, 4)), ExactValue::Rational(ratio(1, 4)));
        let v = ExactValue::with_sqrt(int(3), &ratio(1, 2));
        assert_eq!(v, ExactValue::Surd { coeff: ratio(3, 2), radicand: BigInt::from(2) });
        assert_eq!(v.to_string(), "3/2*sqrt(2)");
        assert!((v.to_f64() - 1.5 * 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(ExactValue::with_sqrt(int(1), &int(12)), ExactValue::Surd { coeff: int(2), radicand: BigInt::from(3) });
    }

}
