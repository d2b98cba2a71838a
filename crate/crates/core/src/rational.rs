//! Exact rational helpers shared by the analytic modules.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

/// Arbitrary-precision rational used for every analytic quantity.
pub type Rational = BigRational;

pub fn int(n: u64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(num: u64, den: u64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Formats `q` as a decimal with 12 significant digits.
pub fn decimal(q: &Rational) -> String {
    let v = to_f64(q);
    if v == 0.0 {
        return "0".to_string();
    }
    let magnitude = v.abs().log10().floor() as i32;
    let places = (11 - magnitude).max(0) as usize;
    let s = format!("{v:.places$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub fn sum<'a>(items: impl IntoIterator<Item = &'a Rational>) -> Rational {
    items.into_iter().fold(Rational::zero(), |acc, x| acc + x)
}

pub fn is_one(q: &Rational) -> bool {
    q.is_one()
}

pub fn is_negative(q: &Rational) -> bool {
    q.is_negative()
}

/// Wire form of an exact rational: numerator and denominator as decimal
/// strings (they may exceed 64 bits) plus a floating-point approximation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RationalJson {
    pub num: String,
    pub den: String,
    pub decimal: f64,
}

impl From<&Rational> for RationalJson {
    fn from(q: &Rational) -> Self {
        RationalJson {
            num: q.numer().to_string(),
            den: q.denom().to_string(),
            decimal: to_f64(q),
        }
    }
}
