//! Exact rational arithmetic.
//!
//! Every weight, utility, share threshold and price in this crate is a
//! [`Rational`]: an arbitrary-precision fraction kept in canonical reduced
//! form (positive denominator, gcd 1). No classification verdict ever goes
//! through floating point.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number, always canonically reduced.
pub type Rational = num_rational::BigRational;

/// Rational from an integer.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rational `n / d`. Panics if `d == 0`.
pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `p` or `p/q` into a canonical rational.
pub fn parse_rational(token: &str) -> Result<Rational> {
    token
        .parse::<Rational>()
        .map_err(|_| Error::Parse(format!("invalid rational `{token}`")))
}

/// Formats a rational as a fixed-point decimal with `places` fractional
/// digits, rounding half away from zero. Used for plot-data emission only;
/// all comparisons stay exact.
pub fn format_decimal(value: &Rational, places: usize) -> String {
    let scale = BigInt::from(10u32).pow(places as u32);
    let scaled = value * Rational::from_integer(scale.clone());
    // round(x) = floor(x + 1/2) for x >= 0, mirrored for x < 0
    let half = Rational::new(BigInt::from(1), BigInt::from(2));
    let rounded = if scaled.is_negative() {
        -(-scaled + half).floor()
    } else {
        (scaled + half).floor()
    };
    let units = rounded.to_integer();
    let sign = if units.is_negative() { "-" } else { "" };
    let abs = units.abs();
    let whole = &abs / &scale;
    let fract = &abs % &scale;
    if places == 0 {
        format!("{sign}{whole}")
    } else {
        format!("{sign}{whole}.{fract:0places$}", places = places)
    }
}

/// True iff the value is zero.
pub fn is_zero(value: &Rational) -> bool {
    value.is_zero()
}
