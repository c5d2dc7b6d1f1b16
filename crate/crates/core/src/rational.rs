//! Exact rational helpers on top of [`num_rational::BigRational`].
//!
//! All Viterbi and fuzzy values are carried as reduced fractions. The text
//! form is always `p/q` (integers print as `n/1`) so serialized values never
//! pass through floating point.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use num_rational::BigRational;

pub fn ratio(numer: i64, denom: i64) -> BigRational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn from_biguints(numer: BigUint, denom: BigUint) -> BigRational {
    BigRational::new(
        BigInt::from_biguint(Sign::Plus, numer),
        BigInt::from_biguint(Sign::Plus, denom),
    )
}

/// Renders `p/q` in lowest terms.
pub fn format_ratio(value: &BigRational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

/// Parses `p/q` or a bare integer `p`.
pub fn parse_ratio(text: &str) -> Result<BigRational> {
    let text = text.trim();
    let bad = || Error::parse(0, format!("invalid rational {text:?}"));
    let (numer, denom) = match text.split_once('/') {
        Some((n, d)) => (
            n.trim().parse::<BigInt>().map_err(|_| bad())?,
            d.trim().parse::<BigInt>().map_err(|_| bad())?,
        ),
        None => (text.parse::<BigInt>().map_err(|_| bad())?, BigInt::one()),
    };
    if denom.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(numer, denom))
}

pub fn to_f64(value: &BigRational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// `1/2^bits`.
pub fn inverse_power_of_two(bits: u64) -> BigRational {
    from_biguints(BigUint::one(), BigUint::one() << bits)
}

/// Natural log of a positive big integer without overflowing `f64`.
pub fn ln_biguint(value: &BigUint) -> f64 {
    let bits = value.bits();
    if bits <= 1000 {
        return value.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (value >> shift).to_f64().unwrap_or(f64::INFINITY);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `ln(value)` for a positive rational; `-inf` at zero.
pub fn ln_ratio(value: &BigRational) -> f64 {
    if value.is_zero() {
        return f64::NEG_INFINITY;
    }
    let numer = value.numer().abs().to_biguint().unwrap_or_default();
    let denom = value.denom().to_biguint().unwrap_or_default();
    ln_biguint(&numer) - ln_biguint(&denom)
}

pub fn is_unit_interval(value: &BigRational) -> bool {
    !value.is_negative() && *value <= BigRational::one()
}

/// Smallest `t` with `2^t >= value`, for `value >= 1`.
pub fn ceil_log2(value: &BigUint) -> u64 {
    if value.is_zero() || value.is_one() {
        return 0;
    }
    (value - 1u32).bits()
}

pub fn is_power_of_two(value: &BigUint) -> bool {
    !value.is_zero() && (value & (value - 1u32)).is_zero()
}

pub(crate) fn gcd_reduce(numer: BigUint, denom: BigUint) -> (BigUint, BigUint) {
    let g = numer.gcd(&denom);
    if g.is_zero() || g.is_one() {
        (numer, denom)
    } else {
        (numer / &g, denom / g)
    }
}
