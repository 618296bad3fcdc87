//! Arbitrary-precision rationals and their `"p/q"` string form.

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number used throughout the crate.
pub type Q = BigRational;

pub fn int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn frac(p: i64, q: i64) -> Q {
    Q::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `"p/q"`, `"p"` or `"-p/q"`; the result is reduced.
pub fn parse_q(s: &str) -> Result<Q> {
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Q::new(p, q))
        }
        None => Ok(Q::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

/// Canonical string: `"p/q"` in lowest terms with positive denominator, `"p"` for integers.
pub fn fmt_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn lcm(a: &BigInt, b: &BigInt) -> BigInt {
    a.lcm(b)
}

/// Formats a float with at most 12 significant digits and no trailing zeros.
pub fn fmt_float(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    if x == 0.0 {
        return "0".into();
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = (11 - mag).max(0) as usize;
    let s = format!("{:.*}", decimals, x);
    let s = if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

pub fn is_positive(x: &Q) -> bool {
    x.is_positive()
}
