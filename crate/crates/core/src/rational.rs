//! Exact rational helpers on top of `num-rational`.
//!
//! All set-defining arithmetic goes through integers: for a parameter
//! `a = p/q` the floor `[m/a]` is `floor(m*q/p)`. Floats appear only when a
//! value is rendered for humans.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

/// `p/q` from small integers.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn from_uint(n: &BigUint) -> Rational {
    Rational::from_integer(BigInt::from(n.clone()))
}

pub fn uint_ratio(num: &BigUint, den: &BigUint) -> Rational {
    Rational::new(BigInt::from(num.clone()), BigInt::from(den.clone()))
}

/// Parses `p/q` or a bare integer. Whitespace around the parts is ignored.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

/// Non-negative numerator and positive denominator of a positive rational.
fn parts(a: &Rational) -> (BigUint, BigUint) {
    debug_assert!(a.is_positive());
    let p = a.numer().to_biguint().expect("positive numerator");
    let q = a.denom().to_biguint().expect("positive denominator");
    (p, q)
}

/// `[m / a]` for a positive rational `a`, exactly.
pub fn floor_div(m: &BigUint, a: &Rational) -> BigUint {
    let (p, q) = parts(a);
    (m * q) / p
}

/// Smallest integer `>= a * x` for positive `a`.
pub fn ceil_mul(a: &Rational, x: &BigUint) -> BigUint {
    let (p, q) = parts(a);
    Integer::div_ceil(&(p * x), &q)
}

/// Largest integer `<= r` for non-negative `r`.
pub fn floor_uint(r: &Rational) -> BigUint {
    r.floor()
        .to_integer()
        .to_biguint()
        .expect("non-negative rational")
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn abs_diff(a: &Rational, b: &Rational) -> Rational {
    (a - b).abs()
}

pub fn in_open_unit(a: &Rational) -> bool {
    a.is_positive() && *a < Rational::one()
}

/// Renders `p/q`, or just `p` for integers.
pub fn show(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn numer_uint(r: &Rational) -> BigUint {
    match r.numer().sign() {
        Sign::Minus => panic!("negative rational where a count was expected"),
        _ => r.numer().magnitude().clone(),
    }
}

/// Formats `x` with `digits` significant digits, `%g` style.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let digits = digits.max(1);
    let exp = x.abs().log10().floor() as i32;
    if exp < -5 || exp >= digits as i32 {
        let s = format!("{:.*e}", digits - 1, x);
        // trim mantissa zeros: 1.500000e3 -> 1.5e3
        match s.split_once('e') {
            Some((mantissa, e)) => {
                let mantissa = if mantissa.contains('.') {
                    mantissa.trim_end_matches('0').trim_end_matches('.')
                } else {
                    mantissa
                };
                format!("{mantissa}e{e}")
            }
            None => s,
        }
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        let s = format!("{:.*}", decimals, x);
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    }
}
