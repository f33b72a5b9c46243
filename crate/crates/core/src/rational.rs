//! Exact rational scalars: the coefficient field for the whole symbolic path.
//!
//! Everything symbolic in this crate is computed over arbitrary-precision
//! rationals; no floating point enters until the numeric validator. The
//! underlying representation is `num_rational::BigRational`, which keeps
//! the invariant denominator > 0 and gcd(|numerator|, denominator) = 1.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

/// Build n/d. Panics on d = 0.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat_zero() -> Rational {
    Rational::zero()
}

pub fn rat_one() -> Rational {
    Rational::one()
}

/// k! as a rational.
pub fn factorial(k: u32) -> Rational {
    let mut acc = BigInt::one();
    for i in 2..=k as u64 {
        acc *= i;
    }
    Rational::from_integer(acc)
}

/// Double factorial k!! with the convention (-1)!! = 0!! = 1.
pub fn double_factorial(k: i64) -> Rational {
    let mut acc = BigInt::one();
    let mut i = k;
    while i >= 2 {
        acc *= i;
        i -= 2;
    }
    Rational::from_integer(acc)
}

/// r^e for signed integer exponents; panics on 0^negative.
pub fn pow_i(r: &Rational, e: i32) -> Rational {
    if e >= 0 {
        num_traits::pow::pow(r.clone(), e as usize)
    } else {
        assert!(!r.is_zero(), "zero to a negative power");
        num_traits::pow::pow(r.recip(), (-e) as usize)
    }
}

/// Canonical text form: "p" for integers, "p/q" otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse "p", "p/q", or a finite decimal like "-0.25" (exact).
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().ok()?;
        let d: BigInt = den.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.trim_start().starts_with('-');
        let i: BigInt = if int.is_empty() || int == "-" {
            BigInt::zero()
        } else {
            int.parse().ok()?
        };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let f: BigInt = frac.parse().ok()?;
        let scale = num_traits::pow::pow(BigInt::from(10), frac.len());
        let abs = Rational::from_integer(i.abs()) + Rational::new(f, scale);
        return Some(if neg { -abs } else { abs });
    }
    let n: BigInt = s.parse().ok()?;
    Some(Rational::from_integer(n))
}

/// Lossless-enough conversion for the numeric side.
pub fn rational_to_f64(r: &Rational) -> f64 {
    let n = r.numer();
    let d = r.denom();
    let nf = bigint_to_f64(n);
    let df = bigint_to_f64(d);
    nf / df
}

fn bigint_to_f64(x: &BigInt) -> f64 {
    let s = x.to_string();
    s.parse::<f64>().unwrap_or(f64::NAN)
}
