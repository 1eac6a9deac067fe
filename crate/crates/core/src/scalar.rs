//! Exact rational scalars and the small amount of q-arithmetic built on them.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms.
pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Scalar {
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"a/b"`, an integer, or a finite decimal such as `"-0.125"`.
///
/// Decimals are converted exactly using a power-of-ten denominator.
pub fn parse_rational(text: &str) -> Result<Scalar> {
    let s = text.trim();
    let bad = || Error::Parse(format!("not a rational number: {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((a, b)) = s.split_once('/') {
        let num: BigInt = a.trim().parse().map_err(|_| bad())?;
        let den: BigInt = b.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {text:?}")));
        }
        return Ok(Scalar::new(num, den));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let (neg, whole) = match whole.strip_prefix('-') {
            Some(w) => (true, w),
            None => (false, whole.strip_prefix('+').unwrap_or(whole)),
        };
        let digits_ok = |d: &str| d.chars().all(|c| c.is_ascii_digit());
        if !digits_ok(whole) || !digits_ok(frac) || (whole.is_empty() && frac.is_empty()) {
            return Err(bad());
        }
        let digits = format!("{whole}{frac}");
        let num: BigInt = if digits.is_empty() {
            BigInt::zero()
        } else {
            digits.parse().map_err(|_| bad())?
        };
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let value = Scalar::new(num, den);
        return Ok(if neg { -value } else { value });
    }
    let num: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Scalar::from_integer(num))
}

/// Formats as `"a/b"` with an explicit denominator, even when it is 1.
pub fn format_rational(x: &Scalar) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn to_f64(x: &Scalar) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // Very large numerators and denominators: scale through logarithms.
        let sign = if x.is_negative() { -1.0 } else { 1.0 };
        let ln = big_ln(&x.numer().abs()) - big_ln(x.denom());
        sign * ln.exp()
    })
}

fn big_ln(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits < 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap_or(f64::INFINITY);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn pow(x: &Scalar, e: i32) -> Scalar {
    num_traits::Pow::pow(x, e)
}

/// `{n}_q = 1 + q + ... + q^{n-1}`.
pub fn q_integer(n: usize, q: &Scalar) -> Scalar {
    let mut acc = Scalar::zero();
    let mut term = Scalar::one();
    for _ in 0..n {
        acc += &term;
        term *= q;
    }
    acc
}

/// `{n!}_q = {1}_q {2}_q ... {n}_q`.
pub fn q_factorial(n: usize, q: &Scalar) -> Scalar {
    let mut acc = Scalar::one();
    let mut qi = Scalar::zero();
    let mut term = Scalar::one();
    for _ in 0..n {
        qi += &term;
        term *= q;
        acc *= &qi;
    }
    acc
}

/// Falling factorial `n (n-1) ... (n-k+1)`; zero when `k > n`.
pub fn falling_factorial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i))
}

pub fn factorial(n: usize) -> BigInt {
    falling_factorial(n, n)
}

/// Falling factorial as a float, for large `n` in Monte Carlo normalisations.
pub fn falling_factorial_f64(n: f64, k: usize) -> f64 {
    (0..k).map(|i| n - i as f64).product()
}
