//! Exact rational numbers and their text forms.

use std::str::FromStr;

use num::bigint::BigInt;
use num::traits::{One, Signed, ToPrimitive, Zero};
use num::BigRational;

/// Arbitrary-precision rational used for every probability in the crate.
pub type Rational = BigRational;

/// Builds `num/den` as an exact rational. Panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"num/den"` or a bare integer `"num"`.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).ok()?;
            let d = BigInt::from_str(d.trim()).ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => BigInt::from_str(text).ok().map(Rational::from_integer),
    }
}

/// Always `num/den`, including integers (`1/1`).
pub fn format_rational(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// Binomial coefficient C(n, k) as an exact integer rational.
pub fn binomial(n: u64, k: u64) -> Rational {
    if k > n {
        return Rational::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Rational::from_integer(acc)
}

/// Recovers the simplest rational within `tolerance` of `x` by continued
/// fractions, giving up once the denominator exceeds `max_den`.
///
/// A rational `p/q` with `q <= max_den` stored as an `f64` is recovered exactly
/// whenever `tolerance < 1 / (2 * max_den^2)`.
pub fn rational_from_f64(x: f64, tolerance: f64, max_den: u64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    let negative = x < 0.0;
    let target = x.abs();
    // convergents h/k
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut rest = target;
    for _ in 0..64 {
        let a = rest.floor();
        let a_int = BigInt::from(a as u64);
        let h2 = &a_int * &h1 + &h0;
        let k2 = &a_int * &k1 + &k0;
        if k2 > BigInt::from(max_den) {
            return None;
        }
        let approx = Rational::new(h2.clone(), k2.clone());
        if (to_f64(&approx) - target).abs() <= tolerance {
            return Some(if negative { -approx } else { approx });
        }
        h0 = std::mem::replace(&mut h1, h2);
        k0 = std::mem::replace(&mut k1, k2);
        let frac = rest - a;
        if frac <= 0.0 {
            return None;
        }
        rest = 1.0 / frac;
    }
    None
}

pub fn abs(value: &Rational) -> Rational {
    value.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("3/6"), Some(ratio(1, 2)));
        assert_eq!(parse_rational(" -4 "), Some(int(-4)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x/2"), None);
        assert_eq!(format_rational(&int(1)), "1/1");
        assert_eq!(format_rational(&ratio(-2, 6)), "-1/3");
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(10, 5), int(252));
        assert_eq!(binomial(12, 0), int(1));
        assert_eq!(binomial(3, 4), int(0));
    }

    #[test]
    fn float_recovery() {
        for (n, d) in [(1, 3), (2, 3), (355, 113), (99_991, 100_003), (-7, 9), (0, 1)] {
            let x = n as f64 / d as f64;
            assert_eq!(rational_from_f64(x, 1e-12, 200_000), Some(ratio(n, d)));
        }
        assert_eq!(rational_from_f64(std::f64::consts::PI, 1e-15, 1000), None);
    }
}
