//! Exact rational numbers used for exponents, thresholds and jumping numbers.
//!
//! `Fraction` is always stored reduced with a positive denominator; only
//! rational exponents are representable, which covers every jumping number
//! that can actually occur (they form a discrete set of rationals).

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, ToPrimitive, Zero};

pub type Fraction = BigRational;

/// `n/d` as an exact reduced fraction. Panics if `d == 0`.
pub fn frac(n: i64, d: i64) -> Fraction {
    Fraction::new(BigInt::from(n), BigInt::from(d))
}

pub fn frac_int(n: i64) -> Fraction {
    Fraction::from_integer(BigInt::from(n))
}

pub fn is_zero(x: &Fraction) -> bool {
    x.is_zero()
}

/// `p^e` as a big integer.
pub fn pow_u64(base: u64, exp: u32) -> BigInt {
    BigInt::from(base).pow(exp)
}

/// `ceil(lambda * p^e)` computed exactly.
pub fn ceil_mul_pow(lambda: &Fraction, p: u64, e: u32) -> BigInt {
    (lambda * Fraction::from_integer(pow_u64(p, e))).ceil().to_integer()
}

/// `floor(lambda * m)` computed exactly, for machine-sized results.
pub fn floor_mul_i64(lambda: &Fraction, m: i64) -> i64 {
    (lambda * frac_int(m))
        .floor()
        .to_integer()
        .to_i64()
        .expect("floor(lambda*m) exceeds i64")
}

/// Denominator of a reduced fraction, as u64.
pub fn denom_u64(lambda: &Fraction) -> u64 {
    lambda.denom().to_u64().expect("denominator exceeds u64")
}

/// Smallest `k >= 0` with `p^k >= d`.
pub fn ceil_log(p: u64, d: u64) -> u32 {
    assert!(p >= 2);
    let mut k = 0u32;
    let mut pk = BigInt::one();
    let d = BigInt::from(d);
    while pk < d {
        pk *= p;
        k += 1;
    }
    k
}

/// Parse `"5/6"`, `"2"` or `"-1/3"`.
pub fn parse_fraction(s: &str) -> Result<Fraction, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| format!("invalid integer `{num}` in fraction `{s}`"))?;
    let d: BigInt = match den {
        Some(d) => d
            .parse()
            .map_err(|_| format!("invalid integer `{d}` in fraction `{s}`"))?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(format!("zero denominator in fraction `{s}`"));
    }
    Ok(Fraction::new(n, d))
}

/// Canonical rendering: `5/6`, `2`, `-1/3`.
pub fn render_fraction(x: &Fraction) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Exact midpoint of two fractions.
pub fn midpoint(a: &Fraction, b: &Fraction) -> Fraction {
    (a + b) / frac_int(2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_render() {
        for s in ["5/6", "2", "-1/3", "0"] {
            let f = parse_fraction(s).unwrap();
            assert_eq!(render_fraction(&f), s);
        }
        assert_eq!(render_fraction(&parse_fraction("4/6").unwrap()), "2/3");
        assert!(parse_fraction("1/0").is_err());
        assert!(parse_fraction("a/2").is_err());
    }

    #[test]
    fn ceilings() {
        // ceil(5/6 * 7) = ceil(35/6) = 6
        assert_eq!(ceil_mul_pow(&frac(5, 6), 7, 1), BigInt::from(6));
        // ceil(1/2 * 2^3) = 4
        assert_eq!(ceil_mul_pow(&frac(1, 2), 2, 3), BigInt::from(4));
        assert_eq!(ceil_log(2, 60), 6);
        assert_eq!(ceil_log(7, 1), 0);
        assert_eq!(ceil_log(3, 3), 1);
    }
}
