//! Coefficient domains: prime fields `F_p` and the exact rationals.
//!
//! The modulus is carried by the ring value, not by each element, so elements
//! of different prime fields can never be mixed silently: every operation
//! goes through the ring.

use crate::rat::Fraction;
use num::bigint::BigInt;
use num::{Integer, One, Signed, ToPrimitive, Zero};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {p} divides the denominator of coefficient {coeff}")]
    BadPrime { p: u64, coeff: String },
}

/// Operations every coefficient domain supports. Elements are plain data;
/// all arithmetic is dispatched through the ring value.
pub trait CoeffRing: Clone + PartialEq + Eq + fmt::Debug {
    type Elem: Clone + PartialEq + Eq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn is_one(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn from_bigint(&self, n: &BigInt) -> Self::Elem;
    /// Sign and magnitude rendering, used by the canonical printer.
    fn render_signed(&self, a: &Self::Elem) -> (bool, String);
}

pub trait CoeffField: CoeffRing {
    /// Multiplicative inverse. Panics on zero.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
}

/// Deterministic Miller-Rabin, exact for all u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let pow = |mut b: u128, mut e: u64, m: u128| -> u128 {
        let mut acc = 1u128;
        b %= m;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % m;
            }
            b = b * b % m;
            e >>= 1;
        }
        acc
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow(a as u128, d, n as u128);
        if x == 1 || x == (n - 1) as u128 {
            continue;
        }
        for _ in 0..s - 1 {
            x = x * x % n as u128;
            if x == (n - 1) as u128 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// The prime field `F_p`. Elements are canonical residues in `[0, p)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, RingError> {
        if is_prime_u64(p) {
            Ok(PrimeField { p })
        } else {
            Err(RingError::NotPrime(p))
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn reduce_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }

    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        let m = self.p as u128;
        let mut b = a as u128 % m;
        let mut acc = 1u128;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % m;
            }
            b = b * b % m;
            e >>= 1;
        }
        acc as u64
    }
}

impl CoeffRing for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn is_one(&self, a: &u64) -> bool {
        *a == 1 % self.p
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn from_bigint(&self, n: &BigInt) -> u64 {
        n.mod_floor(&BigInt::from(self.p)).to_u64().unwrap()
    }
    fn render_signed(&self, a: &u64) -> (bool, String) {
        (false, a.to_string())
    }
}

impl CoeffField for PrimeField {
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "inverse of zero in F_{}", self.p);
        // Fermat: a^(p-2)
        self.pow(*a, self.p - 2)
    }
}

/// The field of exact rationals (arbitrary-precision).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Rationals;

impl CoeffRing for Rationals {
    type Elem = Fraction;

    fn zero(&self) -> Fraction {
        Fraction::zero()
    }
    fn one(&self) -> Fraction {
        Fraction::one()
    }
    fn is_zero(&self, a: &Fraction) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &Fraction) -> bool {
        a.is_one()
    }
    fn add(&self, a: &Fraction, b: &Fraction) -> Fraction {
        a + b
    }
    fn sub(&self, a: &Fraction, b: &Fraction) -> Fraction {
        a - b
    }
    fn neg(&self, a: &Fraction) -> Fraction {
        -a
    }
    fn mul(&self, a: &Fraction, b: &Fraction) -> Fraction {
        a * b
    }
    fn from_bigint(&self, n: &BigInt) -> Fraction {
        Fraction::from_integer(n.clone())
    }
    fn render_signed(&self, a: &Fraction) -> (bool, String) {
        (a.is_negative(), crate::rat::render_fraction(&a.abs()))
    }
}

impl CoeffField for Rationals {
    fn inv(&self, a: &Fraction) -> Fraction {
        assert!(!a.is_zero(), "inverse of zero rational");
        a.recip()
    }
}
