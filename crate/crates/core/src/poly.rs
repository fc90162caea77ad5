//! Sparse multivariate polynomials with exact coefficients.
//!
//! Terms are stored in a `BTreeMap` keyed by exponent vectors whose `Ord` is
//! graded reverse-lexicographic, so a polynomial is always in canonical form:
//! two polynomials are equal exactly when their term maps are identical, and
//! printing never needs a sort.

use crate::rat::Fraction;
use crate::ring::{CoeffField, CoeffRing, PrimeField, Rationals, RingError};
use num::bigint::BigInt;
use num::{Integer, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Sub};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("arity mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
    #[error("coefficient domain mismatch")]
    DomainMismatch,
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Exponent vector of a monomial. The arity is fixed by the ambient ring.
///
/// `Ord` is graded reverse-lexicographic (ascending), the order used for
/// canonical storage and printing.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Exponent(pub Vec<u64>);

impl Exponent {
    pub fn zero(arity: usize) -> Self {
        Exponent(vec![0; arity])
    }

    pub fn unit(arity: usize, i: usize) -> Self {
        assert!(i < arity);
        let mut v = vec![0; arity];
        v[i] = 1;
        Exponent(v)
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.arity(), other.arity());
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise difference, `None` if any entry would go negative.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        let mut v = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            v.push(a.checked_sub(*b)?);
        }
        Some(Exponent(v))
    }

    /// Does the monomial `x^self` divide `x^other`?
    pub fn divides(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn lcm(&self, other: &Self) -> Self {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn scale(&self, k: u64) -> Self {
        Exponent(self.0.iter().map(|a| a * k).collect())
    }

    /// Componentwise `(quotient, remainder)` by `m`.
    pub fn div_mod(&self, m: u64) -> (Exponent, Exponent) {
        let q = Exponent(self.0.iter().map(|a| a / m).collect());
        let r = Exponent(self.0.iter().map(|a| a % m).collect());
        (q, r)
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        debug_assert_eq!(self.arity(), other.arity());
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        // grevlex tie-break: larger is the one whose rightmost differing
        // entry is smaller
        for i in (0..self.0.len()).rev() {
            if self.0[i] != other.0[i] {
                return other.0[i].cmp(&self.0[i]);
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Variable names used by the canonical printer: `x, y, z` for arity at most
/// three, `x1..xn` beyond.
pub fn default_vars(arity: usize) -> Vec<String> {
    if arity <= 3 {
        ["x", "y", "z"][..arity].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=arity).map(|i| format!("x{i}")).collect()
    }
}

/// A sparse multivariate polynomial over the coefficient ring `R`.
///
/// No zero coefficients are ever stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MPoly<R: CoeffRing> {
    ring: R,
    arity: usize,
    terms: BTreeMap<Exponent, R::Elem>,
}

pub type PolyFp = MPoly<PrimeField>;
pub type PolyQ = MPoly<Rationals>;

impl<R: CoeffRing> MPoly<R> {
    pub fn zero(ring: R, arity: usize) -> Self {
        MPoly { ring, arity, terms: BTreeMap::new() }
    }

    pub fn one(ring: R, arity: usize) -> Self {
        let c = ring.one();
        Self::monomial(ring, Exponent::zero(arity), c)
    }

    pub fn constant(ring: R, arity: usize, c: R::Elem) -> Self {
        Self::monomial(ring, Exponent::zero(arity), c)
    }

    pub fn var(ring: R, arity: usize, i: usize) -> Self {
        let c = ring.one();
        Self::monomial(ring, Exponent::unit(arity, i), c)
    }

    pub fn monomial(ring: R, exp: Exponent, c: R::Elem) -> Self {
        let arity = exp.arity();
        let mut terms = BTreeMap::new();
        if !ring.is_zero(&c) {
            terms.insert(exp, c);
        }
        MPoly { ring, arity, terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Exponent, R::Elem)>>(
        ring: R,
        arity: usize,
        iter: I,
    ) -> Self {
        let mut f = Self::zero(ring, arity);
        for (e, c) in iter {
            assert_eq!(e.arity(), arity, "term arity mismatch");
            f.insert_add(e, c);
        }
        f
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&Exponent::zero(self.arity))
                .is_some_and(|c| self.ring.is_one(c))
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().is_zero())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &R::Elem)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &Exponent) -> Option<&R::Elem> {
        self.terms.get(e)
    }

    pub fn constant_term(&self) -> Option<&R::Elem> {
        self.terms.get(&Exponent::zero(self.arity))
    }

    /// Leading term under grevlex (the storage order).
    pub fn leading(&self) -> Option<(&Exponent, &R::Elem)> {
        self.terms.last_key_value()
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(|e| e.degree()).max()
    }

    pub(crate) fn insert_add(&mut self, e: Exponent, c: R::Elem) {
        if self.ring.is_zero(&c) {
            return;
        }
        match self.terms.remove(&e) {
            None => {
                self.terms.insert(e, c);
            }
            Some(old) => {
                let s = self.ring.add(&old, &c);
                if !self.ring.is_zero(&s) {
                    self.terms.insert(e, s);
                }
            }
        }
    }

    fn compatible(&self, other: &Self) -> Result<(), PolyError> {
        if self.arity != other.arity {
            return Err(PolyError::ArityMismatch(self.arity, other.arity));
        }
        if self.ring != other.ring {
            return Err(PolyError::DomainMismatch);
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_add(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_add(e.clone(), self.ring.neg(c));
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.compatible(other)?;
        let mut out = Self::zero(self.ring.clone(), self.arity);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.insert_add(ea.add(eb), self.ring.mul(ca, cb));
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), self.ring.neg(c))).collect();
        MPoly { ring: self.ring.clone(), arity: self.arity, terms }
    }

    /// `self^k` by binary exponentiation. `self^0 = 1`.
    pub fn pow(&self, k: u64) -> Self {
        let mut acc = Self::one(self.ring.clone(), self.arity);
        if k == 0 {
            return acc;
        }
        let mut base = self.clone();
        let mut e = k;
        loop {
            if e & 1 == 1 {
                acc = acc.try_mul(&base).unwrap();
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.try_mul(&base).unwrap();
        }
        acc
    }

    /// Multiply by the single term `c * x^e`.
    pub fn mul_term(&self, e: &Exponent, c: &R::Elem) -> Self {
        if self.ring.is_zero(c) {
            return Self::zero(self.ring.clone(), self.arity);
        }
        let terms = self
            .terms
            .iter()
            .filter_map(|(ea, ca)| {
                let prod = self.ring.mul(ca, c);
                (!self.ring.is_zero(&prod)).then(|| (ea.add(e), prod))
            })
            .collect();
        MPoly { ring: self.ring.clone(), arity: self.arity, terms }
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        self.mul_term(&Exponent::zero(self.arity), c)
    }

    pub fn render(&self) -> String {
        let vars = default_vars(self.arity);
        self.render_with(&vars.iter().map(|s| s.as_str()).collect::<Vec<_>>())
    }

    /// Canonical ASCII rendering: terms grevlex-descending, `^` for powers,
    /// `*` between factors, e.g. `x^3*y + 2*y^2 + 6`.
    pub fn render_with(&self, vars: &[&str]) -> String {
        assert_eq!(vars.len(), self.arity);
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let (neg, mag) = self.ring.render_signed(c);
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            if mag != "1" || e.is_zero() {
                factors.push(mag);
            }
            for (v, &k) in vars.iter().zip(&e.0) {
                match k {
                    0 => {}
                    1 => factors.push(v.to_string()),
                    _ => factors.push(format!("{v}^{k}")),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

impl<R: CoeffField> MPoly<R> {
    /// Scale so the grevlex-leading coefficient is one.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = self.ring.inv(c);
                self.scale(&inv)
            }
        }
    }
}

impl<R: CoeffRing> Add for &MPoly<R> {
    type Output = MPoly<R>;
    fn add(self, rhs: Self) -> MPoly<R> {
        self.try_add(rhs).expect("polynomial addition")
    }
}

impl<R: CoeffRing> Sub for &MPoly<R> {
    type Output = MPoly<R>;
    fn sub(self, rhs: Self) -> MPoly<R> {
        self.try_sub(rhs).expect("polynomial subtraction")
    }
}

impl<R: CoeffRing> Mul for &MPoly<R> {
    type Output = MPoly<R>;
    fn mul(self, rhs: Self) -> MPoly<R> {
        self.try_mul(rhs).expect("polynomial multiplication")
    }
}

impl MPoly<PrimeField> {
    pub fn field(&self) -> PrimeField {
        *self.ring()
    }

    /// `g^(p^e)`: exponents scale by `p^e`, coefficients are fixed by
    /// Frobenius on the prime field.
    pub fn frobenius_scale(&self, e: u32) -> Self {
        let q = self
            .field()
            .p()
            .checked_pow(e)
            .expect("p^e exceeds u64");
        let terms = self.terms.iter().map(|(ex, c)| (ex.scale(q), *c)).collect();
        MPoly { ring: self.ring, arity: self.arity, terms }
    }

    /// The unique decomposition `g = sum_mu h_mu^(p^e) * x^mu` over the
    /// basis of monomials with exponents in `[0, p^e)`, obtained by
    /// iterating the single-p split e times. Zero components are omitted.
    pub fn pe_basis_decompose(&self, e: u32) -> BTreeMap<Exponent, MPoly<PrimeField>> {
        assert!(e >= 1, "pe_basis_decompose requires e >= 1");
        let p = self.field().p();
        let mut level: BTreeMap<Exponent, MPoly<PrimeField>> = BTreeMap::new();
        level.insert(Exponent::zero(self.arity), self.clone());
        let mut stride = 1u64;
        for _ in 0..e {
            let mut next: BTreeMap<Exponent, MPoly<PrimeField>> = BTreeMap::new();
            for (mu, h) in level {
                for (exp, c) in &h.terms {
                    let (q, r) = exp.div_mod(p);
                    let combined = mu.add(&r.scale(stride));
                    next.entry(combined)
                        .or_insert_with(|| MPoly::zero(self.ring, self.arity))
                        .insert_add(q, *c);
                }
            }
            next.retain(|_, h| !h.is_zero());
            level = next;
            stride *= p;
        }
        level
    }
}

/// Coefficient-wise reduction of a rational polynomial modulo `p`.
///
/// Fails with `BadPrime` when `p` divides some denominator, marking `p` as
/// an excluded prime for this input.
pub fn reduce_mod_p(f: &MPoly<Rationals>, field: PrimeField) -> Result<MPoly<PrimeField>, PolyError> {
    let p = BigInt::from(field.p());
    let mut out = MPoly::zero(field, f.arity());
    for (e, c) in f.terms() {
        if c.denom().mod_floor(&p).is_zero() {
            return Err(RingError::BadPrime {
                p: field.p(),
                coeff: crate::rat::render_fraction(c),
            }
            .into());
        }
        let num = field.from_bigint(c.numer());
        let den = field.from_bigint(c.denom());
        let r = field.mul(&num, &CoeffField::inv(&field, &den));
        out.insert_add(e.clone(), r);
    }
    Ok(out)
}

/// Clear denominators and divide by the content: the primitive integer
/// polynomial spanning the same rational line. Returns the zero polynomial
/// unchanged.
pub fn primitive_integer(f: &MPoly<Rationals>) -> MPoly<Rationals> {
    use num::Integer as _;
    if f.is_zero() {
        return f.clone();
    }
    let mut den_lcm = BigInt::from(1);
    for (_, c) in f.terms() {
        den_lcm = den_lcm.lcm(c.denom());
    }
    let mut content = BigInt::zero();
    let scaled: Vec<(Exponent, BigInt)> = f
        .terms()
        .map(|(e, c)| {
            let n = c.numer() * (&den_lcm / c.denom());
            content = content.gcd(&n);
            (e.clone(), n)
        })
        .collect();
    MPoly::from_terms(
        Rationals,
        f.arity(),
        scaled
            .into_iter()
            .map(|(e, n)| (e, Fraction::from_integer(n / &content))),
    )
}

/// Exact fraction from a rational-polynomial constant, if the polynomial is
/// constant.
pub fn as_constant(f: &MPoly<Rationals>) -> Option<Fraction> {
    if f.is_zero() {
        return Some(Fraction::zero());
    }
    if f.is_constant() {
        return f.constant_term().cloned();
    }
    None
}

/// Convert small machine integers into field elements of `f`'s ring.
pub fn fp_const(field: PrimeField, n: i64) -> u64 {
    field.reduce_i64(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f_p(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn parse_fp(p: u64, arity: usize, s: &str) -> PolyFp {
        let vars = default_vars(arity);
        let refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
        let q = crate::parse::parse_poly(s, &refs).unwrap();
        reduce_mod_p(&q, f_p(p)).unwrap()
    }

    #[test]
    fn grevlex_order() {
        let x = Exponent(vec![1, 0]);
        let y = Exponent(vec![0, 1]);
        assert!(x > y);
        let a = Exponent(vec![2, 1]);
        let b = Exponent(vec![1, 2]);
        assert!(a > b);
        // graded first
        assert!(Exponent(vec![0, 3]) > Exponent(vec![2, 0]));
    }

    #[test]
    fn freshman_dream_char2() {
        let f2 = f_p(2);
        let x = PolyFp::var(f2, 2, 0);
        let y = PolyFp::var(f2, 2, 1);
        let s = (&x + &y).pow(2);
        let expected = &x.pow(2) + &y.pow(2);
        assert_eq!(s, expected);
        assert_eq!(s.render(), "x^2 + y^2");
    }

    #[test]
    fn difference_of_squares_f5() {
        let f5 = f_p(5);
        let x = PolyFp::var(f5, 1, 0);
        let one = PolyFp::one(f5, 1);
        let prod = &(&x + &one) * &(&x - &one);
        assert_eq!(prod.render(), "x^2 + 4");
    }

    #[test]
    fn pow_matches_naive_product_f7() {
        // (x^2 + y^3)^3 over F_7 against naive repeated multiplication
        let f = parse_fp(7, 2, "x^2 + y^3");
        let naive = &(&f * &f) * &f;
        assert_eq!(f.pow(3), naive);
        assert_eq!(naive.render(), "y^9 + 3*x^2*y^6 + 3*x^4*y^3 + x^6");
    }

    #[test]
    fn decompose_perfect_power() {
        for (p, e) in [(2u64, 1u32), (2, 3), (3, 2), (5, 1)] {
            let fp = f_p(p);
            let q = p.pow(e);
            let g = PolyFp::monomial(fp, Exponent(vec![q]), 1);
            let d = g.pe_basis_decompose(e);
            assert_eq!(d.len(), 1);
            let h = d.get(&Exponent(vec![0])).unwrap();
            assert_eq!(*h, PolyFp::var(fp, 1, 0));
        }
    }

    #[test]
    fn decompose_zero_is_empty() {
        let fp = f_p(3);
        let z = PolyFp::zero(fp, 2);
        assert!(z.pe_basis_decompose(2).is_empty());
    }

    #[test]
    fn decompose_example_p2() {
        // g = x^3 y + x = x^2 (x y) + 1 * x : components {(1,1) -> x, (1,0) -> 1}
        let g = parse_fp(2, 2, "x^3*y + x");
        let d = g.pe_basis_decompose(1);
        assert_eq!(d.len(), 2);
        assert_eq!(d.get(&Exponent(vec![1, 1])).unwrap().render(), "x");
        assert_eq!(d.get(&Exponent(vec![1, 0])).unwrap().render(), "1");
    }

    #[test]
    fn decompose_reconstructs() {
        let g = parse_fp(3, 2, "x^5*y^2 + 2*x^4 + y^7 + 1");
        for e in 1..=3u32 {
            let d = g.pe_basis_decompose(e);
            let q = 3u64.pow(e);
            let mut sum = PolyFp::zero(g.field(), 2);
            for (mu, h) in &d {
                assert!(mu.0.iter().all(|&m| m < q));
                sum = &sum + &h.frobenius_scale(e).mul_term(mu, &1);
            }
            assert_eq!(sum, g);
        }
    }

    #[test]
    fn reduce_examples() {
        let x2y3 = crate::parse::parse_poly("x^2 + y^3", &["x", "y"]).unwrap();
        let r = reduce_mod_p(&x2y3, f_p(7)).unwrap();
        assert_eq!(r.render(), "y^3 + x^2");

        let half = crate::parse::parse_poly("1/2*x^2", &["x"]).unwrap();
        assert!(matches!(
            reduce_mod_p(&half, f_p(2)),
            Err(PolyError::Ring(RingError::BadPrime { p: 2, .. }))
        ));

        let f = crate::parse::parse_poly("3/4*x + 5", &["x"]).unwrap();
        assert_eq!(reduce_mod_p(&f, f_p(7)).unwrap().render(), "6*x + 5");
    }

    #[test]
    fn render_golden() {
        let f7 = f_p(7);
        let f = PolyFp::from_terms(
            f7,
            2,
            [
                (Exponent(vec![3, 1]), 1u64),
                (Exponent(vec![0, 2]), 2),
                (Exponent(vec![0, 0]), 6),
            ],
        );
        assert_eq!(f.render(), "x^3*y + 2*y^2 + 6");
        assert_eq!(PolyFp::zero(f7, 2).render(), "0");
        // rationals with signs
        let q = crate::parse::parse_poly("-x + 1/2", &["x"]).unwrap();
        assert_eq!(q.render(), "-x + 1/2");
    }

    #[test]
    fn primitive_integer_clears() {
        let f = crate::parse::parse_poly("1/2*x^2 + 3/4", &["x"]).unwrap();
        let g = primitive_integer(&f);
        assert_eq!(g.render(), "2*x^2 + 3");
    }
}
