//! Characteristic-zero side and simple-normal-crossings combinatorics.
//!
//! On an SNC configuration every sheaf `O(sum c_i E_i)` is just its integer
//! coefficient vector, so multiplier ideals, trace images and test-ideal
//! terms reduce to exact rounding arithmetic on ledgers. Monomial ideals get
//! honest Newton-polyhedron geometry in [`newton`].

pub mod newton;

pub use newton::{
    candidate_jumping_numbers_polyhedron, monomial_test_ideal, multiplier_ideal_monomial,
    newton_polyhedron, Facet, MonomialTestIdeal, NewtonPolyhedron,
};

use crate::groebner::IdealGens;
use crate::poly::{Exponent, MPoly};
use crate::rat::{self, Fraction};
use crate::ring::PrimeField;
use num::bigint::BigInt;
use num::{Integer, Signed, ToPrimitive, Zero};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MultError {
    #[error("arity {0} too large (at most 3 supported)")]
    ArityTooLarge(usize),
    #[error("ledger vectors have mismatched lengths")]
    LedgerShape,
    #[error("negative exponent {0}")]
    NegativeExponent(String),
    #[error("not stabilized within e_max = {0}")]
    NotStabilized(u32),
    #[error("search limit exceeded: {0}")]
    ResourceExceeded(String),
    #[error("parse error: {0}")]
    Parse(String),
}

/// Coefficient vectors of a divisor pair on an SNC configuration: `a` holds
/// the relative-canonical coefficients, `b` the multiplicities of the
/// divisor cut out by the input ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorLedger {
    pub labels: Vec<String>,
    pub a: Vec<i64>,
    pub b: Vec<i64>,
}

impl DivisorLedger {
    pub fn new(labels: Vec<String>, a: Vec<i64>, b: Vec<i64>) -> Result<Self, MultError> {
        if labels.len() != a.len() || a.len() != b.len() {
            return Err(MultError::LedgerShape);
        }
        Ok(DivisorLedger { labels, a, b })
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    /// TSV rows `label <tab-or-space> a_i <tab-or-space> b_i`; `#` comments.
    pub fn parse_tsv(text: &str) -> Result<Self, MultError> {
        let mut labels = Vec::new();
        let mut a = Vec::new();
        let mut b = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split_whitespace().collect();
            if cols.len() != 3 {
                return Err(MultError::Parse(format!(
                    "line {}: expected `label a_i b_i`, got {} columns",
                    lineno + 1,
                    cols.len()
                )));
            }
            labels.push(cols[0].to_string());
            a.push(cols[1].parse().map_err(|_| {
                MultError::Parse(format!("line {}: bad integer `{}`", lineno + 1, cols[1]))
            })?);
            b.push(cols[2].parse().map_err(|_| {
                MultError::Parse(format!("line {}: bad integer `{}`", lineno + 1, cols[2]))
            })?);
        }
        DivisorLedger::new(labels, a, b)
    }
}

fn check_lambda(lambda: &Fraction) -> Result<(), MultError> {
    if lambda.is_negative() {
        return Err(MultError::NegativeExponent(rat::render_fraction(lambda)));
    }
    Ok(())
}

/// Coefficient vector of the multiplier ideal sheaf on the SNC model:
/// `c_i = -a_i - floor(lambda b_i)`.
pub fn snc_multiplier(ledger: &DivisorLedger, lambda: &Fraction) -> Vec<i64> {
    debug_assert!(!lambda.is_negative());
    ledger
        .a
        .iter()
        .zip(&ledger.b)
        .map(|(a, b)| -a - rat::floor_mul_i64(lambda, *b))
        .collect()
}

/// Image of the e-th divisor-twisted trace on the fractional ideal with
/// coefficient vector `-b_input`: the output sheaf has coefficients
/// `-a_i - floor((b_input_i - a_i) / p^e)`.
pub fn snc_phi_image(ledger: &DivisorLedger, b_input: &[i64], e: u32, p: u64) -> Vec<i64> {
    assert!(e >= 1);
    assert_eq!(b_input.len(), ledger.len());
    let q = BigInt::from(p).pow(e);
    ledger
        .a
        .iter()
        .zip(b_input)
        .map(|(a, bp)| {
            let num = BigInt::from(*bp) - BigInt::from(*a);
            let c = num.div_floor(&q).to_i64().expect("phi image overflow");
            -a - c
        })
        .collect()
}

/// All rationals `0 < lambda <= bound` with `lambda * b_i` integral for some
/// nonzero `b_i`: the candidate jumping numbers of the ledger.
pub fn candidate_jumping_numbers_ledger(b: &[i64], bound: &Fraction) -> Vec<Fraction> {
    candidates_from_constants(b.iter().map(|x| x.unsigned_abs()), bound)
}

pub(crate) fn candidates_from_constants<I: IntoIterator<Item = u64>>(
    constants: I,
    bound: &Fraction,
) -> Vec<Fraction> {
    let mut set: BTreeSet<Fraction> = BTreeSet::new();
    for c in constants {
        if c == 0 {
            continue;
        }
        let mut k = 1i64;
        loop {
            let lam = rat::frac(k, c as i64);
            if &lam > bound {
                break;
            }
            set.insert(lam);
            k += 1;
        }
    }
    set.into_iter().collect()
}

/// Result of the stabilized ledger test-ideal recurrence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SncTestIdeal {
    pub coefficients: Vec<i64>,
    pub stabilized_at_e: u32,
}

/// Stabilized test-ideal coefficients on the SNC model: the e-th term is
/// `-a_i - floor((ceil(lambda p^e) b_i - a_i) / p^e)`, the trace image of
/// the `ceil(lambda p^e)`-th power of the input divisor. The stabilized
/// value is `-a_i - floor(lambda b_i)` away from the candidate set; on it,
/// terms can keep oscillating, reported as `NotStabilized`.
pub fn snc_test_ideal(
    ledger: &DivisorLedger,
    lambda: &Fraction,
    p: u64,
    e_max: u32,
) -> Result<SncTestIdeal, MultError> {
    check_lambda(lambda)?;
    if lambda.is_zero() {
        return Ok(SncTestIdeal { coefficients: vec![0; ledger.len()], stabilized_at_e: 1 });
    }
    let guard = rat::ceil_log(p, rat::denom_u64(lambda)) + 1;
    let mut prev: Option<Vec<i64>> = None;
    for e in 1..=e_max {
        let n = rat::ceil_mul_pow(lambda, p, e);
        let q = BigInt::from(p).pow(e);
        let term: Vec<i64> = ledger
            .a
            .iter()
            .zip(&ledger.b)
            .map(|(a, b)| {
                let num = &n * BigInt::from(*b) - BigInt::from(*a);
                let c = num.div_floor(&q).to_i64().expect("snc test ideal overflow");
                -a - c
            })
            .collect();
        if let Some(ref p_) = prev {
            if *p_ == term && e >= guard {
                return Ok(SncTestIdeal { coefficients: term, stabilized_at_e: e - 1 });
            }
        }
        prev = Some(term);
    }
    Err(MultError::NotStabilized(e_max))
}

/// A monomial ideal held by its minimal exponent generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialIdeal {
    arity: usize,
    gens: Vec<Exponent>,
}

impl MonomialIdeal {
    /// Normalize to minimal generators, sorted.
    pub fn from_gens(arity: usize, mut gens: Vec<Exponent>) -> Self {
        for g in &gens {
            assert_eq!(g.arity(), arity);
        }
        gens.sort();
        gens.dedup();
        let keep: Vec<Exponent> = gens
            .iter()
            .filter(|g| !gens.iter().any(|h| h != *g && h.divides(g)))
            .cloned()
            .collect();
        MonomialIdeal { arity, gens: keep }
    }

    pub fn unit(arity: usize) -> Self {
        MonomialIdeal { arity, gens: vec![Exponent::zero(arity)] }
    }

    pub fn zero(arity: usize) -> Self {
        MonomialIdeal { arity, gens: vec![] }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn gens(&self) -> &[Exponent] {
        &self.gens
    }

    pub fn is_unit(&self) -> bool {
        self.gens.iter().any(|g| g.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn contains_exp(&self, u: &Exponent) -> bool {
        self.gens.iter().any(|g| g.divides(u))
    }

    pub fn contains(&self, other: &MonomialIdeal) -> bool {
        other.gens.iter().all(|g| self.contains_exp(g))
    }

    /// Product ideal: pairwise exponent sums, minimalized.
    pub fn product(&self, other: &MonomialIdeal) -> MonomialIdeal {
        let mut sums = Vec::new();
        for a in &self.gens {
            for b in &other.gens {
                sums.push(a.add(b));
            }
        }
        MonomialIdeal::from_gens(self.arity, sums)
    }

    pub fn pow(&self, k: u64) -> MonomialIdeal {
        let mut acc = MonomialIdeal::unit(self.arity);
        for _ in 0..k {
            acc = acc.product(self);
        }
        acc
    }

    pub fn to_ideal_gens(&self, field: PrimeField) -> IdealGens {
        let gens = self
            .gens
            .iter()
            .map(|e| MPoly::monomial(field, e.clone(), 1))
            .collect();
        IdealGens::new(field, self.arity, gens)
    }

    /// Generators rendered grevlex-descending: `x^2, x*y, y^3`.
    pub fn render(&self) -> String {
        if self.gens.is_empty() {
            return "0".to_string();
        }
        let field = PrimeField::new(2).unwrap();
        let mut parts: Vec<String> = self
            .gens
            .iter()
            .rev()
            .map(|e| MPoly::monomial(field, e.clone(), 1).render())
            .collect();
        parts.sort();
        parts.join(", ")
    }
}

/// Minimal generators of an upward-closed exponent region, enumerated inside
/// the box `[0, bound]^arity`. Panics if a minimal generator touches the box
/// boundary, so callers must pass a safe bound.
pub(crate) fn minimal_gens_in_box<F: FnMut(&Exponent) -> bool>(
    arity: usize,
    bound: u64,
    mut member: F,
) -> MonomialIdeal {
    let mut gens: Vec<Exponent> = Vec::new();
    let mut u = vec![0u64; arity];
    'enumerate: loop {
        let e = Exponent(u.clone());
        if member(&e) {
            let minimal = (0..arity).all(|i| {
                if u[i] == 0 {
                    return true;
                }
                let mut v = u.clone();
                v[i] -= 1;
                !member(&Exponent(v))
            });
            if minimal {
                assert!(
                    u.iter().all(|&k| k <= bound),
                    "minimal generator on enumeration boundary"
                );
                gens.push(e);
            }
        }
        // odometer
        for i in 0..arity {
            if u[i] < bound {
                u[i] += 1;
                continue 'enumerate;
            }
            u[i] = 0;
        }
        break;
    }
    MonomialIdeal::from_gens(arity, gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::frac;

    fn ledger(a: &[i64], b: &[i64]) -> DivisorLedger {
        let labels = (0..a.len()).map(|i| format!("E{}", i + 1)).collect();
        DivisorLedger::new(labels, a.to_vec(), b.to_vec()).unwrap()
    }

    #[test]
    fn snc_multiplier_examples() {
        assert_eq!(snc_multiplier(&ledger(&[0, 0], &[1, 1]), &frac(1, 2)), vec![0, 0]);
        assert_eq!(snc_multiplier(&ledger(&[0], &[2]), &frac(1, 1)), vec![-2]);
        assert_eq!(snc_multiplier(&ledger(&[1], &[3]), &frac(2, 3)), vec![-3]);
    }

    #[test]
    fn snc_multiplier_divisor_shift() {
        // adding a Cartier divisor d shifts the output by -d, exactly
        let l = ledger(&[1, 2, 4], &[2, 3, 6]);
        let lam = frac(5, 6);
        let base = snc_multiplier(&l, &lam);
        for d in [-3i64, 1, 7] {
            let shifted = DivisorLedger::new(
                l.labels.clone(),
                l.a.iter().map(|a| a + d).collect(),
                l.b.clone(),
            )
            .unwrap();
            let got = snc_multiplier(&shifted, &lam);
            let expect: Vec<i64> = base.iter().map(|c| c - d).collect();
            assert_eq!(got, expect);
        }
    }

    #[test]
    fn candidates_examples() {
        let c = candidate_jumping_numbers_ledger(&[2, 3], &frac(1, 1));
        assert_eq!(c, vec![frac(1, 3), frac(1, 2), frac(2, 3), frac(1, 1)]);
        let c = candidate_jumping_numbers_ledger(&[1], &frac(3, 1));
        assert_eq!(c, vec![frac(1, 1), frac(2, 1), frac(3, 1)]);
    }

    #[test]
    fn phi_image_examples() {
        // a_i = b'_i gives back -a
        let l = ledger(&[2, -1], &[5, 5]);
        assert_eq!(snc_phi_image(&l, &[2, -1], 1, 3), vec![-2, 1]);
        // a = (0), b' = (p^e - 1): unit ideal, the corner basis element survives
        for (p, e) in [(2u64, 1u32), (3, 2), (7, 1)] {
            let l = ledger(&[0], &[1]);
            assert_eq!(snc_phi_image(&l, &[(p.pow(e) - 1) as i64], e, p), vec![0]);
        }
        // a = (1), b' = (2), p = 2, e = 1: -1 - floor(1/2) = -1
        let l = ledger(&[1], &[9]);
        assert_eq!(snc_phi_image(&l, &[2], 1, 2), vec![-1]);
    }

    #[test]
    fn phi_image_composes() {
        // applying e then e' equals e + e' (iterated trace), by enumeration
        for p in [2u64, 3] {
            for e in 1..=2u32 {
                for ep in 1..=2u32 {
                    for a in -3i64..=3 {
                        for bp in 0i64..=20 {
                            let l = ledger(&[a], &[7]);
                            let first = snc_phi_image(&l, &[bp], e, p);
                            // output sheaf O(sum first_i E_i) feeds back in as
                            // the fractional ideal with b'' = -first
                            let second = snc_phi_image(&l, &[-first[0]], ep, p);
                            let combined = snc_phi_image(&l, &[bp], e + ep, p);
                            assert_eq!(second, combined, "p={p} e={e} e'={ep} a={a} b'={bp}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn snc_test_ideal_examples() {
        // b = (1), lambda = 1/2: unit ideal for any p
        for p in [2u64, 3, 7] {
            let r = snc_test_ideal(&ledger(&[0], &[1]), &frac(1, 2), p, 8).unwrap();
            assert_eq!(r.coefficients, vec![0]);
        }
        // lambda = 0: zero vector
        let r = snc_test_ideal(&ledger(&[0, 0], &[2, 3]), &frac(0, 1), 5, 8).unwrap();
        assert_eq!(r.coefficients, vec![0, 0]);
        // stabilized value is -floor(lambda b) off the candidate set
        let r = snc_test_ideal(&ledger(&[0, 0], &[2, 3]), &frac(5, 6), 7, 8).unwrap();
        assert_eq!(r.coefficients, vec![-1, -2]);
    }

    #[test]
    fn snc_test_ideal_matches_multiplier_off_candidates() {
        let l = ledger(&[0, 0], &[2, 3]);
        let candidates = candidate_jumping_numbers_ledger(&l.b, &frac(2, 1));
        for p in [2u64, 3, 5, 7] {
            for k in 1..=120i64 {
                let lam = frac(k, 60);
                if candidates.contains(&lam) {
                    continue;
                }
                let tau = snc_test_ideal(&l, &lam, p, 12).unwrap();
                assert_eq!(tau.coefficients, snc_multiplier(&l, &lam), "p={p} k={k}");
            }
        }
    }

    #[test]
    fn snc_inclusion_on_grid() {
        // test-ideal side always inside multiplier side: coefficients >=
        // componentwise (deeper sheaf = smaller ideal = more negative)
        for (a, b) in [(vec![0i64, 0], vec![2i64, 3]), (vec![1, 2, 4], vec![2, 3, 6])] {
            let l = ledger(&a, &b);
            for p in [2u64, 3, 5, 7] {
                for k in 1..=120i64 {
                    let lam = frac(k, 60);
                    if let Ok(tau) = snc_test_ideal(&l, &lam, p, 12) {
                        let j = snc_multiplier(&l, &lam);
                        assert!(
                            tau.coefficients.iter().zip(&j).all(|(t, m)| t >= m),
                            "inclusion failed p={p} lambda={k}/60"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn ledger_tsv_roundtrip() {
        let text = "# cusp ledger\nE1\t1\t2\nE2\t2\t3\nE3\t4\t6\n";
        let l = DivisorLedger::parse_tsv(text).unwrap();
        assert_eq!(l.labels, vec!["E1", "E2", "E3"]);
        assert_eq!(l.a, vec![1, 2, 4]);
        assert_eq!(l.b, vec![2, 3, 6]);
        assert!(DivisorLedger::parse_tsv("E1 1\n").is_err());
    }

    #[test]
    fn monomial_ideal_basics() {
        let m = MonomialIdeal::from_gens(
            2,
            vec![
                Exponent(vec![2, 0]),
                Exponent(vec![1, 1]),
                Exponent(vec![2, 1]), // redundant
                Exponent(vec![0, 2]),
            ],
        );
        assert_eq!(m.gens().len(), 3);
        assert!(m.contains_exp(&Exponent(vec![3, 4])));
        assert!(!m.contains_exp(&Exponent(vec![1, 0])));
        let unit = MonomialIdeal::unit(2);
        assert!(unit.contains(&m));
        assert!(!m.contains(&unit));
        assert_eq!(m.render(), "x*y, x^2, y^2");
        // product
        let xy = MonomialIdeal::from_gens(2, vec![Exponent(vec![1, 0]), Exponent(vec![0, 1])]);
        let sq = xy.product(&xy);
        assert_eq!(
            sq.gens(),
            &[
                Exponent(vec![0, 2]),
                Exponent(vec![1, 1]),
                Exponent(vec![2, 0])
            ]
        );
    }
}
