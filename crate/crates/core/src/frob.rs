//! Trace map, Frobenius-root ideals, test ideals, F-pure thresholds and
//! F-jumping detection for principal ideals in `F_p[x_1..x_n]`.
//!
//! The test-ideal sequence `(f^ceil(lambda p^e))^(1/p^e)` is nondecreasing
//! and stabilizes; stabilization is detected by consecutive equality plus a
//! denominator guard, and the result carries a `certified` flag rather than
//! hiding an exhausted budget.

use crate::groebner::{GroebnerError, IdealGens};
use crate::poly::{Exponent, MPoly, PolyFp};
use crate::rat::{self, Fraction};
use crate::ring::PrimeField;
use num::{Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FrobError {
    #[error("input polynomial is zero")]
    ZeroInput,
    #[error("input does not lie in the maximal ideal (x_1..x_n)")]
    InputNotInMaximalIdeal,
    #[error("negative exponent {0} not allowed")]
    NegativeExponent(String),
    #[error("exponent ceil(lambda*p^e) exceeds u64 at e = {0}")]
    ExponentOverflow(u32),
    #[error("test ideal not certified stable within e-budget {0}")]
    Uncertified(u32),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
}

/// The ambient data every operation here acts in: the polynomial ring
/// `F_p[x_1..x_n]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FrobContext {
    pub field: PrimeField,
    pub arity: usize,
}

impl FrobContext {
    pub fn new(field: PrimeField, arity: usize) -> Self {
        FrobContext { field, arity }
    }

    pub fn p(&self) -> u64 {
        self.field.p()
    }

    fn unit_ideal(&self) -> IdealGens {
        IdealGens::unit(self.field, self.arity)
    }
}

/// The trace of `h * du` under the e-th iterated Cartier map: the basis
/// component of `h` at `mu = (p^e-1, .., p^e-1)`. Additive, and semilinear:
/// `trace(g^(p^e) h, e) = g trace(h, e)`.
pub fn trace(h: &PolyFp, e: u32) -> PolyFp {
    assert!(e >= 1, "trace requires e >= 1");
    let q = h.field().p().checked_pow(e).expect("p^e overflow");
    let corner = Exponent(vec![q - 1; h.arity()]);
    h.pe_basis_decompose(e)
        .remove(&corner)
        .unwrap_or_else(|| MPoly::zero(h.field(), h.arity()))
}

/// The Frobenius root `I^(1/p^e)`: the smallest ideal `J` with
/// `I` contained in `J^([p^e])`, generated by all basis components of all
/// generators. Returned with its reduced Groebner basis as generators.
pub fn frobenius_root(i: &IdealGens, e: u32) -> Result<IdealGens, FrobError> {
    assert!(e >= 1, "frobenius_root requires e >= 1");
    let mut parts: Vec<PolyFp> = Vec::new();
    for g in i.gens() {
        for (_, h) in g.pe_basis_decompose(e) {
            parts.push(h);
        }
    }
    Ok(IdealGens::new(i.field(), i.arity(), parts).reduced()?)
}

/// A stabilized test ideal together with where and how the stopping rule
/// fired.
#[derive(Clone, Debug)]
pub struct TestIdealResult {
    pub ideal: IdealGens,
    pub stabilized_at_e: u32,
    pub certified: bool,
}

fn check_lambda(lambda: &Fraction) -> Result<(), FrobError> {
    if lambda.is_negative() {
        return Err(FrobError::NegativeExponent(rat::render_fraction(lambda)));
    }
    Ok(())
}

/// One term of the root sequence: `(f^n)^(1/p^e)`, computed by peeling base-p
/// digits of `n` through the exact identity `(v^p I)^(1/p) = v I^(1/p)` so no
/// intermediate polynomial ever has more than a handful of terms.
pub fn root_sequence_term(ctx: &FrobContext, f: &PolyFp, n: u64, e: u32) -> Result<IdealGens, FrobError> {
    let p = ctx.p();
    let mut m = n;
    let mut j = ctx.unit_ideal();
    for _ in 0..e {
        let d = m % p;
        m /= p;
        let fd = f.pow(d);
        let gens: Vec<PolyFp> = j.gens().iter().map(|g| g.try_mul(&fd).unwrap()).collect();
        j = frobenius_root(&IdealGens::new(ctx.field, ctx.arity, gens), 1)?;
    }
    Ok(j.mul_poly(&f.pow(m)).reduced()?)
}

/// The test ideal `tau(f^lambda)` as the stabilized limit of the
/// nondecreasing sequence `((f^ceil(lambda p^e))^(1/p^e))`.
///
/// Stabilization is declared when two consecutive terms agree and
/// `e >= ceil(log_p(denom(lambda))) + 1`; if the e-budget runs out first the
/// last term is returned with `certified = false`.
pub fn test_ideal(
    ctx: &FrobContext,
    f: &PolyFp,
    lambda: &Fraction,
    e_budget: u32,
) -> Result<TestIdealResult, FrobError> {
    if f.is_zero() {
        return Err(FrobError::ZeroInput);
    }
    check_lambda(lambda)?;
    if lambda.is_zero() {
        return Ok(TestIdealResult { ideal: ctx.unit_ideal(), stabilized_at_e: 1, certified: true });
    }
    let p = ctx.p();
    let guard = rat::ceil_log(p, rat::denom_u64(lambda)) + 1;
    let mut history: Vec<IdealGens> = Vec::new();
    for e in 1..=e_budget.max(2) {
        let n = rat::ceil_mul_pow(lambda, p, e)
            .to_u64()
            .ok_or(FrobError::ExponentOverflow(e))?;
        let tau_e = root_sequence_term(ctx, f, n, e)?;
        if let Some(prev) = history.last() {
            assert!(
                tau_e.contains(prev)?,
                "test-ideal sequence failed to be nondecreasing at e = {e}"
            );
            if prev.equals(&tau_e)? && e >= guard {
                // walk back to the first index already carrying the value
                let mut first = e - 1;
                for (idx, old) in history.iter().enumerate().rev().skip(1) {
                    if old.equals(&tau_e)? {
                        first = idx as u32 + 1;
                    } else {
                        break;
                    }
                }
                return Ok(TestIdealResult { ideal: tau_e, stabilized_at_e: first, certified: true });
            }
        }
        history.push(tau_e);
    }
    let budget = e_budget.max(2);
    Ok(TestIdealResult {
        ideal: history.pop().unwrap(),
        stabilized_at_e: budget,
        certified: false,
    })
}

/// Largest `r >= 0` with `f^r` outside `(x_1^(p^e), .., x_n^(p^e))`.
/// Monotone: `nu(e+1) >= p * nu(e)`.
pub fn nu_value(ctx: &FrobContext, f: &PolyFp, e: u32) -> Result<u64, FrobError> {
    if f.is_zero() {
        return Err(FrobError::ZeroInput);
    }
    if f.constant_term().is_some() {
        return Err(FrobError::InputNotInMaximalIdeal);
    }
    let q = ctx.p().checked_pow(e).expect("p^e overflow");
    // normal form modulo (x_i^q): drop every term with some exponent >= q
    let truncate = |g: &PolyFp| -> PolyFp {
        MPoly::from_terms(
            ctx.field,
            ctx.arity,
            g.terms()
                .filter(|(ex, _)| ex.0.iter().all(|&k| k < q))
                .map(|(ex, c)| (ex.clone(), *c)),
        )
    };
    let bound = ctx.arity as u64 * (q - 1) + 1;
    let mut g = MPoly::one(ctx.field, ctx.arity);
    for r in 1..=bound {
        g = truncate(&g.try_mul(f).unwrap());
        if g.is_zero() {
            return Ok(r - 1);
        }
    }
    unreachable!("f in the maximal ideal forces f^(n(q-1)+1) into m^[q]")
}

/// Bracket the F-pure threshold: the half-open interval
/// `(nu(e_max)/p^e_max, (nu(e_max)+1)/p^e_max]` containing it.
pub fn fpt_interval(ctx: &FrobContext, f: &PolyFp, e_max: u32) -> Result<(Fraction, Fraction), FrobError> {
    let nu = nu_value(ctx, f, e_max)?;
    let q = Fraction::from_integer(rat::pow_u64(ctx.p(), e_max));
    let lower = Fraction::from_integer(nu.into()) / q.clone();
    let upper = Fraction::from_integer((nu + 1).into()) / q;
    Ok((lower, upper))
}

/// An fpt bracket plus, when a small-denominator candidate inside the
/// interval is confirmed to be the first jump, that exact value.
#[derive(Clone, Debug)]
pub struct FptReport {
    pub lower: Fraction,
    pub upper: Fraction,
    pub exact: Option<Fraction>,
}

/// Certify an exact fpt candidate: the smallest-denominator rational in the
/// interval (denominator capped) such that the test ideal jumps at it while
/// `tau` at the interval bottom is still the unit ideal.
pub fn fpt_certify(
    ctx: &FrobContext,
    f: &PolyFp,
    e_max: u32,
    denom_cap: u64,
    e_budget: u32,
) -> Result<FptReport, FrobError> {
    let (lower, upper) = fpt_interval(ctx, f, e_max)?;
    let mut exact = None;
    'search: for d in 1..=denom_cap {
        let di = Fraction::from_integer(d.into());
        let c = (lower.clone() * di.clone()).floor().to_integer() + 1;
        let xi = Fraction::from_integer(c) / di;
        if xi <= upper {
            let gap = xi.clone() - lower.clone();
            if test_ideal(ctx, f, &lower, e_budget)?.ideal.is_unit_ideal()?
                && jumps_at(ctx, f, &xi, &gap, e_budget)?
            {
                exact = Some(xi);
            }
            break 'search;
        }
    }
    Ok(FptReport { lower, upper, exact })
}

/// Does the test ideal drop somewhere in `(lambda - delta, lambda]`? The
/// caller chooses `delta` below the relevant candidate gap.
pub fn jumps_at(
    ctx: &FrobContext,
    f: &PolyFp,
    lambda: &Fraction,
    delta: &Fraction,
    e_budget: u32,
) -> Result<bool, FrobError> {
    if !(delta > &Fraction::zero() && delta < lambda) {
        return Err(FrobError::Precondition(format!(
            "need 0 < delta < lambda, got delta = {}, lambda = {}",
            rat::render_fraction(delta),
            rat::render_fraction(lambda)
        )));
    }
    let left = test_ideal(ctx, f, &(lambda - delta), e_budget)?;
    let right = test_ideal(ctx, f, lambda, e_budget)?;
    if !left.certified || !right.certified {
        return Err(FrobError::Uncertified(e_budget));
    }
    Ok(!left.ideal.equals(&right.ideal)?)
}

/// `f * tau(f^(lambda-1))` for `lambda >= 1`; by Skoda's theorem for test
/// ideals this equals `tau(f^lambda)`, asserted in the property tests rather
/// than assumed here.
pub fn skoda_shift(
    ctx: &FrobContext,
    f: &PolyFp,
    lambda: &Fraction,
    e_budget: u32,
) -> Result<IdealGens, FrobError> {
    if lambda < &Fraction::from_integer(1.into()) {
        return Err(FrobError::Precondition(format!(
            "skoda_shift needs lambda >= 1, got {}",
            rat::render_fraction(lambda)
        )));
    }
    let prev = test_ideal(ctx, f, &(lambda - Fraction::from_integer(1.into())), e_budget)?;
    Ok(prev.ideal.mul_poly(f))
}
