//! Newton polyhedra of monomial ideals and the invariants read off them.
//!
//! Facets are found by exhaustive candidate enumeration (subsets of
//! generators completed by coordinate recession directions) with exact
//! integer verification; arity is capped at three, which covers every
//! desk-scale target without a convex-hull dependency.
//!
//! The membership convention for the multiplier ideal is strict inequality
//! on every stored facet: `u` belongs to the ideal at exponent `lambda`
//! exactly when `<v, u + 1> > lambda * c` for each facet `(v, c)`. Facets
//! with `c = 0` never exclude anything and are dropped. The convention is
//! pinned by the principal-monomial cross-check against the ledger calculus.

use super::{candidates_from_constants, minimal_gens_in_box, MonomialIdeal, MultError};
use crate::poly::Exponent;
use crate::rat::{self, Fraction};
use num::{Signed, ToPrimitive, Zero};

/// The supporting inequality `<normal, u> >= constant` with a primitive
/// nonnegative integer normal and positive constant.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Facet {
    pub normal: Vec<i64>,
    pub constant: i64,
}

/// Newton polyhedron of a monomial ideal: convex hull of the generator
/// exponents plus the nonnegative orthant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolyhedron {
    arity: usize,
    generators: Vec<Exponent>,
    facets: Vec<Facet>,
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Primitive integer vector orthogonal to the rows, for arity <= 3 and
/// exactly `arity - 1` rows. `None` when the rows are dependent.
fn nullspace_vector(arity: usize, rows: &[Vec<i64>]) -> Option<Vec<i64>> {
    let v: Vec<i64> = match arity {
        1 => vec![1],
        2 => {
            let r = &rows[0];
            if r[0] == 0 && r[1] == 0 {
                return None;
            }
            vec![r[1], -r[0]]
        }
        3 => {
            let (r, s) = (&rows[0], &rows[1]);
            vec![
                r[1] * s[2] - r[2] * s[1],
                r[2] * s[0] - r[0] * s[2],
                r[0] * s[1] - r[1] * s[0],
            ]
        }
        _ => unreachable!(),
    };
    if v.iter().all(|&x| x == 0) {
        return None;
    }
    let g = v.iter().copied().fold(0, gcd);
    let mut v: Vec<i64> = v.into_iter().map(|x| x / g).collect();
    if v.iter().all(|&x| x <= 0) {
        for x in &mut v {
            *x = -*x;
        }
    }
    if v.iter().any(|&x| x < 0) {
        return None;
    }
    Some(v)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Build the Newton polyhedron of the given generator exponents.
pub fn newton_polyhedron(gens: &[Exponent]) -> Result<NewtonPolyhedron, MultError> {
    assert!(!gens.is_empty(), "newton_polyhedron needs at least one generator");
    let arity = gens[0].arity();
    if arity > 3 {
        return Err(MultError::ArityTooLarge(arity));
    }
    let mut generators: Vec<Exponent> = gens.to_vec();
    for g in &generators {
        assert_eq!(g.arity(), arity);
    }
    generators.sort();
    generators.dedup();

    let pts: Vec<Vec<i64>> = generators
        .iter()
        .map(|e| e.0.iter().map(|&k| k as i64).collect())
        .collect();

    let mut facets: Vec<Facet> = Vec::new();
    for k in 1..=arity.min(pts.len()) {
        let axis_count = arity - k;
        for gen_set in subsets(pts.len(), k) {
            for axes in subsets(arity, axis_count) {
                let mut rows: Vec<Vec<i64>> = Vec::new();
                for &gi in gen_set.iter().skip(1) {
                    let base = &pts[gen_set[0]];
                    rows.push(pts[gi].iter().zip(base).map(|(a, b)| a - b).collect());
                }
                for &ax in &axes {
                    let mut r = vec![0i64; arity];
                    r[ax] = 1;
                    rows.push(r);
                }
                let Some(v) = nullspace_vector(arity, &rows) else {
                    continue;
                };
                let c = pts
                    .iter()
                    .map(|p| p.iter().zip(&v).map(|(a, b)| a * b).sum::<i64>())
                    .min()
                    .unwrap();
                if c > 0 {
                    facets.push(Facet { normal: v, constant: c });
                }
            }
        }
    }
    facets.sort();
    facets.dedup();
    // every generator satisfies every facet, each facet supporting
    for f in &facets {
        for p in &pts {
            let dot: i64 = p.iter().zip(&f.normal).map(|(a, b)| a * b).sum();
            assert!(dot >= f.constant);
        }
    }
    Ok(NewtonPolyhedron { arity, generators, facets })
}

impl NewtonPolyhedron {
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn generators(&self) -> &[Exponent] {
        &self.generators
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// Is `u + (1,..,1)` in the strict interior of `lambda * P`?
    pub fn strict_interior_shifted(&self, u: &Exponent, lambda: &Fraction) -> bool {
        self.facets.iter().all(|f| {
            let dot: i64 = f
                .normal
                .iter()
                .zip(&u.0)
                .map(|(v, &k)| v * (k as i64 + 1))
                .sum();
            Fraction::from_integer(dot.into()) > lambda * Fraction::from_integer(f.constant.into())
        })
    }
}

/// The multiplier ideal of the monomial ideal at exponent `lambda`,
/// evaluated on the toric resolution: minimal monomial generators of
/// `{u : u + 1 strictly inside lambda P}`.
pub fn multiplier_ideal_monomial(p: &NewtonPolyhedron, lambda: &Fraction) -> MonomialIdeal {
    assert!(!lambda.is_negative(), "lambda must be >= 0");
    let max_c = p.facets.iter().map(|f| f.constant).max().unwrap_or(0);
    let bound = (lambda * Fraction::from_integer(max_c.into()))
        .ceil()
        .to_integer()
        .to_u64()
        .expect("box bound overflow")
        + 1;
    minimal_gens_in_box(p.arity, bound, |u| p.strict_interior_shifted(u, lambda))
}

/// Candidate jumping numbers read off the facet constants; an
/// over-approximation of the actual jump set.
pub fn candidate_jumping_numbers_polyhedron(
    p: &NewtonPolyhedron,
    bound: &Fraction,
) -> Vec<Fraction> {
    candidates_from_constants(p.facets.iter().map(|f| f.constant as u64), bound)
}

fn floor_div(a: i128, b: i128) -> i128 {
    debug_assert!(b != 0);
    let q = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

fn ceil_div(a: i128, b: i128) -> i128 {
    -floor_div(-a, b)
}

/// Is there an integer assignment `n_j >= 0`, `sum n_j = total`, with
/// `sum n_j u_j <= w` componentwise? This is membership of `x^w` in the
/// `total`-th power of the monomial ideal. Exact for up to two generators
/// and for axis-supported generator sets; otherwise a guarded search.
fn power_member(gens: &[Vec<i128>], total: i128, w: &[i128], budget: &mut i64) -> Result<bool, MultError> {
    if w.iter().any(|&x| x < 0) {
        return Ok(false);
    }
    if gens.iter().any(|g| g.iter().all(|&x| x == 0)) {
        return Ok(true); // unit ideal
    }
    if total == 0 {
        return Ok(true);
    }
    match gens.len() {
        0 => Ok(false),
        1 => Ok(gens[0].iter().zip(w).all(|(&u, &wi)| total * u <= wi)),
        2 => Ok(two_gen_feasible(&gens[0], &gens[1], total, w)),
        _ => {
            // axis-supported: every generator a multiple of one coordinate
            if gens.iter().all(|g| g.iter().filter(|&&x| x > 0).count() == 1) {
                let n = w.len();
                let mut best = vec![i128::MAX; n];
                for g in gens {
                    let i = g.iter().position(|&x| x > 0).unwrap();
                    best[i] = best[i].min(g[i]);
                }
                let mut cap: i128 = 0;
                for i in 0..n {
                    if best[i] != i128::MAX {
                        cap = cap.saturating_add(w[i] / best[i]);
                    }
                }
                return Ok(cap >= total);
            }
            // guarded search on the most constrained generator
            let (j, ub) = gens
                .iter()
                .enumerate()
                .map(|(j, g)| {
                    let ub = g
                        .iter()
                        .zip(w)
                        .filter(|(&u, _)| u > 0)
                        .map(|(&u, &wi)| wi / u)
                        .min()
                        .unwrap_or(total)
                        .min(total);
                    (j, ub)
                })
                .min_by_key(|&(_, ub)| ub)
                .unwrap();
            let rest: Vec<Vec<i128>> = gens
                .iter()
                .enumerate()
                .filter_map(|(t, g)| (t != j).then(|| g.clone()))
                .collect();
            for nj in 0..=ub {
                *budget -= 1;
                if *budget < 0 {
                    return Err(MultError::ResourceExceeded(
                        "monomial power membership search".into(),
                    ));
                }
                let w2: Vec<i128> = w.iter().zip(&gens[j]).map(|(&wi, &u)| wi - nj * u).collect();
                if power_member(&rest, total - nj, &w2, budget)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
    }
}

fn two_gen_feasible(u: &[i128], v: &[i128], total: i128, w: &[i128]) -> bool {
    // n * u + (total - n) * v <= w for some integer n in [0, total]
    let mut lo: i128 = 0;
    let mut hi: i128 = total;
    for i in 0..w.len() {
        let d = u[i] - v[i];
        let rhs = w[i] - total * v[i];
        if d > 0 {
            hi = hi.min(floor_div(rhs, d));
        } else if d < 0 {
            lo = lo.max(ceil_div(rhs, d));
        } else if rhs < 0 {
            return false;
        }
    }
    lo <= hi
}

/// A stabilized monomial test ideal.
#[derive(Clone, Debug)]
pub struct MonomialTestIdeal {
    pub ideal: MonomialIdeal,
    pub stabilized_at_e: u32,
    pub certified: bool,
}

/// The test ideal of a monomial ideal, combinatorially: the e-th term of
/// the root sequence contains `v` exactly when the box corner
/// `p^e v + (p^e - 1)(1,..,1)` lies in the `ceil(lambda p^e)`-th power of
/// the ideal. Stopping rule mirrors the principal-ideal one.
pub fn monomial_test_ideal(
    gens: &[Exponent],
    lambda: &Fraction,
    p: u64,
    e_budget: u32,
) -> Result<MonomialTestIdeal, MultError> {
    assert!(!gens.is_empty());
    let arity = gens[0].arity();
    if lambda.is_negative() {
        return Err(MultError::NegativeExponent(rat::render_fraction(lambda)));
    }
    if lambda.is_zero() {
        return Ok(MonomialTestIdeal {
            ideal: MonomialIdeal::unit(arity),
            stabilized_at_e: 1,
            certified: true,
        });
    }
    let igens: Vec<Vec<i128>> = gens
        .iter()
        .map(|e| e.0.iter().map(|&k| k as i128).collect())
        .collect();
    let max_u = igens
        .iter()
        .flat_map(|g| g.iter().copied())
        .max()
        .unwrap_or(0) as i64;
    let bound = (lambda * rat::frac_int(max_u))
        .ceil()
        .to_integer()
        .to_u64()
        .expect("bound overflow")
        + max_u as u64
        + 2;

    let guard = rat::ceil_log(p, rat::denom_u64(lambda)) + 1;
    let mut prev: Option<MonomialIdeal> = None;
    for e in 1..=e_budget.max(2) {
        let n = rat::ceil_mul_pow(lambda, p, e)
            .to_i128()
            .ok_or(MultError::ResourceExceeded("p^e exponent overflow".into()))?;
        let q = (p as i128).pow(e);
        let mut failed: Option<MultError> = None;
        let tau_e = minimal_gens_in_box(arity, bound, |v| {
            if failed.is_some() {
                return false;
            }
            let corner: Vec<i128> = v.0.iter().map(|&k| q * k as i128 + q - 1).collect();
            let mut budget = 200_000i64;
            match power_member(&igens, n, &corner, &mut budget) {
                Ok(b) => b,
                Err(e) => {
                    failed = Some(e);
                    false
                }
            }
        });
        if let Some(e) = failed {
            return Err(e);
        }
        if let Some(ref prev_ideal) = prev {
            assert!(
                tau_e.contains(prev_ideal),
                "monomial test-ideal sequence failed to be nondecreasing at e = {e}"
            );
            if *prev_ideal == tau_e && e >= guard {
                return Ok(MonomialTestIdeal { ideal: tau_e, stabilized_at_e: e - 1, certified: true });
            }
        }
        prev = Some(tau_e);
    }
    Ok(MonomialTestIdeal {
        ideal: prev.unwrap(),
        stabilized_at_e: e_budget.max(2),
        certified: false,
    })
}
