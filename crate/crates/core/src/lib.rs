//! Exact computation of positive-characteristic and characteristic-zero
//! singularity invariants of polynomial data.
//!
//! The library is organized around a small exact-arithmetic core and the
//! invariants built on top of it:
//!
//! - [`ring`], [`poly`]: prime fields, exact rationals, and sparse
//!   multivariate polynomials with the `p^e`-basis decomposition.
//! - [`groebner`]: a minimal Buchberger engine over `F_p` providing ideal
//!   membership and equality decisions.
//! - [`frob`]: trace map, Frobenius-root ideals, test ideals, F-pure
//!   thresholds and F-jumping detection for principal ideals.
//! - [`mult`]: multiplier ideals of monomial ideals via Newton polyhedra,
//!   simple-normal-crossings ledger calculus, and candidate jumping numbers.
//! - [`plinear`]: p-linear maps over finite fields, Fitting decompositions
//!   and semisimplicity tests.
//! - [`curves`]: Cartier-Manin matrices of odd-degree hyperelliptic curves
//!   and ordinarity scans over primes.
//! - [`harness`]: batch comparison of test ideals against reduced multiplier
//!   ideals across many primes, with deterministic TSV reporting.

pub mod curves;
pub mod frob;
pub mod groebner;
pub mod harness;
pub mod mult;
pub mod parse;
pub mod plinear;
pub mod poly;
pub mod rat;
pub mod ring;

pub use poly::{Exponent, MPoly};
pub use rat::Fraction;
pub use ring::{PrimeField, Rationals};
