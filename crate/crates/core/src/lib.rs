//! Explicit diophantine polynomial constructions over arbitrary-precision
//! integers.
//!
//! The crate builds and machine-checks the classical chain of constructions
//! that leads from Pell-equation solution sequences to small prime-representing
//! polynomials:
//!
//! * [`poly`] / [`dag`] — sparse multivariate polynomial arithmetic over
//!   `BigInt`, plus an expression DAG for compositions too large to expand.
//! * [`pell`] — Lucas solution sequences of `x^2 - (a^2-1)y^2 = 1` and the
//!   Matiyasevich–Robinson witness system that characterizes `C = psi_a(B)`.
//! * [`signprod`] — the sign-product polynomial `J_n` (the expanded product of
//!   `r1 ± r2 ± ... ± rn` over all sign choices) and the square-root
//!   elimination check built on it.
//! * [`kpoly`] — the `K1 -> K2 -> K` specializations of `J_4` that fold three
//!   squareness conditions, one divisibility, and one sign condition into the
//!   root existence of a single polynomial.
//! * [`primecompile`] — the relation-to-sum-of-squares compiler, the explicit
//!   26-variable prime polynomial, and the 10-variable prime polynomial
//!   assembled from `K`.
//! * [`verify`] — the desk-scale verification suites (exhaustive grids and
//!   seeded sampling) behind the `verify` CLI subcommand.
//!
//! All core arithmetic is exact: integers are `num_bigint::BigInt`, rationals
//! are `num_rational::BigRational`, and no floating point enters any identity
//! check.

pub mod arith;
pub mod dag;
pub mod kpoly;
pub mod pell;
pub mod poly;
pub mod primecompile;
pub mod report;
pub mod serial;
pub mod signprod;
pub mod verify;

pub use arith::{is_square, isqrt};
pub use dag::{DagBuilder, ExprDag, NodeId};
pub use poly::{Monomial, PolyError, PolyStats, Polynomial};
pub use report::{CheckResult, VerificationReport};
