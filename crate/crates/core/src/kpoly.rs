//! The `K1 -> K2 -> K` construction chain.
//!
//! `K1(y, x1, x2, x3)` is `J_4` evaluated on the squares
//! `(y^2, x1, 4 x2, 16 x3)`: an integer polynomial whose integer roots in
//! `y` exist exactly when `x1, x2, x3` are all perfect squares (given odd
//! `x1, x2`).
//!
//! `K2(y, x1, x2, x3, p, r)` clears the denominator of the shift
//! `y := y - r/p`: collect `K1(y - z, ...)` by powers of `z` and replace
//! `z^a` by `r^a p^(8-a)`, so that `K2 = p^8 * K1(y - r/p, ...)` holds as an
//! exact rational identity for every `p != 0`. A zero of `K2` over naturals
//! with `p > 0` then forces `p | r`.
//!
//! `K(y, x1, x2, x3, p, r, n, v) = K2(y - n*v, ...)` adds the shift that
//! forces `v >= 0`: with `n` above the root bound, a natural root `y` exists
//! iff `x1, x2, x3` are squares, `p | r`, and `v >= 0`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::arith::{is_square, isqrt};
use crate::poly::{monomial, Polynomial};
use crate::signprod::build_j;

/// Slot order of `K`: `(y, x1, x2, x3, p, r, n, v)`.
///
/// The `r` slot here is an ordinary composition slot; in the 10-variable
/// build it receives a large divisibility numerator while a distinct base
/// unknown also named `r` feeds the auxiliary quantities. Keeping slots
/// positional prevents any capture between the two.
pub const K_SLOTS: [&str; 8] = ["y", "x1", "x2", "x3", "p", "r", "n", "v"];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KError {
    #[error(
        "preconditions violated: need odd x1, odd x2, p > 0, n >= isqrt(x1)+2*isqrt(x2)+4*isqrt(x3)+r+1 \
         (got x1={x1}, x2={x2}, x3={x3}, p={p}, r={r}, n={n})"
    )]
    Precondition { x1: u64, x2: u64, x3: u64, p: u64, r: u64, n: u64 },
}

/// The three polynomials of the chain, built once and shared.
#[derive(Debug, Clone)]
pub struct KFamily {
    k1: Polynomial,
    k2: Polynomial,
    k: Polynomial,
}

impl KFamily {
    pub fn new() -> Self {
        let k1 = build_k1();
        let k2 = build_k2(&k1);
        let k = build_k(&k2);
        KFamily { k1, k2, k }
    }

    /// Arity 4: `(y, x1, x2, x3)`.
    pub fn k1(&self) -> &Polynomial {
        &self.k1
    }

    /// Arity 6: `(y, x1, x2, x3, p, r)`.
    pub fn k2(&self) -> &Polynomial {
        &self.k2
    }

    /// Arity 8: `(y, x1, x2, x3, p, r, n, v)`.
    pub fn k(&self) -> &Polynomial {
        &self.k
    }
}

impl Default for KFamily {
    fn default() -> Self {
        Self::new()
    }
}

/// Expands `J_4` on the squares `(y^2, x1, 4 x2, 16 x3)`. Every exponent of
/// `J_4` is even, so slot 1 turns into even powers of the variable `y` (the
/// sign of the paper's `-y` is immaterial) and the other slots into plain
/// powers of `x1, x2, x3` with the `4^t`/`16^t` factors folded into the
/// coefficients.
pub fn build_k1() -> Polynomial {
    let j4 = build_j(4).expect("4 is within the cap");
    let terms = j4.poly().terms().iter().map(|m| {
        let ey = m.exponents[0];
        let e1 = m.exponents[1] / 2;
        let e2 = m.exponents[2] / 2;
        let e3 = m.exponents[3] / 2;
        let coeff = &m.coefficient * BigInt::from(4).pow(e2) * BigInt::from(16).pow(e3);
        (coeff, vec![ey, e1, e2, e3])
    });
    let k1 = Polynomial::from_terms(4, terms).expect("arity 4 terms");
    debug_assert!(k1.terms().iter().all(|m| m.exponents[0] % 2 == 0));
    k1
}

/// Collects `K1(y - z, x1, x2, x3)` by powers of `z` (all `<= 8`) and maps
/// `z^a` to `r^a * p^(8-a)`. The exponent orientation is fixed by the
/// defining identity `K2 = p^8 * K1(y - r/p, ...)`: at `(p, r) = (1, 0)`
/// only the `a = 0` coefficient survives and must reproduce `K1`.
pub fn build_k2(k1: &Polynomial) -> Polynomial {
    // K1(y - z, ...) over (y, x1, x2, x3, z)
    let y_minus_z = monomial(5, 1, &[(0, 1)])
        .sub(&monomial(5, 1, &[(4, 1)]))
        .expect("arity 5");
    let shifted = k1
        .substitute(&HashMap::from([(0usize, y_minus_z)]), 5)
        .expect("shift substitution");
    let by_z = shifted.coefficients_in(4).expect("z is variable 4");
    assert!(by_z.len() <= 9, "z-degree must stay <= 8");

    let mut terms: Vec<(BigInt, Vec<u32>)> = Vec::new();
    for (alpha, coeff_poly) in by_z.iter().enumerate() {
        let alpha = alpha as u32;
        for m in coeff_poly.terms() {
            debug_assert_eq!(m.exponents[4], 0);
            let e = vec![
                m.exponents[0],
                m.exponents[1],
                m.exponents[2],
                m.exponents[3],
                8 - alpha, // p
                alpha,     // r
            ];
            terms.push((m.coefficient.clone(), e));
        }
    }
    Polynomial::from_terms(6, terms).expect("arity 6 terms")
}

/// `K = K2` composed with `y := y - n*v` over the eight slots.
pub fn build_k(k2: &Polynomial) -> Polynomial {
    let y_minus_nv = monomial(8, 1, &[(0, 1)])
        .sub(&monomial(8, 1, &[(6, 1), (7, 1)]))
        .expect("arity 8");
    k2.substitute(&HashMap::from([(0usize, y_minus_nv)]), 8)
        .expect("shift substitution")
}

/// Bound on `|y|` for any root of `K1(., x1, x2, x3)`: every root is a
/// signed sum `±sqrt(x1) ± 2 sqrt(x2) ± 4 sqrt(x3)`.
pub fn k1_root_bound(x1: u64, x2: u64, x3: u64) -> u64 {
    let s = |v: u64| u64::try_from(&isqrt(&BigInt::from(v))).expect("isqrt of u64 fits");
    s(x1) + 2 * s(x2) + 4 * s(x3) + 1
}

/// Scans `y` from the root bound downwards (both signs included) for an
/// integer root of `K1`. When `x1, x2, x3` are all perfect squares the
/// scan returns `sqrt(x1) + 2 sqrt(x2) + 4 sqrt(x3)`, the largest root.
pub fn k1_exists_y(k1: &Polynomial, x1: u64, x2: u64, x3: u64) -> Option<BigInt> {
    let bound = k1_root_bound(x1, x2, x3) as i64;
    let xs = [BigInt::from(x1), BigInt::from(x2), BigInt::from(x3)];
    for y in (-bound..=bound).rev() {
        let point = [BigInt::from(y), xs[0].clone(), xs[1].clone(), xs[2].clone()];
        if k1.evaluate(&point).expect("arity 4 point").is_zero() {
            return Some(BigInt::from(y));
        }
    }
    None
}

/// Smallest `n` accepted by [`k_equivalence_check`]. Integer strengthening
/// of the real root bound `sqrt(x1) + 2 sqrt(x2) + 4 sqrt(x3) + r`: once a
/// rational root exists the parity conditions force integer square roots,
/// so `isqrt` bounds them exactly.
pub fn k_min_n(x1: u64, x2: u64, x3: u64, r: u64) -> u64 {
    k1_root_bound(x1, x2, x3) + r
}

/// Outcome of the root-existence check against the five-fold condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KEquivalence {
    /// Bounded scan over natural `y` found a root of `K`.
    pub exists_y: bool,
    /// `x1, x2, x3` all squares, `p | r`, and `v >= 0`, each checked directly.
    pub rhs: bool,
    pub y: Option<u64>,
}

/// Checks both sides of the equivalence at one grid point. `exists_y` comes
/// from a bounded scan over `y in [0, n(|v|+1) + r + rootbound]`, evaluating
/// the expanded `K`; `rhs` is computed arithmetically. The two must agree
/// whenever the preconditions hold.
pub fn k_equivalence_check(
    k: &Polynomial,
    x1: u64,
    x2: u64,
    x3: u64,
    p: u64,
    r: u64,
    n: u64,
    v: i64,
) -> Result<KEquivalence, KError> {
    if x1 % 2 == 0 || x2 % 2 == 0 || p == 0 || n < k_min_n(x1, x2, x3, r) {
        return Err(KError::Precondition { x1, x2, x3, p, r, n });
    }
    let rhs = is_square(&BigInt::from(x1))
        && is_square(&BigInt::from(x2))
        && is_square(&BigInt::from(x3))
        && r % p == 0
        && v >= 0;

    let y_max = n * (v.unsigned_abs() + 1) + r + k1_root_bound(x1, x2, x3);
    let mut point = [
        BigInt::zero(),
        BigInt::from(x1),
        BigInt::from(x2),
        BigInt::from(x3),
        BigInt::from(p),
        BigInt::from(r),
        BigInt::from(n),
        BigInt::from(v),
    ];
    let mut found = None;
    for y in 0..=y_max {
        point[0] = BigInt::from(y);
        if k.evaluate(&point).expect("arity 8 point").is_zero() {
            found = Some(y);
            break;
        }
    }
    Ok(KEquivalence { exists_y: found.is_some(), rhs, y: found })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signprod::sign_product_eval;
    use num_traits::One;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn family() -> KFamily {
        KFamily::new()
    }

    #[test]
    fn k1_has_even_y_powers_up_to_8() {
        let k1 = build_k1();
        let max_y = k1.terms().iter().map(|m| m.exponents[0]).max().unwrap();
        assert_eq!(max_y, 8);
        assert!(k1.terms().iter().all(|m| m.exponents[0] % 2 == 0));
    }

    #[test]
    fn k1_matches_sign_product_on_squares() {
        let k1 = build_k1();
        // K1(y, a^2, b^2, c^2) equals the literal product over (y, a, 2b, 4c).
        for (y, a, b, c) in [(7i64, 1i64, 1i64, 1i64), (3, 2, 1, 0), (-5, 3, 2, 1), (0, 0, 0, 0)] {
            let lhs = k1
                .evaluate(&[big(y), big(a * a), big(b * b), big(c * c)])
                .unwrap();
            let rhs = sign_product_eval(&[big(y), big(a), big(2 * b), big(4 * c)]);
            assert_eq!(lhs, rhs, "at y={y}, squares ({a},{b},{c})^2");
        }
    }

    #[test]
    fn k1_root_examples() {
        let k1 = build_k1();
        // y = 1 + 2 + 4 is a root when all of x1, x2, x3 are 1.
        assert!(k1.evaluate(&[big(7), big(1), big(1), big(1)]).unwrap().is_zero());
        assert!(k1.evaluate(&[big(0), big(0), big(0), big(0)]).unwrap().is_zero());
        // 3 is not a square: no root for any |y| <= 7.
        for y in -7i64..=7 {
            assert!(!k1.evaluate(&[big(y), big(3), big(1), big(1)]).unwrap().is_zero());
        }
    }

    #[test]
    fn k1_exists_y_examples() {
        let k1 = build_k1();
        assert_eq!(k1_exists_y(&k1, 1, 1, 1), Some(big(7)));
        assert_eq!(k1_exists_y(&k1, 9, 25, 4), Some(big(3 + 10 + 8)));
        assert_eq!(k1_exists_y(&k1, 3, 1, 1), None);
    }

    #[test]
    fn k2_specializes_to_k1_at_p1_r0() {
        let f = family();
        for (y, x1, x2, x3) in [(0i64, 1i64, 2i64, 3i64), (5, 4, 0, 9), (-3, 7, 7, 7)] {
            let v2 = f
                .k2()
                .evaluate(&[big(y), big(x1), big(x2), big(x3), big(1), big(0)])
                .unwrap();
            let v1 = f.k1().evaluate(&[big(y), big(x1), big(x2), big(x3)]).unwrap();
            assert_eq!(v2, v1);
        }
    }

    #[test]
    fn k2_clearing_examples() {
        let f = family();
        // 2^8 * K1(7,1,1,1) = 0
        let v = f
            .k2()
            .evaluate(&[big(7), big(1), big(1), big(1), big(2), big(0)])
            .unwrap();
        assert!(v.is_zero());
        // shift by r/p = 1: K2(8, ..., 1, 1) = K1(7, ...) = 0
        let v = f
            .k2()
            .evaluate(&[big(8), big(1), big(1), big(1), big(1), big(1)])
            .unwrap();
        assert!(v.is_zero());
    }

    #[test]
    fn k_at_v0_equals_k2_as_polynomials() {
        let f = family();
        let zero_v = HashMap::from([(7usize, Polynomial::zero(8))]);
        let k_v0 = f.k().substitute(&zero_v, 8).unwrap();
        let k2_lifted = f.k2().substitute(&HashMap::new(), 8).unwrap();
        assert_eq!(k_v0, k2_lifted);
    }

    #[test]
    fn k_shift_inverts() {
        let f = family();
        for (y, x1, x2, x3, p, r, n, v) in
            [(3i64, 1i64, 2i64, 3i64, 2i64, 1i64, 9i64, 2i64), (0, 5, 5, 5, 1, 0, 11, -3)]
        {
            let k_at = f
                .k()
                .evaluate(&[
                    big(y + n * v),
                    big(x1),
                    big(x2),
                    big(x3),
                    big(p),
                    big(r),
                    big(n),
                    big(v),
                ])
                .unwrap();
            let k2_at = f
                .k2()
                .evaluate(&[big(y), big(x1), big(x2), big(x3), big(p), big(r)])
                .unwrap();
            assert_eq!(k_at, k2_at);
        }
    }

    #[test]
    fn k_root_example() {
        let f = family();
        let v = f
            .k()
            .evaluate(&[big(7), big(1), big(1), big(1), big(1), big(0), big(8), big(0)])
            .unwrap();
        assert!(v.is_zero());
    }

    #[test]
    fn equivalence_check_examples() {
        let f = family();
        let r = k_equivalence_check(f.k(), 1, 1, 1, 1, 0, 8, 0).unwrap();
        assert_eq!(r, KEquivalence { exists_y: true, rhs: true, y: Some(7) });

        let r = k_equivalence_check(f.k(), 1, 1, 1, 1, 0, 8, -1).unwrap();
        assert_eq!((r.exists_y, r.rhs), (false, false));

        let r = k_equivalence_check(f.k(), 1, 1, 1, 2, 1, 9, 0).unwrap();
        assert_eq!((r.exists_y, r.rhs), (false, false));
    }

    #[test]
    fn equivalence_check_rejects_bad_preconditions() {
        let f = family();
        assert!(k_equivalence_check(f.k(), 2, 1, 1, 1, 0, 10, 0).is_err()); // even x1
        assert!(k_equivalence_check(f.k(), 1, 1, 1, 0, 0, 10, 0).is_err()); // p = 0
        assert!(k_equivalence_check(f.k(), 1, 1, 1, 1, 0, 7, 0).is_err()); // n below bound
    }

    #[test]
    fn k2_leading_z_coefficient_is_unit() {
        // the z^8 coefficient of K1(y - z) is 1, so K2 contains r^8 with
        // coefficient 1 and the clearing identity is monic in r.
        let f = family();
        let mut exps = vec![0u32; 6];
        exps[5] = 8;
        assert_eq!(f.k2().coefficient(&exps), BigInt::one());
    }
}
