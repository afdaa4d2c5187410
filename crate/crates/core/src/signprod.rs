//! The sign-product polynomial `J_n` and the square-root elimination check.
//!
//! `J_n(r1, ..., rn)` is the expanded product of `r1 ± r2 ± ... ± rn` over
//! all `2^(n-1)` sign choices (the first slot carries no sign). Every
//! exponent of the expansion is even, every monomial has total degree
//! `2^(n-1)`, and the coefficient of `r1^(2^(n-1))` is 1. Because all
//! exponents are even, `J_n` can be evaluated on arguments known only by
//! their squares — this is what eliminates the square roots from
//! `prod(X ± sqrt(A1) ± sqrt(A2) W ± ... ± sqrt(Aq) W^(q-1))`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::arith::{is_square, isqrt};
use crate::poly::{monomial, Polynomial};

/// Expansion cap: `build_j(n)` multiplies `2^(n-1)` linear factors.
pub const DEFAULT_N_CAP: usize = 8;
/// The elimination check expands `J_(q+1)`; the chain only needs `q = 3`.
pub const DEFAULT_Q_CAP: usize = 3;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SignProdError {
    #[error("n must satisfy 2 <= n <= {cap}, got {n}")]
    NOutOfRange { n: usize, cap: usize },
    #[error("q = {q} exceeds the expansion cap {cap}")]
    QCapExceeded { q: usize, cap: usize },
    #[error("constant weight must be >= 2, got {0}")]
    WeightTooSmall(BigInt),
    #[error("need at least one argument")]
    Empty,
}

/// The expanded sign product together with its slot count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JPolynomial {
    n: usize,
    poly: Polynomial,
}

impl JPolynomial {
    pub fn slots(&self) -> usize {
        self.n
    }

    pub fn poly(&self) -> &Polynomial {
        &self.poly
    }

    /// Re-checks the defining structure: even exponents everywhere,
    /// homogeneous of degree `2^(n-1)`, and unit coefficient on
    /// `r1^(2^(n-1))`. (Coefficients are integers by construction.)
    pub fn check_invariants(&self) -> Result<(), String> {
        let degree = 1u64 << (self.n - 1);
        for m in self.poly.terms() {
            if m.exponents.iter().any(|&e| e % 2 != 0) {
                return Err(format!("odd exponent in {:?}", m.exponents));
            }
            if m.degree() != degree {
                return Err(format!(
                    "monomial {:?} has degree {}, expected {degree}",
                    m.exponents,
                    m.degree()
                ));
            }
        }
        let mut lead = vec![0u32; self.n];
        lead[0] = degree as u32;
        if self.poly.coefficient(&lead) != BigInt::one() {
            return Err("leading slot-1 coefficient is not 1".to_string());
        }
        Ok(())
    }
}

/// All sign rows for `n` slots: bit `k` of the mask flips slot `k + 1`.
fn sign_rows(n: usize) -> impl Iterator<Item = u32> {
    0..(1u32 << (n - 1))
}

/// Expands `J_n` with the default cap.
pub fn build_j(n: usize) -> Result<JPolynomial, SignProdError> {
    build_j_with_cap(n, DEFAULT_N_CAP)
}

pub fn build_j_with_cap(n: usize, cap: usize) -> Result<JPolynomial, SignProdError> {
    if n < 2 || n > cap {
        return Err(SignProdError::NOutOfRange { n, cap });
    }
    let mut product = Polynomial::one(n);
    for mask in sign_rows(n) {
        let mut factor = Polynomial::variable(n, 0).expect("slot 0 exists");
        for k in 1..n {
            let sign = if mask >> (k - 1) & 1 == 0 { 1 } else { -1 };
            factor = factor.add(&monomial(n, sign, &[(k, 1)])).expect("same arity");
        }
        product = product.mul(&factor).expect("same arity");
    }
    let j = JPolynomial { n, poly: product };
    j.check_invariants().expect("sign product must satisfy its defining structure");
    Ok(j)
}

/// The literal defining product, computed with no polynomial machinery.
/// Serves as the independent oracle for `build_j`.
///
/// # Panics
/// Panics if fewer than two values are given.
pub fn sign_product_eval(values: &[BigInt]) -> BigInt {
    assert!(values.len() >= 2, "need at least two slots");
    let n = values.len();
    let mut product = BigInt::one();
    for mask in sign_rows(n) {
        let mut factor = values[0].clone();
        for k in 1..n {
            if mask >> (k - 1) & 1 == 0 {
                factor += &values[k];
            } else {
                factor -= &values[k];
            }
        }
        product *= factor;
    }
    product
}

/// Evaluates `J` with slot `i`'s square given as `squares[i]`: an exponent
/// `2t` on slot `i` contributes `squares[i]^t`. The inputs may be any
/// integers — no square root is ever taken.
pub fn eval_j_on_squares(j: &JPolynomial, squares: &[BigInt]) -> BigInt {
    assert_eq!(squares.len(), j.n, "one square per slot");
    let mut sum = BigInt::zero();
    for m in j.poly.terms() {
        let mut v = m.coefficient.clone();
        for (var, &e) in m.exponents.iter().enumerate() {
            debug_assert!(e % 2 == 0);
            if e > 0 {
                v *= squares[var].pow(e / 2);
            }
        }
        sum += v;
    }
    sum
}

/// Weight used by the square-root elimination product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MrWeight {
    /// `W = 1 + A1^2 + ... + Aq^2` (the unconditional form).
    SquareSum,
    /// A fixed constant `w >= 2`; the equivalence then needs the parity
    /// side conditions supplied by the caller.
    Const(BigInt),
}

/// Result of the bounded root scan versus the squareness test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MrCheck {
    pub exists_x: bool,
    pub all_squares: bool,
    pub x: Option<BigInt>,
    /// Monomial count of the expanded `J_(q+1)` used, for reporting.
    pub monomial_count: usize,
}

/// Checks whether some integer `X` with
/// `|X| <= sum isqrt(Ai) W^(i-1) + 1` zeroes
/// `J_(q+1)(X, sqrt(A1), sqrt(A2) W, ..., sqrt(Aq) W^(q-1))`
/// (evaluated via squares), and whether every `Ai` is a perfect square.
/// In `SquareSum` mode the two answers agree unconditionally.
pub fn mr_check(a: &[BigInt], mode: &MrWeight) -> Result<MrCheck, SignProdError> {
    mr_check_with_cap(a, mode, DEFAULT_Q_CAP)
}

pub fn mr_check_with_cap(
    a: &[BigInt],
    mode: &MrWeight,
    cap: usize,
) -> Result<MrCheck, SignProdError> {
    let q = a.len();
    if q == 0 {
        return Err(SignProdError::Empty);
    }
    if q > cap {
        return Err(SignProdError::QCapExceeded { q, cap });
    }
    let w = match mode {
        MrWeight::SquareSum => a.iter().map(|v| v * v).sum::<BigInt>() + 1,
        MrWeight::Const(w) => {
            if w < &BigInt::from(2) {
                return Err(SignProdError::WeightTooSmall(w.clone()));
            }
            w.clone()
        }
    };
    let j = build_j_with_cap(q + 1, cap + 1)?;

    // Slot i+1 carries the square Ai * W^(2i); any root is a signed sum of
    // the slot roots, which bounds the scan.
    let mut squares = Vec::with_capacity(q + 1);
    squares.push(BigInt::zero()); // placeholder for X^2
    let mut bound = BigInt::one();
    for (idx, ai) in a.iter().enumerate() {
        let w_pow = w.pow(idx as u32);
        squares.push(ai * &w_pow * &w_pow);
        bound += isqrt(ai) * &w_pow;
    }

    let mut found: Option<BigInt> = None;
    let mut x = BigInt::zero();
    while x <= bound {
        for cand in [x.clone(), -&x] {
            squares[0] = &cand * &cand;
            if eval_j_on_squares(&j, &squares).is_zero() {
                found = Some(cand);
                break;
            }
            if x.is_zero() {
                break;
            }
        }
        if found.is_some() {
            break;
        }
        x += 1;
    }

    Ok(MrCheck {
        exists_x: found.is_some(),
        all_squares: a.iter().all(is_square),
        x: found,
        monomial_count: j.poly.monomial_count(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn j2_is_difference_of_squares() {
        let j = build_j(2).unwrap();
        let expected = monomial(2, 1, &[(0, 2)]).sub(&monomial(2, 1, &[(1, 2)])).unwrap();
        assert_eq!(j.poly(), &expected);
    }

    #[test]
    fn j3_expansion() {
        let j = build_j(3).unwrap();
        // r1^4 + r2^4 + r3^4 - 2 r1^2 r2^2 - 2 r1^2 r3^2 - 2 r2^2 r3^2
        let expected = Polynomial::from_terms(
            3,
            [
                (big(1), vec![4, 0, 0]),
                (big(1), vec![0, 4, 0]),
                (big(1), vec![0, 0, 4]),
                (big(-2), vec![2, 2, 0]),
                (big(-2), vec![2, 0, 2]),
                (big(-2), vec![0, 2, 2]),
            ],
        )
        .unwrap();
        assert_eq!(j.poly(), &expected);
        let s = j.poly().stats();
        assert_eq!((s.total_degree, s.monomial_count), (4, 6));
    }

    #[test]
    fn j4_stats() {
        let j = build_j(4).unwrap();
        assert_eq!(j.poly().total_degree(), 8);
        assert!(j.check_invariants().is_ok());
    }

    #[test]
    fn build_j_range_errors() {
        assert!(build_j(1).is_err());
        assert!(build_j(9).is_err());
        assert!(build_j_with_cap(2, 1).is_err());
    }

    #[test]
    fn sign_product_oracle_values() {
        assert_eq!(sign_product_eval(&[big(3), big(2)]), big(5));
        assert_eq!(sign_product_eval(&[big(1), big(1), big(1)]), big(-3));
    }

    #[test]
    fn expansion_matches_oracle_on_a_grid() {
        let j = build_j(3).unwrap();
        for a in -3i64..=3 {
            for b in -3i64..=3 {
                for c in -3i64..=3 {
                    let v = [big(a), big(b), big(c)];
                    assert_eq!(j.poly().evaluate(&v).unwrap(), sign_product_eval(&v));
                }
            }
        }
    }

    #[test]
    fn eval_on_squares_examples() {
        let j2 = build_j(2).unwrap();
        // J2 on squares (s1, s2) is s1 - s2
        assert_eq!(eval_j_on_squares(&j2, &[big(10), big(3)]), big(7));

        let j3 = build_j(3).unwrap();
        // perfect squares: both routes agree; (7,1,4) gives 12*4*10*2 = 960
        let via_squares = eval_j_on_squares(&j3, &[big(49), big(1), big(16)]);
        let direct = sign_product_eval(&[big(7), big(1), big(4)]);
        assert_eq!(via_squares, direct);
        assert_eq!(direct, big(960));

        // non-squares still produce an integer: no root is ever extracted
        let v = eval_j_on_squares(&j3, &[big(2), big(3), big(5)]);
        assert_eq!(v, big(4) + big(9) + big(25) - big(2) * (big(6) + big(10) + big(15)));
    }

    #[test]
    fn mr_check_examples() {
        // A = (4, 9): both squares, W = 98, a root exists in bound.
        let r = mr_check(&[big(4), big(9)], &MrWeight::SquareSum).unwrap();
        assert!(r.exists_x && r.all_squares);
        let x = r.x.unwrap();
        // the found root must be a signed combination of 2 and 3*98
        let roots: Vec<BigInt> =
            [big(296), big(-296), big(292), big(-292)].to_vec();
        assert!(roots.contains(&x));

        // A = (4, 8): 8 is not a square and no bounded root exists.
        let r = mr_check(&[big(4), big(8)], &MrWeight::SquareSum).unwrap();
        assert!(!r.exists_x && !r.all_squares);

        // all-zero arguments: X = 0 works.
        let r = mr_check(&[big(0), big(0), big(0)], &MrWeight::SquareSum).unwrap();
        assert!(r.exists_x && r.all_squares);
        assert_eq!(r.x.unwrap(), big(0));
    }

    #[test]
    fn mr_check_cap_and_weight_errors() {
        let a4 = [big(1), big(1), big(1), big(1)];
        assert!(matches!(
            mr_check(&a4, &MrWeight::SquareSum),
            Err(SignProdError::QCapExceeded { q: 4, cap: 3 })
        ));
        assert!(matches!(
            mr_check(&[big(4)], &MrWeight::Const(big(1))),
            Err(SignProdError::WeightTooSmall(_))
        ));
        assert!(matches!(mr_check(&[], &MrWeight::SquareSum), Err(SignProdError::Empty)));
    }
}
