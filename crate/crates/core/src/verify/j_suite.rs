//! Sign-product polynomial checks.

use num_bigint::BigInt;
use rand::Rng;
use rayon::prelude::*;

use super::SuiteConfig;
use crate::report::{CheckResult, VerificationReport};
use crate::signprod::{build_j, eval_j_on_squares, mr_check, MrWeight};

fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k.min(n));
    let mut acc = 1u64;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// The four defining properties of `J_n`, re-checked on the expansion.
pub fn jdef_invariants_check(n_lo: usize, n_hi: usize) -> CheckResult {
    let params = format!("n in {n_lo}..={n_hi}");
    for n in n_lo..=n_hi {
        let j = match build_j(n) {
            Ok(j) => j,
            Err(e) => return CheckResult::fail("sign-product-invariants", params, e.to_string()),
        };
        if let Err(msg) = j.check_invariants() {
            return CheckResult::fail("sign-product-invariants", params, format!("n={n}: {msg}"));
        }
    }
    CheckResult::pass("sign-product-invariants", params)
}

/// Expansion versus the literal product at seeded random points.
pub fn j_oracle_agreement_check(
    cfg: &SuiteConfig,
    n_lo: usize,
    n_hi: usize,
    points: u32,
    coord_bound: i64,
) -> CheckResult {
    let params = format!("n in {n_lo}..={n_hi}, {points} points, |v| <= {coord_bound}");
    let mut rng = cfg.rng();
    for n in n_lo..=n_hi {
        let j = build_j(n).expect("within cap");
        for _ in 0..points {
            let v: Vec<BigInt> =
                (0..n).map(|_| BigInt::from(rng.gen_range(-coord_bound..=coord_bound))).collect();
            let via_poly = j.poly().evaluate(&v).expect("matching arity");
            let via_product = crate::signprod::sign_product_eval(&v);
            if via_poly != via_product {
                return CheckResult::fail(
                    "sign-product-agreement",
                    params,
                    format!("n={n}, point {v:?}: poly {via_poly}, product {via_product}"),
                );
            }
        }
    }
    CheckResult::pass("sign-product-agreement", params)
}

/// Monomial count against the homogeneous-pattern bound
/// `binom(2^(n-2) + n - 1, n - 1)`.
pub fn j_monomial_bound_check(n_lo: usize, n_hi: usize) -> CheckResult {
    let params = format!("n in {n_lo}..={n_hi}");
    for n in n_lo..=n_hi {
        let j = build_j(n).expect("within cap");
        let bound = binomial((1u64 << (n - 2)) + n as u64 - 1, n as u64 - 1);
        let count = j.poly().monomial_count() as u64;
        if count > bound {
            return CheckResult::fail(
                "sign-product-monomial-bound",
                params,
                format!("n={n}: {count} monomials exceed the pattern bound {bound}"),
            );
        }
    }
    CheckResult::pass("sign-product-monomial-bound", params)
}

/// Actual versus claimed monomial counts for the elimination product, as
/// notes (the claimed closed form does not match a direct expansion for
/// q = 2, so nothing is asserted).
pub fn monomial_count_notes(qs: &[usize]) -> Vec<String> {
    qs.iter()
        .map(|&q| {
            let actual = build_j(q + 1).expect("within cap").poly().monomial_count();
            let claimed = binomial((1u64 << (q - 1)) + q as u64 - 1, q as u64 - 1);
            format!(
                "elimination product q={q}: expanded J_{} has {actual} monomials; \
                 the claimed closed form binom(2^(q-1)+q-1, q-1) gives {claimed}",
                q + 1
            )
        })
        .collect()
}

/// Evaluation on squares agrees with the literal product when the squares
/// are genuine squares.
pub fn j_on_squares_check(cfg: &SuiteConfig, n_lo: usize, n_hi: usize, points: u32) -> CheckResult {
    let params = format!("n in {n_lo}..={n_hi}, {points} points");
    let mut rng = cfg.rng();
    for n in n_lo..=n_hi {
        let j = build_j(n).expect("within cap");
        for _ in 0..points {
            let v: Vec<BigInt> = (0..n).map(|_| BigInt::from(rng.gen_range(-20i64..=20))).collect();
            let squares: Vec<BigInt> = v.iter().map(|x| x * x).collect();
            if eval_j_on_squares(&j, &squares) != crate::signprod::sign_product_eval(&v) {
                return CheckResult::fail(
                    "square-evaluation-agreement",
                    params,
                    format!("n={n}, point {v:?}"),
                );
            }
        }
    }
    CheckResult::pass("square-evaluation-agreement", params)
}

/// Exhaustive equivalence of the elimination check for `q = 2`: bounded
/// root existence iff both arguments are squares, with the square-sum
/// weight.
pub fn mr_equivalence_q2_check(a_max: u64) -> CheckResult {
    let params = format!("A1, A2 <= {a_max}, square-sum weight");
    let cells: Vec<(u64, u64)> =
        (0..=a_max).flat_map(|a1| (0..=a_max).map(move |a2| (a1, a2))).collect();
    let bad = cells.par_iter().find_map_any(|&(a1, a2)| {
        let r = mr_check(&[BigInt::from(a1), BigInt::from(a2)], &MrWeight::SquareSum)
            .expect("q = 2 within cap");
        if r.exists_x != r.all_squares {
            Some(format!(
                "A=({a1},{a2}): exists_x={}, all_squares={}",
                r.exists_x, r.all_squares
            ))
        } else {
            None
        }
    });
    CheckResult::from_counterexample("mr-square-equivalence-q2", params, bad)
}

pub(super) fn run(cfg: &SuiteConfig) -> VerificationReport {
    let mut report = VerificationReport::new("j");
    let (n_lo, n_hi) = cfg.range("j_n", 2, 6);
    let (n_lo, n_hi) = (n_lo as usize, n_hi as usize);
    report.push(jdef_invariants_check(n_lo, n_hi));
    report.push(j_oracle_agreement_check(cfg, n_lo, n_hi, 100, 50));
    report.push(j_monomial_bound_check(n_lo, n_hi));
    report.push(j_on_squares_check(cfg, n_lo, n_hi, 50));
    report.push(mr_equivalence_q2_check(cfg.range_hi("mr_a", 0, 40) as u64));
    for note in monomial_count_notes(&[2, 3]) {
        report.note(note);
    }
    report
}
