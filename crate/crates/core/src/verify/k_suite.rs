//! Checks for the `K1 -> K2 -> K` chain.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rayon::prelude::*;

use super::fast::{k1_value, k_value, premultiply, K1Profile};
use super::SuiteConfig;
use crate::kpoly::{k_min_n, KFamily};
use crate::poly::{monomial, Polynomial};
use crate::report::{CheckResult, VerificationReport};

fn isqrt_u64(x: u64) -> u64 {
    let mut r = (x as f64).sqrt() as u64;
    while r > 0 && r * r > x {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= x {
        r += 1;
    }
    r
}

/// Every monomial of `K1` carries an even power of `y`.
pub fn k1_y_parity_check(kf: &KFamily) -> CheckResult {
    let params = String::new();
    for m in kf.k1().terms() {
        if m.exponents[0] % 2 != 0 {
            return CheckResult::fail("k1-y-parity", params, format!("exponents {:?}", m.exponents));
        }
    }
    CheckResult::pass("k1-y-parity", params)
}

/// The collected-coefficient evaluator used by the grids agrees with the
/// expanded polynomials at seeded random points.
pub fn fast_path_agreement_check(cfg: &SuiteConfig, kf: &KFamily, samples: u32) -> CheckResult {
    let params = format!("{samples} seeded samples");
    let profile = K1Profile::new(kf.k1());
    let mut rng = cfg.rng();
    for _ in 0..samples {
        let (x1, x2, x3) =
            (rng.gen_range(0u64..=200), rng.gen_range(0u64..=200), rng.gen_range(0u64..=200));
        let g = profile.gamma_values(x1 as i128, x2 as i128, x3 as i128);
        let y = rng.gen_range(-100i64..=100);
        let fast = k1_value(&g, y as i128);
        let slow = kf
            .k1()
            .evaluate(&[BigInt::from(y), BigInt::from(x1), BigInt::from(x2), BigInt::from(x3)])
            .expect("arity 4");
        if BigInt::from(fast) != slow {
            return CheckResult::fail(
                "fast-path-agreement",
                params,
                format!("K1 mismatch at y={y}, x=({x1},{x2},{x3})"),
            );
        }

        // K at a shifted point, against the premultiplied form
        let (p, r) = (rng.gen_range(1u64..=6), rng.gen_range(0u64..=12));
        let n = rng.gen_range(1u64..=80);
        let v = rng.gen_range(-6i64..=6);
        let y = rng.gen_range(0i64..=100);
        let a = premultiply(&g, p as i128);
        let m = p as i128 * (y as i128 - n as i128 * v as i128) - r as i128;
        let fast = k_value(&a, m);
        let slow = kf
            .k()
            .evaluate(&[
                BigInt::from(y),
                BigInt::from(x1),
                BigInt::from(x2),
                BigInt::from(x3),
                BigInt::from(p),
                BigInt::from(r),
                BigInt::from(n),
                BigInt::from(v),
            ])
            .expect("arity 8");
        if BigInt::from(fast) != slow {
            return CheckResult::fail(
                "fast-path-agreement",
                params,
                format!("K mismatch at y={y}, x=({x1},{x2},{x3}), p={p}, r={r}, n={n}, v={v}"),
            );
        }
    }
    CheckResult::pass("fast-path-agreement", params)
}

/// Exhaustive root-existence equivalence for `K1`: for odd `x1, x2` a
/// bounded integer root in `y` exists iff all three arguments are perfect
/// squares. The scan covers `y in [0, bound]`; evenness in `y` (checked
/// separately) extends it to negative `y`.
pub fn k1_equivalence_grid_check(kf: &KFamily, x12_max: u64, x3_max: u64) -> CheckResult {
    let params = format!("odd x1, x2 <= {x12_max}, x3 <= {x3_max}");
    let profile = K1Profile::new(kf.k1());
    let odd: Vec<u64> = (1..=x12_max).step_by(2).collect();
    let bad = odd.par_iter().find_map_any(|&x1| {
        let s1 = isqrt_u64(x1);
        let sq1 = s1 * s1 == x1;
        for x2 in (1..=x12_max).step_by(2) {
            let s2 = isqrt_u64(x2);
            let sq2 = s2 * s2 == x2;
            for x3 in 0..=x3_max {
                let s3 = isqrt_u64(x3);
                let sq3 = s3 * s3 == x3;
                let g = profile.gamma_values(x1 as i128, x2 as i128, x3 as i128);
                let bound = (s1 + 2 * s2 + 4 * s3 + 1) as i128;
                let exists = (0..=bound).any(|y| k1_value(&g, y) == 0);
                let rhs = sq1 && sq2 && sq3;
                if exists != rhs {
                    return Some(format!(
                        "x=({x1},{x2},{x3}): root existence {exists}, all squares {rhs}"
                    ));
                }
            }
        }
        None
    });
    CheckResult::from_counterexample("k1-equivalence-grid", params, bad)
}

/// The denominator-clearing identity `K2(y, x, p, r) = p^8 K1(y - r/p, x)`
/// as exact rationals, at seeded integer points with `p != 0`.
pub fn k2_clearing_identity_check(
    cfg: &SuiteConfig,
    kf: &KFamily,
    samples: u32,
    coord_bound: i64,
) -> CheckResult {
    let params = format!("{samples} seeded points, |coords| <= {coord_bound}, p != 0");
    let mut rng = cfg.rng();
    let rat = |v: i64| BigRational::from_integer(BigInt::from(v));
    for _ in 0..samples {
        let y = rng.gen_range(-coord_bound..=coord_bound);
        let x1 = rng.gen_range(-coord_bound..=coord_bound);
        let x2 = rng.gen_range(-coord_bound..=coord_bound);
        let x3 = rng.gen_range(-coord_bound..=coord_bound);
        let mut p = 0i64;
        while p == 0 {
            p = rng.gen_range(-coord_bound..=coord_bound);
        }
        let r = rng.gen_range(-coord_bound..=coord_bound);

        let lhs = kf
            .k2()
            .evaluate(&[
                BigInt::from(y),
                BigInt::from(x1),
                BigInt::from(x2),
                BigInt::from(x3),
                BigInt::from(p),
                BigInt::from(r),
            ])
            .expect("arity 6");
        let shifted = rat(y) - rat(r) / rat(p);
        let k1_val = kf
            .k1()
            .evaluate_rational(&[shifted, rat(x1), rat(x2), rat(x3)])
            .expect("arity 4");
        let rhs = rat(p).pow(8) * k1_val;
        if BigRational::from_integer(lhs) != rhs {
            return CheckResult::fail(
                "k2-clearing-identity",
                params,
                format!("y={y}, x=({x1},{x2},{x3}), p={p}, r={r}"),
            );
        }
    }
    CheckResult::pass("k2-clearing-identity", params)
}

/// The exponent orientation of the `z`-replacement is the one forced by the
/// clearing identity; the opposite orientation (`z^a -> p^a r^(8-a)`)
/// already fails the specialization at `(p, r) = (1, 0)`.
pub fn k2_orientation_check(kf: &KFamily) -> CheckResult {
    let params = "specialization at (p, r) = (1, 0)".to_string();
    // Rebuild the shifted collection with the opposite orientation.
    let y_minus_z = monomial(5, 1, &[(0, 1)]).sub(&monomial(5, 1, &[(4, 1)])).expect("arity 5");
    let shifted = kf
        .k1()
        .substitute(&HashMap::from([(0usize, y_minus_z)]), 5)
        .expect("shift");
    let by_z = shifted.coefficients_in(4).expect("z var");
    let mut swapped_terms: Vec<(BigInt, Vec<u32>)> = Vec::new();
    for (alpha, coeff) in by_z.iter().enumerate() {
        for m in coeff.terms() {
            let e = vec![
                m.exponents[0],
                m.exponents[1],
                m.exponents[2],
                m.exponents[3],
                alpha as u32,     // p gets alpha here: the printed orientation
                8 - alpha as u32, // r gets the complement
            ];
            swapped_terms.push((m.coefficient.clone(), e));
        }
    }
    let swapped = Polynomial::from_terms(6, swapped_terms).expect("arity 6");

    let probe = [
        BigInt::from(5),
        BigInt::from(3),
        BigInt::from(2),
        BigInt::from(7),
        BigInt::from(1),
        BigInt::from(0),
    ];
    let k1_at = kf
        .k1()
        .evaluate(&[probe[0].clone(), probe[1].clone(), probe[2].clone(), probe[3].clone()])
        .expect("arity 4");
    let ours = kf.k2().evaluate(&probe).expect("arity 6");
    let theirs = swapped.evaluate(&probe).expect("arity 6");
    if ours != k1_at {
        return CheckResult::fail("k2-orientation", params, "kept orientation broke the (p, r) = (1, 0) specialization");
    }
    if theirs == k1_at {
        return CheckResult::fail(
            "k2-orientation",
            params,
            "swapped orientation unexpectedly also satisfies the specialization",
        );
    }
    CheckResult::pass("k2-orientation", params)
}

/// `K` with `v = 0` equals `K2` lifted to eight slots, as canonical forms.
pub fn k_v0_identity_check(kf: &KFamily) -> CheckResult {
    let params = "exact canonical equality".to_string();
    let k_v0 = kf
        .k()
        .substitute(&HashMap::from([(7usize, Polynomial::zero(8))]), 8)
        .expect("substitute v = 0");
    let k2_lifted = kf.k2().substitute(&HashMap::new(), 8).expect("lift");
    if k_v0 != k2_lifted {
        return CheckResult::fail("k-v0-identity", params, "canonical forms differ");
    }
    CheckResult::pass("k-v0-identity", params)
}

/// Exhaustive equivalence for `K`: natural root existence iff
/// (three squares and `p | r` and `v >= 0`), over the full grid with
/// `n` one above the minimum the preconditions allow.
///
/// For each `(x, p, r)` the scanned `y`-windows across all `v` lie on one
/// arithmetic progression of `m = p*(y - n*v) - r`, so the roots are found
/// once on the union of the windows and each `v` only tests membership.
pub fn k_equivalence_grid_check(
    kf: &KFamily,
    x12_max: u64,
    x3_max: u64,
    p_max: u64,
    r_max: u64,
    v_lo: i64,
    v_hi: i64,
) -> CheckResult {
    let params = format!(
        "odd x1, x2 <= {x12_max}, x3 <= {x3_max}, p <= {p_max}, r <= {r_max}, v in {v_lo}..={v_hi}, n = bound+1"
    );
    let profile = K1Profile::new(kf.k1());
    let odd: Vec<u64> = (1..=x12_max).step_by(2).collect();
    let pairs: Vec<(u64, u64)> =
        odd.iter().flat_map(|&x1| odd.iter().map(move |&x2| (x1, x2))).collect();

    let bad = pairs.par_iter().find_map_any(|&(x1, x2)| {
        let s1 = isqrt_u64(x1);
        let s2 = isqrt_u64(x2);
        let sq12 = s1 * s1 == x1 && s2 * s2 == x2;
        for x3 in 0..=x3_max {
            let s3 = isqrt_u64(x3);
            let squares = sq12 && s3 * s3 == x3;
            let isqb = s1 + 2 * s2 + 4 * s3;
            let g = profile.gamma_values(x1 as i128, x2 as i128, x3 as i128);
            for p in 1..=p_max {
                let a = premultiply(&g, p as i128);
                for r in 0..=r_max {
                    let n = isqb + r + 2; // one above the precondition bound
                    debug_assert!(n > k_min_n(x1, x2, x3, r) - 1);
                    let divisible = r % p == 0;
                    let (pi, ri, ni) = (p as i128, r as i128, n as i128);

                    // Union of the m-windows over all v.
                    let window = |v: i64| -> (i128, i128) {
                        let ymax = (n * (v.unsigned_abs() + 1) + r + isqb + 1) as i128;
                        let lo = -pi * ni * v as i128 - ri;
                        (lo, pi * ymax + lo)
                    };
                    let (mut m_lo, mut m_hi) = window(v_lo);
                    for v in v_lo..=v_hi {
                        let (lo, hi) = window(v);
                        m_lo = m_lo.min(lo);
                        m_hi = m_hi.max(hi);
                    }
                    let mut roots: Vec<i128> = Vec::new();
                    let mut m = m_lo;
                    while m <= m_hi {
                        if k_value(&a, m) == 0 {
                            roots.push(m);
                        }
                        m += pi;
                    }
                    for v in v_lo..=v_hi {
                        let (lo, hi) = window(v);
                        let exists = roots.iter().any(|&m| m >= lo && m <= hi);
                        let rhs = squares && divisible && v >= 0;
                        if exists != rhs {
                            return Some(format!(
                                "x=({x1},{x2},{x3}), p={p}, r={r}, n={n}, v={v}: \
                                 root existence {exists}, condition {rhs}"
                            ));
                        }
                    }
                }
            }
        }
        None
    });
    CheckResult::from_counterexample("k-equivalence-grid", params, bad)
}

pub(super) fn run_k1(cfg: &SuiteConfig) -> VerificationReport {
    let mut report = VerificationReport::new("k1");
    let kf = KFamily::new();
    report.push(k1_y_parity_check(&kf));
    report.push(fast_path_agreement_check(cfg, &kf, 300));
    let x12 = cfg.range_hi("k1_x", 1, 199) as u64;
    let x3 = cfg.range_hi("k1_x3", 0, 200) as u64;
    report.push(k1_equivalence_grid_check(&kf, x12, x3));
    report
}

pub(super) fn run_k(cfg: &SuiteConfig) -> VerificationReport {
    let mut report = VerificationReport::new("k");
    let kf = KFamily::new();
    report.push(k2_clearing_identity_check(cfg, &kf, 500, 20));
    report.push(k2_orientation_check(&kf));
    report.note(
        "z-replacement orientation: z^a -> r^a p^(8-a) is the one satisfying \
         K2 = p^8 K1(y - r/p, .); the opposite orientation fails at (p, r) = (1, 0)",
    );
    report.push(k_v0_identity_check(&kf));
    report.push(fast_path_agreement_check(cfg, &kf, 200));
    let x12 = cfg.range_hi("k_x", 1, 59) as u64;
    let x3 = cfg.range_hi("k_x3", 0, 60) as u64;
    let p = cfg.range_hi("k_p", 1, 6) as u64;
    let r = cfg.range_hi("k_r", 0, 12) as u64;
    let (v_lo, v_hi) = cfg.range("k_v", -3, 6);
    report.push(k_equivalence_grid_check(&kf, x12, x3, p, r, v_lo, v_hi));
    report
}
