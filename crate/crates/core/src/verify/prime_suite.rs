//! Checks for the prime-representing polynomials.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;

use super::SuiteConfig;
use crate::kpoly::KFamily;
use crate::poly::{Polynomial, PolyError};
use crate::primecompile::{
    build_poly10, build_poly26, compile, condition_witnesses, conditions_from_aux,
    poly26_components, poly26_soundness_probe, prime_condition_dag, total_aux, wilson_is_prime,
    BaseAssignment, Relation, ZChoice,
};
use crate::report::{CheckResult, VerificationReport};

/// Arity 26 and every variable in use.
pub fn poly26_shape_check(poly26: &Polynomial) -> CheckResult {
    let params = String::new();
    if poly26.arity() != 26 {
        return CheckResult::fail("poly26-shape", params, format!("arity {}", poly26.arity()));
    }
    for var in 0..26 {
        if !poly26.terms().iter().any(|m| m.exponents[var] > 0) {
            return CheckResult::fail("poly26-shape", params, format!("variable {var} unused"));
        }
    }
    CheckResult::pass("poly26-shape", params)
}

/// Value 6 at the origin: six of the fourteen components are off by one.
pub fn poly26_origin_check(poly26: &Polynomial) -> CheckResult {
    let params = "all-zeros point".to_string();
    let zeros = vec![BigInt::zero(); 26];
    let v = poly26.evaluate(&zeros).expect("arity 26");
    if v != BigInt::from(6) {
        return CheckResult::fail("poly26-origin", params, format!("value {v}"));
    }
    CheckResult::pass("poly26-origin", params)
}

/// Expanded polynomial versus the hand-written component arithmetic, plus
/// non-negativity, at seeded random points.
pub fn poly26_component_agreement_check(
    cfg: &SuiteConfig,
    poly26: &Polynomial,
    points: u32,
    coord_bound: i64,
) -> CheckResult {
    let params = format!("{points} seeded points, |w| <= {coord_bound}");
    let mut rng = cfg.rng();
    for _ in 0..points {
        let point: Vec<BigInt> =
            (0..26).map(|_| BigInt::from(rng.gen_range(-coord_bound..=coord_bound))).collect();
        let comps = poly26_components(&point).expect("length 26");
        let sum_sq: BigInt = comps.iter().map(|c| c * c).sum();
        let direct = poly26.evaluate(&point).expect("arity 26");
        if direct != sum_sq {
            return CheckResult::fail(
                "poly26-component-agreement",
                params,
                format!("point {point:?}"),
            );
        }
        if direct < BigInt::zero() {
            return CheckResult::fail("poly26-nonnegative", params, format!("point {point:?}"));
        }
    }
    CheckResult::pass("poly26-component-agreement", params)
}

/// Bounded zero scans: a zero with composite `k + 1` would falsify the
/// construction. (No zeros are expected at all in these boxes; genuine
/// witnesses are astronomically large.)
pub fn poly26_probe_check(k_lo: u64, k_hi: u64, box_bound: u64) -> CheckResult {
    let params = format!("k in {k_lo}..={k_hi}, box {box_bound}");
    for k in k_lo..=k_hi {
        match poly26_soundness_probe(k, box_bound) {
            Ok(rep) => {
                if !rep.sound {
                    return CheckResult::fail(
                        "poly26-soundness-probe",
                        params,
                        format!("zero found at composite k+1: k={k}, zeros {:?}", rep.zeros),
                    );
                }
            }
            Err(e) => return CheckResult::fail("poly26-soundness-probe", params, e.to_string()),
        }
    }
    CheckResult::pass("poly26-soundness-probe", params)
}

/// Brute-force semantics of the relation compiler on small ranges: an
/// introduced unknown zeroing the encoded square exists iff the relation
/// holds.
pub fn relation_compiler_check(arg_max: i64, unknown_max: i64) -> CheckResult {
    let params = format!("args <= {arg_max}, unknowns <= {unknown_max}");
    let vars = vec!["a".to_string(), "b".to_string()];
    let a = Polynomial::variable(2, 0).expect("arity 2");
    let b = Polynomial::variable(2, 1).expect("arity 2");
    let cases: Vec<(Relation, fn(i64, i64) -> bool)> = vec![
        (Relation::Divides(a.clone(), b.clone()), |a, b| if a == 0 { b == 0 } else { b % a == 0 }),
        (Relation::Leq(a.clone(), b.clone()), |a, b| a <= b),
        (Relation::Lt(a.clone(), b.clone()), |a, b| a < b),
        (Relation::IsSquare(a.clone()), |a, _| {
            let r = (a as f64).sqrt() as i64;
            (r.max(0)..=r + 1).any(|x| x * x == a)
        }),
        (Relation::Congruent(a.clone(), b.clone(), Polynomial::constant(2, 3)), |a, b| {
            b <= a && (a - b) % 3 == 0
        }),
    ];
    for (rel, oracle) in cases {
        let sys = match compile(std::slice::from_ref(&rel), &vars) {
            Ok(s) => s,
            Err(e) => return CheckResult::fail("relation-compiler", params, e.to_string()),
        };
        for av in 0..=arg_max {
            for bv in 0..=arg_max {
                let found = (0..=unknown_max).any(|x| {
                    sys.poly
                        .evaluate(&[BigInt::from(av), BigInt::from(bv), BigInt::from(x)])
                        .expect("arity 3")
                        .is_zero()
                });
                if found != oracle(av, bv) {
                    return CheckResult::fail(
                        "relation-compiler",
                        params,
                        format!("{rel:?} at ({av}, {bv}): scan {found}, oracle {}", oracle(av, bv)),
                    );
                }
            }
        }
    }
    CheckResult::pass("relation-compiler", params)
}

/// Wilson oracle versus trial division.
pub fn wilson_agreement_check(k_max: u64) -> CheckResult {
    let params = format!("1 <= k <= {k_max}");
    fn is_prime_trial(n: u64) -> bool {
        if n < 2 {
            return false;
        }
        let mut d = 2;
        while d * d <= n {
            if n % d == 0 {
                return false;
            }
            d += 1;
        }
        true
    }
    for k in 1..=k_max {
        let wilson = wilson_is_prime(k).expect("k >= 1");
        if wilson != is_prime_trial(k + 1) {
            return CheckResult::fail("wilson-agreement", params, format!("k={k}"));
        }
    }
    CheckResult::pass("wilson-agreement", params)
}

fn sample_bases(rng: &mut impl Rng, count: usize) -> Vec<BaseAssignment> {
    let mut bases = vec![
        BaseAssignment { k: 0, f: 1, i: 1, j: 1, m: 1, u: 1, r: 0, s: 0, t: 0 },
        BaseAssignment { k: 1, f: 1, i: 1, j: 1, m: 1, u: 1, r: 1, s: 1, t: 1 },
        BaseAssignment { k: 2, f: 2, i: 1, j: 2, m: 1, u: 1, r: 3, s: 0, t: 1 },
    ];
    while bases.len() < count {
        bases.push(BaseAssignment {
            k: rng.gen_range(0..=2),
            f: rng.gen_range(1..=2),
            i: rng.gen_range(1..=2),
            j: rng.gen_range(1..=2),
            m: rng.gen_range(1..=2),
            u: rng.gen_range(1..=2),
            r: rng.gen_range(0..=2),
            s: rng.gen_range(0..=2),
            t: rng.gen_range(0..=2),
        });
    }
    bases
}

/// The compiled sum-of-squares condition system evaluates to zero at the
/// constructed witnesses exactly when the direct condition report says all
/// five conditions hold.
pub fn condition_dag_check(cfg: &SuiteConfig, bases: usize) -> CheckResult {
    let params = format!("{bases} base points, Z = {}", cfg.z_choice);
    let dag = prime_condition_dag(&cfg.z_choice);
    let mut rng = cfg.rng();
    for base in sample_bases(&mut rng, bases) {
        let aux = total_aux(base).expect("valid base");
        let rep = conditions_from_aux(&aux, &cfg.z_choice);
        let wit = condition_witnesses(&aux, &cfg.z_choice);
        let mut point: Vec<BigInt> =
            [base.k, base.f, base.i, base.j, base.m, base.u, base.r, base.s, base.t]
                .iter()
                .map(|&v| BigInt::from(v))
                .collect();
        point.extend(wit);
        let value = dag.evaluate(&point).expect("arity 14");
        if value < BigInt::zero() {
            return CheckResult::fail("condition-system", params, format!("negative at {base:?}"));
        }
        if value.is_zero() != rep.overall {
            return CheckResult::fail(
                "condition-system",
                params,
                format!("zero <=> conditions mismatch at {base:?}"),
            );
        }
    }
    CheckResult::pass("condition-system", params)
}

/// DAG variable count (the headline arity of the final polynomial).
pub fn poly10_vars_check(kf: &KFamily, z: &ZChoice) -> CheckResult {
    let p10 = build_poly10(kf, z);
    let params = format!("Z = {z}");
    if p10.dag().arity() != 10 {
        return CheckResult::fail("poly10-variable-count", params, format!("{}", p10.dag().arity()));
    }
    CheckResult::pass("poly10-variable-count", params)
}

/// Sound structural degree bound above 6000.
pub fn poly10_degree_bound_check(kf: &KFamily, z: &ZChoice) -> (CheckResult, u64) {
    let p10 = build_poly10(kf, z);
    let bound = p10.dag().degree_upper_bound();
    let params = format!("upper bound {bound}");
    if bound > 6000 {
        (CheckResult::pass("poly10-degree-bound", params), bound)
    } else {
        (CheckResult::fail("poly10-degree-bound", params, format!("bound {bound} <= 6000")), bound)
    }
}

/// Growth along random positive rays as lower-bound evidence for the
/// degree: the estimate must exceed 6000. Larger sample scales are tried
/// when a smaller one is dominated by lower-degree terms.
pub fn poly10_growth_check(cfg: &SuiteConfig, kf: &KFamily, z: &ZChoice) -> CheckResult {
    let p10 = build_poly10(kf, z);
    let mut rng = cfg.rng();
    let mut best: Option<(u64, u64, u64)> = None; // (estimate, t1, t2)
    for _ray_attempt in 0..4 {
        let ray: Vec<BigInt> = (0..10).map(|_| BigInt::from(rng.gen_range(1i64..=3))).collect();
        for (t1, t2) in [(2u64, 4u64), (16, 32), (256, 512)] {
            match p10.dag().growth_degree_estimate(&ray, t1, t2) {
                Ok(est) => {
                    if best.map_or(true, |(b, _, _)| est > b) {
                        best = Some((est, t1, t2));
                    }
                    if est > 6000 {
                        return CheckResult::pass(
                            "poly10-growth-estimate",
                            format!("estimate {est} at t = ({t1}, {t2})"),
                        );
                    }
                }
                Err(PolyError::ZeroOnRay) => break, // try another ray
                Err(e) => {
                    return CheckResult::fail("poly10-growth-estimate", String::new(), e.to_string())
                }
            }
        }
    }
    CheckResult::fail(
        "poly10-growth-estimate",
        String::new(),
        format!("no estimate above 6000; best {best:?}"),
    )
}

/// DAG evaluation versus stage-wise composition: compute the auxiliary
/// values and slot substitutions in plain big-integer arithmetic, feed them
/// to the expanded `K`, and compare with the DAG value. Exact equality.
pub fn poly10_staged_consistency_check(
    cfg: &SuiteConfig,
    kf: &KFamily,
    z: &ZChoice,
    points: u32,
) -> CheckResult {
    let params = format!("{points} seeded points, Z = {z}");
    let p10 = build_poly10(kf, z);
    let mut rng = cfg.rng();
    for idx in 0..points {
        let base = BaseAssignment {
            k: rng.gen_range(0..=2),
            f: rng.gen_range(1..=2),
            i: rng.gen_range(1..=2),
            j: rng.gen_range(1..=2),
            m: rng.gen_range(1..=2),
            u: rng.gen_range(1..=2),
            r: rng.gen_range(0..=2),
            s: rng.gen_range(0..=2),
            t: rng.gen_range(0..=2),
        };
        let y = rng.gen_range(0u64..=3);
        let aux = total_aux(base).expect("valid base");
        let staged = kf
            .k()
            .evaluate(&[
                BigInt::from(y),
                aux.x1_value(),
                aux.x2_value(),
                aux.x3_value(),
                aux.p_value(),
                aux.r_numerator(z),
                aux.n_value(),
                aux.v_value(),
            ])
            .expect("arity 8");
        let point: Vec<BigInt> =
            [base.k, base.f, base.i, base.j, base.m, base.u, base.r, base.s, base.t, y]
                .iter()
                .map(|&v| BigInt::from(v))
                .collect();
        let direct = p10.dag().evaluate(&point).expect("arity 10");
        if direct != staged {
            return CheckResult::fail(
                "poly10-staged-consistency",
                params,
                format!("point {idx}: base {base:?}, y={y}"),
            );
        }
    }
    CheckResult::pass("poly10-staged-consistency", params)
}

/// Expansion of the 10-variable DAG must refuse small budgets instead of
/// attempting the infeasible expansion.
pub fn poly10_expand_guard_check(kf: &KFamily, z: &ZChoice) -> CheckResult {
    let p10 = build_poly10(kf, z);
    let params = "budget 1000".to_string();
    match p10.dag().expand(1000) {
        Err(PolyError::BudgetExceeded { .. }) => CheckResult::pass("poly10-expand-guard", params),
        Err(e) => CheckResult::fail("poly10-expand-guard", params, e.to_string()),
        Ok(p) => CheckResult::fail(
            "poly10-expand-guard",
            params,
            format!("expansion unexpectedly succeeded with {} monomials", p.monomial_count()),
        ),
    }
}

pub(super) fn run_poly26(cfg: &SuiteConfig) -> VerificationReport {
    let mut report = VerificationReport::new("poly26");
    let poly26 = build_poly26();
    report.push(poly26_shape_check(&poly26));
    report.push(poly26_origin_check(&poly26));
    report.push(poly26_component_agreement_check(cfg, &poly26, 1000, 10));
    let (k_lo, k_hi) = cfg.range("probe_k", 1, 5);
    let box_bound = cfg.range_hi("probe_box", 0, 1);
    report.push(poly26_probe_check(k_lo as u64, k_hi as u64, box_bound as u64));
    report.push(relation_compiler_check(20, 40));
    report
}

pub(super) fn run_poly10(cfg: &SuiteConfig) -> VerificationReport {
    let mut report = VerificationReport::new("poly10");
    let kf = KFamily::new();
    let z = &cfg.z_choice;
    report.note(format!(
        "Z in the divisibility numerator is taken as {z} (an undefined symbol in the source \
         condition list; the structural parallel with the HL term fixes the default)"
    ));
    report.push(poly10_vars_check(&kf, z));
    let (bound_check, _) = poly10_degree_bound_check(&kf, z);
    report.push(bound_check);
    report.push(poly10_growth_check(cfg, &kf, z));
    report.push(poly10_staged_consistency_check(cfg, &kf, z, 50));
    report.push(poly10_expand_guard_check(&kf, z));
    report.push(condition_dag_check(cfg, 24));
    report
}

pub(super) fn run_wilson(cfg: &SuiteConfig) -> VerificationReport {
    let mut report = VerificationReport::new("wilson");
    report.push(wilson_agreement_check(cfg.range_hi("wilson_k", 1, 2000) as u64));
    report
}
