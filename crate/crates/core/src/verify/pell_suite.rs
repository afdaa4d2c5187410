//! Pell-sequence and witness-system checks.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;
use rayon::prelude::*;

use super::SuiteConfig;
use crate::pell::{
    alpha_seq, pell_aux, pell_witness_scan, sos_value, sos_witness, LucasSeq, SosHiddenUnknowns,
};
use crate::report::{CheckResult, VerificationReport};

/// `chi_a(n)^2 - (a^2-1) psi_a(n)^2 = 1` exactly, over the whole grid.
pub fn pell_identity_check(a_max: u64, n_max: u64) -> CheckResult {
    let params = format!("a in 2..={a_max}, n <= {n_max}");
    for a in 2..=a_max {
        let mut seq = LucasSeq::new(a).expect("a >= 2");
        let d = BigInt::from(a * a - 1);
        for n in 0..=n_max {
            let chi = seq.chi(n);
            let psi = seq.psi(n);
            if &chi * &chi - &d * &psi * &psi != BigInt::from(1) {
                return CheckResult::fail("pell-identity", params, format!("a={a}, n={n}"));
            }
        }
    }
    CheckResult::pass("pell-identity", params)
}

/// `alpha_{2a}(n) = psi_a(n)`. Also reports whether the literal identity
/// `alpha_b(n) = psi_{2a}(n)` (same subscript on both sides) survives —
/// it does not beyond `n = 1`, which the caller records as a note.
pub fn alpha_psi_check(a_max: u64, n_max: u64) -> (CheckResult, bool) {
    let params = format!("a in 2..={a_max}, n <= {n_max}");
    let mut literal_reading_holds = true;
    for a in 2..=a_max {
        let mut seq = LucasSeq::new(a).expect("a >= 2");
        let mut doubled = LucasSeq::new(2 * a).expect("2a >= 4");
        for n in 0..=n_max {
            let alpha = alpha_seq(2 * a, n).expect("2a >= 4");
            if alpha != seq.psi(n) {
                return (
                    CheckResult::fail("alpha-psi-correspondence", params, format!("a={a}, n={n}")),
                    literal_reading_holds,
                );
            }
            if alpha != doubled.psi(n) {
                literal_reading_holds = false;
            }
        }
    }
    (CheckResult::pass("alpha-psi-correspondence", params), literal_reading_holds)
}

/// `psi_a(k) | psi_a(m) <=> k | m`, exhaustively.
pub fn psi_divisibility_check(a_lo: u64, a_hi: u64, km_max: u64) -> CheckResult {
    let params = format!("a in {a_lo}..={a_hi}, 1 <= k, m <= {km_max}");
    for a in a_lo..=a_hi {
        let mut seq = LucasSeq::new(a).expect("a >= 2");
        let psis: Vec<BigInt> = (0..=km_max).map(|n| seq.psi(n)).collect();
        for k in 1..=km_max as usize {
            for m in 1..=km_max as usize {
                let lhs = (&psis[m] % &psis[k]).is_zero();
                let rhs = m % k == 0;
                if lhs != rhs {
                    return CheckResult::fail(
                        "psi-divisibility",
                        params,
                        format!("a={a}, k={k}, m={m}: lhs={lhs}, rhs={rhs}"),
                    );
                }
            }
        }
    }
    CheckResult::pass("psi-divisibility", params)
}

/// The concrete witness instance: the scan at `(A, B, e) = (2, 1, 0)` with
/// caps 64x64 must return `(6, 0)`, and the witness must verify.
pub fn witness_instance_check() -> CheckResult {
    let params = "A=2, B=1, e=0, caps 64x64".to_string();
    let found = match pell_witness_scan(2, 1, 0, 64, 64) {
        Ok(f) => f,
        Err(e) => return CheckResult::fail("pell-witness-instance", params, e.to_string()),
    };
    if found != Some((6, 0)) {
        return CheckResult::fail("pell-witness-instance", params, format!("scan returned {found:?}"));
    }
    let c = LucasSeq::new(2).expect("a >= 2").psi(1);
    let aux = pell_aux(2, 1, &c, 0, 6, 0).expect("valid");
    let dfi = &aux.d * &aux.f * &aux.i_aux;
    let root = BigInt::from(194) * &aux.g;
    if !aux.conditions_hold() || dfi != &root * &root {
        return CheckResult::fail("pell-witness-instance", params, "witness failed to verify");
    }
    CheckResult::pass("pell-witness-instance", params)
}

/// Soundness direction over the finite grid: whenever the three-way
/// condition holds, `C` must equal `psi_A(B)`. Completeness beyond the
/// caps is not desk-checkable (witness indices grow with psi values).
pub fn soundness_grid_check(b_max: u64, e_max: u64, ij_max: u64) -> CheckResult {
    let params = format!("A in {{2,3}}, B <= {b_max}, e <= {e_max}, C <= psi_A(5), i,j <= {ij_max}");
    let mut cells: Vec<(u64, u64)> = Vec::new();
    for a in [2u64, 3] {
        let c_max = u64::try_from(&LucasSeq::new(a).expect("a >= 2").psi(5)).expect("fits");
        cells.extend((0..=c_max).map(|c| (a, c)));
    }
    let bad = cells.par_iter().find_map_any(|&(a, c)| {
        let mut seq = LucasSeq::new(a).expect("a >= 2");
        let c_big = BigInt::from(c);
        for b in 1..=b_max {
            let psi_b = seq.psi(b);
            for e in 0..=e_max {
                for i in 0..=ij_max {
                    for j in 0..=ij_max {
                        let aux = pell_aux(a, b, &c_big, e, i, j).expect("valid");
                        if aux.conditions_hold() && c_big != psi_b {
                            return Some(format!("A={a}, B={b}, C={c}, e={e}, i={i}, j={j}"));
                        }
                    }
                }
            }
        }
        None
    });
    CheckResult::from_counterexample("pell-soundness-grid", params, bad)
}

/// The sum-of-squares form: non-negative everywhere, and zero at the
/// constructed hidden unknowns exactly when the conditions hold.
pub fn sos_check(cfg: &SuiteConfig, samples: u32) -> CheckResult {
    let params = format!("{samples} seeded samples");
    let mut rng = cfg.rng();
    for _ in 0..samples {
        let a = rng.gen_range(2u64..=4);
        let b = rng.gen_range(1u64..=4);
        let c = BigInt::from(rng.gen_range(0u64..=30));
        let e = rng.gen_range(0u64..=1);
        let i = rng.gen_range(0u64..=4);
        let j = rng.gen_range(0u64..=4);
        let aux = pell_aux(a, b, &c, e, i, j).expect("valid");
        // arbitrary hidden unknowns: never negative
        let hidden = SosHiddenUnknowns {
            alpha: BigInt::from(rng.gen_range(0u64..=100)),
            beta: BigInt::from(rng.gen_range(0u64..=10)),
            gamma: BigInt::from(rng.gen_range(0u64..=10)),
        };
        if sos_value(&aux, &hidden) < BigInt::zero() {
            return CheckResult::fail(
                "pell-sos",
                params,
                format!("negative value at A={a}, B={b}, C={c}"),
            );
        }
        // constructed hidden unknowns: zero iff the conditions hold
        let zeroed = sos_witness(&aux).map(|h| sos_value(&aux, &h).is_zero());
        let conds = aux.conditions_hold();
        if zeroed.unwrap_or(false) != conds {
            return CheckResult::fail(
                "pell-sos",
                params,
                format!("witness/conditions mismatch at A={a}, B={b}, C={c}, e={e}, i={i}, j={j}"),
            );
        }
    }
    CheckResult::pass("pell-sos", params)
}

pub(super) fn run(cfg: &SuiteConfig) -> VerificationReport {
    let mut report = VerificationReport::new("pell");
    let (_, a_max) = cfg.range("pell_a", 2, 6);
    let n_max = cfg.range_hi("pell_n", 0, 30);
    report.push(pell_identity_check(a_max as u64, n_max as u64));

    let alpha_a = cfg.range_hi("alpha_a", 2, 5);
    let alpha_n = cfg.range_hi("alpha_n", 0, 25);
    let (check, literal_holds) = alpha_psi_check(alpha_a as u64, alpha_n as u64);
    report.push(check);
    if !literal_holds {
        report.note(
            "the literal reading alpha_b(n) = psi_2a(n) (same parameter on both sides) fails \
             beyond n = 1; the verified relation is alpha_2a(n) = psi_a(n)",
        );
    }

    let (div_lo, div_hi) = cfg.range("div_a", 2, 4);
    let km = cfg.range_hi("div_km", 1, 20);
    report.push(psi_divisibility_check(div_lo as u64, div_hi as u64, km as u64));

    report.push(witness_instance_check());
    report.push(soundness_grid_check(4, 1, cfg.range_hi("grid_ij", 0, 8) as u64));
    report.push(sos_check(cfg, 50));
    report
}
