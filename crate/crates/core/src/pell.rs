//! Lucas solution sequences of the Pell equation and the witness system
//! that characterizes `C = psi_A(B)`.
//!
//! For `D = a^2 - 1` every natural solution of `x^2 - D y^2 = 1` is
//! `(chi_a(n), psi_a(n))` with
//!
//! ```text
//! chi(0) = 1,  chi(1) = a,  chi(n+2) = 2a chi(n+1) - chi(n)
//! psi(0) = 0,  psi(1) = 1,  psi(n+2) = 2a psi(n+1) - psi(n)
//! ```
//!
//! The related `alpha_b` sequence enumerates the solutions of
//! `x^2 - bxy + y^2 = 1`; it satisfies `alpha_{2a}(n) = psi_a(n)`.
//!
//! All computations are exact iterative big-integer arithmetic.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use crate::arith::{is_square, isqrt};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PellError {
    #[error("sequence parameter a must be >= 2, got {0}")]
    ParamA(u64),
    #[error("sequence parameter b must be >= 3, got {0}")]
    ParamB(u64),
    #[error("index {name} must be >= 1")]
    IndexPositive { name: &'static str },
    #[error("require A > 1 and B > 0, got A = {a}, B = {b}")]
    AuxRange { a: u64, b: u64 },
}

/// One entry of the Lucas solution pair: `chi^2 - (a^2-1) psi^2 = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LucasPair {
    pub a: u64,
    pub n: u64,
    pub chi: BigInt,
    pub psi: BigInt,
}

/// Memoized `chi/psi` values for one parameter `a`, extended on demand.
/// The free function [`lucas_pair`] suffices for one-off queries; suites
/// that sweep many indices keep one of these per parameter.
#[derive(Debug, Clone)]
pub struct LucasSeq {
    a: u64,
    chi: Vec<BigInt>,
    psi: Vec<BigInt>,
}

impl LucasSeq {
    pub fn new(a: u64) -> Result<Self, PellError> {
        if a < 2 {
            return Err(PellError::ParamA(a));
        }
        Ok(LucasSeq {
            a,
            chi: vec![BigInt::one(), BigInt::from(a)],
            psi: vec![BigInt::zero(), BigInt::one()],
        })
    }

    fn extend_to(&mut self, n: u64) {
        let m = BigInt::from(2 * self.a);
        while (self.chi.len() as u64) <= n {
            let k = self.chi.len();
            self.chi.push(&m * &self.chi[k - 1] - &self.chi[k - 2]);
            self.psi.push(&m * &self.psi[k - 1] - &self.psi[k - 2]);
        }
    }

    pub fn chi(&mut self, n: u64) -> BigInt {
        self.extend_to(n);
        self.chi[n as usize].clone()
    }

    pub fn psi(&mut self, n: u64) -> BigInt {
        self.extend_to(n);
        self.psi[n as usize].clone()
    }

    pub fn pair(&mut self, n: u64) -> LucasPair {
        LucasPair { a: self.a, n, chi: self.chi(n), psi: self.psi(n) }
    }
}

/// Exact `(chi_a(n), psi_a(n))` from the recurrences.
pub fn lucas_pair(a: u64, n: u64) -> Result<LucasPair, PellError> {
    Ok(LucasSeq::new(a)?.pair(n))
}

/// `alpha_b(n)`: `alpha(0) = 0`, `alpha(1) = 1`,
/// `alpha(n+2) = b alpha(n+1) - alpha(n)`. Consecutive pairs solve
/// `x^2 - bxy + y^2 = 1`.
pub fn alpha_seq(b: u64, n: u64) -> Result<BigInt, PellError> {
    if b < 3 {
        return Err(PellError::ParamB(b));
    }
    let mut prev = BigInt::zero();
    let mut cur = BigInt::one();
    if n == 0 {
        return Ok(prev);
    }
    let m = BigInt::from(b);
    for _ in 1..n {
        let next = &m * &cur - &prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Both sides of the divisibility equivalence
/// `psi_a(k) | psi_a(m)  <=>  k | m` (for `k, m >= 1`); the equivalence
/// itself is checked by the verification suite, not assumed here.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DividesEquiv {
    pub lhs: bool,
    pub rhs: bool,
}

pub fn psi_divides_equiv(a: u64, k: u64, m: u64) -> Result<DividesEquiv, PellError> {
    if k == 0 {
        return Err(PellError::IndexPositive { name: "k" });
    }
    if m == 0 {
        return Err(PellError::IndexPositive { name: "m" });
    }
    let mut seq = LucasSeq::new(a)?;
    let pk = seq.psi(k);
    let pm = seq.psi(m);
    Ok(DividesEquiv { lhs: (pm % pk).is_zero(), rhs: m % k == 0 })
}

/// The six auxiliary quantities of the Pell witness system, computed in
/// dependency order from `(A, B, C, e, i, j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PellAux {
    pub a: u64,
    pub b: u64,
    pub c: BigInt,
    pub e: u64,
    pub i: u64,
    pub j: u64,
    pub d: BigInt,
    pub e_aux: BigInt,
    pub f: BigInt,
    pub g: BigInt,
    pub h: BigInt,
    pub i_aux: BigInt,
}

/// `D = (A^2-1)C^2+1`, `E = 2(i+1)D(e+1)C^2`, `F = (A^2-1)E^2+1`,
/// `G = A+F(F-A)`, `H = B+2jC`, `I = (G^2-1)H^2+1`.
pub fn pell_aux(a: u64, b: u64, c: &BigInt, e: u64, i: u64, j: u64) -> Result<PellAux, PellError> {
    if a <= 1 || b == 0 {
        return Err(PellError::AuxRange { a, b });
    }
    let a_big = BigInt::from(a);
    let a2m1 = &a_big * &a_big - 1;
    let c2 = c * c;
    let d = &a2m1 * &c2 + 1;
    let e_aux = BigInt::from(2 * (i + 1)) * &d * BigInt::from(e + 1) * &c2;
    let f = &a2m1 * &e_aux * &e_aux + 1;
    let g = &a_big + &f * (&f - &a_big);
    let h = BigInt::from(b) + BigInt::from(2 * j) * c;
    let i_aux = (&g * &g - 1) * &h * &h + 1;
    Ok(PellAux { a, b, c: c.clone(), e, i, j, d, e_aux, f, g, h, i_aux })
}

impl PellAux {
    /// The three-way condition of the witness system:
    /// `DFI` is a perfect square, `F | (H - C)`, and `B <= C`.
    pub fn conditions_hold(&self) -> bool {
        BigInt::from(self.b) <= self.c
            && ((&self.h - &self.c) % &self.f).is_zero()
            && is_square(&(&self.d * &self.f * &self.i_aux))
    }
}

/// Convenience wrapper over [`pell_aux`] + [`PellAux::conditions_hold`].
pub fn pell_conditions(
    a: u64,
    b: u64,
    c: &BigInt,
    e: u64,
    i: u64,
    j: u64,
) -> Result<bool, PellError> {
    Ok(pell_aux(a, b, c, e, i, j)?.conditions_hold())
}

/// Scans `(i, j)` in lexicographic order within the caps for a witness of
/// `C = psi_A(B)` (with `C` computed internally). `None` does not refute
/// the characterization: witnesses may simply exceed the caps.
pub fn pell_witness_scan(
    a: u64,
    b: u64,
    e: u64,
    i_cap: u64,
    j_cap: u64,
) -> Result<Option<(u64, u64)>, PellError> {
    if a <= 1 || b == 0 {
        return Err(PellError::AuxRange { a, b });
    }
    let c = LucasSeq::new(a)?.psi(b);
    for i in 0..=i_cap {
        for j in 0..=j_cap {
            if pell_conditions(a, b, &c, e, i, j)? {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

/// The hidden unknowns of the sum-of-squares form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SosHiddenUnknowns {
    pub alpha: BigInt,
    pub beta: BigInt,
    pub gamma: BigInt,
}

/// `(DFI - alpha^2)^2 + (F beta - H + C)^2 (F beta + H - C)^2 + (B + gamma - C)^2`.
///
/// Always non-negative; zero for some natural `(alpha, beta, gamma)` exactly
/// when the witness conditions hold (take `alpha^2 = DFI`, `F beta = |H - C|`,
/// `gamma = C - B`).
pub fn pell_sos_eval(
    a: u64,
    b: u64,
    c: &BigInt,
    e: u64,
    i: u64,
    j: u64,
    hidden: &SosHiddenUnknowns,
) -> Result<BigInt, PellError> {
    let aux = pell_aux(a, b, c, e, i, j)?;
    Ok(sos_value(&aux, hidden))
}

pub(crate) fn sos_value(aux: &PellAux, hidden: &SosHiddenUnknowns) -> BigInt {
    let dfi = &aux.d * &aux.f * &aux.i_aux;
    let t1 = &dfi - &hidden.alpha * &hidden.alpha;
    let fb = &aux.f * &hidden.beta;
    let t2a = &fb - &aux.h + &aux.c;
    let t2b = &fb + &aux.h - &aux.c;
    let t3 = BigInt::from(aux.b) + &hidden.gamma - &aux.c;
    &t1 * &t1 + (&t2a * &t2a) * (&t2b * &t2b) + &t3 * &t3
}

/// The hidden unknowns that zero the sum of squares whenever the conditions
/// hold. Returns `None` when they do not (some component has no natural
/// witness).
pub fn sos_witness(aux: &PellAux) -> Option<SosHiddenUnknowns> {
    let dfi = &aux.d * &aux.f * &aux.i_aux;
    if !is_square(&dfi) {
        return None;
    }
    let alpha = isqrt(&dfi);
    let diff = (&aux.h - &aux.c).abs();
    if !(&diff % &aux.f).is_zero() {
        return None;
    }
    let beta = diff / &aux.f;
    let gamma = &aux.c - BigInt::from(aux.b);
    if gamma.is_negative() {
        return None;
    }
    Some(SosHiddenUnknowns { alpha, beta, gamma })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lucas_initial_values() {
        let p0 = lucas_pair(2, 0).unwrap();
        assert_eq!((p0.chi, p0.psi), (BigInt::one(), BigInt::zero()));
        let p1 = lucas_pair(2, 1).unwrap();
        assert_eq!((p1.chi, p1.psi), (BigInt::from(2), BigInt::one()));
    }

    #[test]
    fn lucas_fourth_entry() {
        let p = lucas_pair(2, 4).unwrap();
        assert_eq!((p.chi.clone(), p.psi.clone()), (BigInt::from(97), BigInt::from(56)));
        assert_eq!(&p.chi * &p.chi - 3 * &p.psi * &p.psi, BigInt::one());
    }

    #[test]
    fn lucas_rejects_small_parameter() {
        assert_eq!(lucas_pair(1, 3).unwrap_err(), PellError::ParamA(1));
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(alpha_seq(4, 3).unwrap(), BigInt::from(15));
        assert_eq!(alpha_seq(4, 3).unwrap(), lucas_pair(2, 3).unwrap().psi);
        assert_eq!(alpha_seq(7, 0).unwrap(), BigInt::zero());
        assert_eq!(alpha_seq(2, 1).unwrap_err(), PellError::ParamB(2));
        // consecutive values solve x^2 - bxy + y^2 = 1
        let x = alpha_seq(4, 3).unwrap();
        let y = alpha_seq(4, 4).unwrap();
        assert_eq!(&x * &x - 4 * &x * &y + &y * &y, BigInt::one());
    }

    #[test]
    fn psi_divisibility_examples() {
        // psi_2 = 0, 1, 4, 15, 56: 4 | 56 and 2 | 4
        assert_eq!(psi_divides_equiv(2, 2, 4).unwrap(), DividesEquiv { lhs: true, rhs: true });
        // 4 does not divide 15, 2 does not divide 3
        assert_eq!(psi_divides_equiv(2, 2, 3).unwrap(), DividesEquiv { lhs: false, rhs: false });
        // psi_3(1) = 1 divides everything
        assert_eq!(psi_divides_equiv(3, 1, 7).unwrap(), DividesEquiv { lhs: true, rhs: true });
        assert!(psi_divides_equiv(2, 0, 1).is_err());
    }

    #[test]
    fn aux_chain_example() {
        // (A,B,C,e,i,j) = (2,1,1,0,6,0)
        let aux = pell_aux(2, 1, &BigInt::one(), 0, 6, 0).unwrap();
        assert_eq!(aux.d, BigInt::from(4));
        assert_eq!(aux.e_aux, BigInt::from(56));
        assert_eq!(aux.f, BigInt::from(9409)); // 97^2
        let g_expected = BigInt::from(2) + BigInt::from(9409) * BigInt::from(9407);
        assert_eq!(aux.g, g_expected);
        assert_eq!(aux.h, BigInt::one());
        assert_eq!(aux.i_aux, &aux.g * &aux.g);
        assert!(aux.conditions_hold());
        // DFI = (2 * 97 * G)^2
        let dfi = &aux.d * &aux.f * &aux.i_aux;
        let root = BigInt::from(194) * &aux.g;
        assert_eq!(dfi, &root * &root);
    }

    #[test]
    fn aux_chain_non_witness() {
        let aux = pell_aux(2, 1, &BigInt::one(), 0, 0, 0).unwrap();
        assert_eq!(aux.d, BigInt::from(4));
        assert_eq!(aux.e_aux, BigInt::from(8));
        assert_eq!(aux.f, BigInt::from(193));
        assert!(!is_square(&aux.f));
        assert!(!aux.conditions_hold());
    }

    #[test]
    fn d_is_square_when_c_is_psi() {
        // D = (A^2-1) psi^2 + 1 = chi^2 by the Pell identity.
        for a in 2u64..=3 {
            let mut seq = LucasSeq::new(a).unwrap();
            for b in 1u64..=4 {
                let aux = pell_aux(a, b, &seq.psi(b), 0, 0, 0).unwrap();
                let chi = seq.chi(b);
                assert_eq!(aux.d, &chi * &chi);
            }
        }
    }

    #[test]
    fn conditions_fail_when_b_exceeds_c() {
        for i in 0..4 {
            for j in 0..4 {
                assert!(!pell_conditions(2, 2, &BigInt::one(), 0, i, j).unwrap());
            }
        }
    }

    #[test]
    fn witness_scan_example() {
        assert_eq!(pell_witness_scan(2, 1, 0, 10, 10).unwrap(), Some((6, 0)));
        assert_eq!(pell_witness_scan(2, 1, 0, 0, 0).unwrap(), None);
        // postcondition restated: the returned pair satisfies the conditions
        let c = LucasSeq::new(2).unwrap().psi(1);
        assert!(pell_conditions(2, 1, &c, 0, 6, 0).unwrap());
    }

    #[test]
    fn sos_zero_at_constructed_witness() {
        let aux = pell_aux(2, 1, &BigInt::one(), 0, 6, 0).unwrap();
        let hidden = sos_witness(&aux).unwrap();
        assert_eq!(hidden.alpha, BigInt::from(194) * &aux.g);
        assert_eq!(hidden.beta, BigInt::zero());
        assert_eq!(hidden.gamma, BigInt::zero());
        assert_eq!(sos_value(&aux, &hidden), BigInt::zero());
    }

    #[test]
    fn sos_has_no_small_zero_without_witness() {
        // DFI is not a square here, so no alpha can zero the first term.
        let aux = pell_aux(2, 1, &BigInt::one(), 0, 0, 0).unwrap();
        assert!(sos_witness(&aux).is_none());
        let dfi_root = isqrt(&(&aux.d * &aux.f * &aux.i_aux));
        for da in -2i64..=2 {
            let alpha = (&dfi_root + BigInt::from(da)).max(BigInt::zero());
            for beta in 0u32..3 {
                for gamma in 0u32..3 {
                    let hidden = SosHiddenUnknowns {
                        alpha: alpha.clone(),
                        beta: BigInt::from(beta),
                        gamma: BigInt::from(gamma),
                    };
                    assert!(sos_value(&aux, &hidden) > BigInt::zero());
                }
            }
        }
    }
}
