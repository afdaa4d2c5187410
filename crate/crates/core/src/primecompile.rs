//! Prime-representing polynomial constructions.
//!
//! Three layers live here:
//!
//! * a small compiler from diophantine conditions (equality, divisibility,
//!   congruence, order, squareness) to a single sum-of-squares polynomial
//!   whose zeros over the naturals are exactly the satisfying assignments;
//! * the explicit 26-variable polynomial over `a..z` whose zero set (for
//!   fixed `k`) certifies that `k + 1` is prime, grounded in Wilson's
//!   theorem `k + 1 prime <=> k + 1 | k! + 1`;
//! * the auxiliary chain `W, U, M, S, T, Q, L, A..I` behind the five-fold
//!   prime condition, and the 10-variable polynomial obtained by feeding
//!   those conditions into the `K` polynomial. The 10-variable polynomial
//!   has degree in the thousands, so it is kept as an expression DAG.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::arith::{is_square, isqrt};
use crate::dag::{DagBuilder, ExprDag, NodeId};
use crate::kpoly::KFamily;
use crate::poly::{sum, Polynomial};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PrimeError {
    #[error("{name} must be >= 1")]
    RangePositive { name: &'static str },
    #[error("relation list is empty")]
    EmptyRelations,
    #[error("relation expression arity {got} does not match the {want} source variables")]
    RelationArity { got: usize, want: usize },
    #[error("point has {got} coordinates, expected {want}")]
    PointLength { got: usize, want: usize },
    #[error("probe box {0} exceeds the combinatorial guard (max 3)")]
    BoxTooLarge(u64),
    #[error("probe k {0} exceeds the arithmetic guard (max 1000000)")]
    ProbeKTooLarge(u64),
    #[error("unknown auxiliary symbol {0:?}")]
    UnknownSymbol(String),
}

// ---------------------------------------------------------------------------
// Relation IR and the sum-of-squares compiler
// ---------------------------------------------------------------------------

/// One diophantine condition over a shared variable list.
///
/// `Congruent(a, b, c)` uses the classical one-unknown encoding
/// `a - b - c*x = 0`, which over natural unknowns means `b <= a` and
/// `c | a - b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Relation {
    PolyEq(Polynomial),
    Divides(Polynomial, Polynomial),
    Congruent(Polynomial, Polynomial, Polynomial),
    Leq(Polynomial, Polynomial),
    Lt(Polynomial, Polynomial),
    IsSquare(Polynomial),
}

impl Relation {
    fn exprs(&self) -> Vec<&Polynomial> {
        match self {
            Relation::PolyEq(p) | Relation::IsSquare(p) => vec![p],
            Relation::Divides(a, b) | Relation::Leq(a, b) | Relation::Lt(a, b) => vec![a, b],
            Relation::Congruent(a, b, c) => vec![a, b, c],
        }
    }

    fn unknowns_needed(&self) -> usize {
        match self {
            Relation::PolyEq(_) => 0,
            _ => 1,
        }
    }
}

/// One polynomial equal to the sum of the squared condition encodings.
/// Zero at an extended point iff every source relation holds there.
#[derive(Debug, Clone)]
pub struct CompiledSystem {
    pub poly: Polynomial,
    /// Source variables followed by the introduced unknowns.
    pub variables: Vec<String>,
    pub introduced_unknowns: Vec<String>,
    /// Source parameters plus implicit unknowns, the conventional count.
    pub total_variables: usize,
}

/// Compiles a conjunction of relations into one sum-of-squares polynomial.
/// Implicit unknowns are appended after the source variables with
/// deterministic names `u0, u1, ...`.
pub fn compile(relations: &[Relation], source_vars: &[String]) -> Result<CompiledSystem, PrimeError> {
    if relations.is_empty() {
        return Err(PrimeError::EmptyRelations);
    }
    let source = source_vars.len();
    for rel in relations {
        for e in rel.exprs() {
            if e.arity() != source {
                return Err(PrimeError::RelationArity { got: e.arity(), want: source });
            }
        }
    }
    let extra: usize = relations.iter().map(Relation::unknowns_needed).sum();
    let total = source + extra;

    let mut variables = source_vars.to_vec();
    let mut introduced = Vec::with_capacity(extra);
    for i in 0..extra {
        let mut name = format!("u{i}");
        while variables.contains(&name) {
            name.push('_');
        }
        variables.push(name.clone());
        introduced.push(name);
    }

    let lift = |p: &Polynomial| -> Polynomial {
        p.substitute(&HashMap::new(), total).expect("lift to extended arity")
    };
    let mut next_unknown = source;
    let mut squares = Vec::with_capacity(relations.len());
    for rel in relations {
        let mut unknown = || {
            let u = Polynomial::variable(total, next_unknown).expect("in range");
            next_unknown += 1;
            u
        };
        let encoded = match rel {
            Relation::PolyEq(p) => lift(p),
            Relation::Divides(a, b) => {
                let x = unknown();
                lift(a).mul(&x).expect("arity").sub(&lift(b)).expect("arity")
            }
            Relation::Congruent(a, b, c) => {
                let x = unknown();
                lift(a)
                    .sub(&lift(b))
                    .expect("arity")
                    .sub(&lift(c).mul(&x).expect("arity"))
                    .expect("arity")
            }
            Relation::Leq(a, b) => {
                let x = unknown();
                lift(a).add(&x).expect("arity").sub(&lift(b)).expect("arity")
            }
            Relation::Lt(a, b) => {
                let x = unknown();
                lift(a)
                    .add(&Polynomial::one(total))
                    .expect("arity")
                    .add(&x)
                    .expect("arity")
                    .sub(&lift(b))
                    .expect("arity")
            }
            Relation::IsSquare(a) => {
                let x = unknown();
                x.pow(2).sub(&lift(a)).expect("arity")
            }
        };
        squares.push(encoded.pow(2));
    }
    Ok(CompiledSystem {
        poly: sum(total, squares).expect("uniform arity"),
        variables,
        introduced_unknowns: introduced,
        total_variables: total,
    })
}

// ---------------------------------------------------------------------------
// The 26-variable polynomial
// ---------------------------------------------------------------------------

/// Variable order of the 26-variable polynomial: `a..z` alphabetically.
pub fn poly26_vars() -> Vec<String> {
    (b'a'..=b'z').map(|c| (c as char).to_string()).collect()
}

/// Index of the parameter variable `k` in the alphabetical order.
pub const POLY26_K_INDEX: usize = 10;

fn v26(i: usize) -> Polynomial {
    Polynomial::variable(26, i).expect("index < 26")
}

fn c26(n: i64) -> Polynomial {
    Polynomial::constant(26, n)
}

/// The 14 inner polynomials, before squaring, in source order.
/// Letters map to indices alphabetically: a = 0, ..., z = 25.
pub fn poly26_component_polys() -> Vec<Polynomial> {
    let [a, b, c, d, e, f, g, h, i, j, k, l, m, n, o, p, q, r, s, t, u, v, w, x, y, z] =
        std::array::from_fn::<Polynomial, 26, _>(v26);
    let sq = |p: &Polynomial| p.pow(2);

    vec![
        // w z + h + j - q
        &(&(&(&w * &z) + &h) + &j) - &q,
        // (g k + g + k)(h + j) + h - z
        &(&(&(&(&(&g * &k) + &g) + &k) * &(&h + &j)) + &h) - &z,
        // (2k)^3 (2k + 2)(n + 1)^2 + 1 - f^2
        &(&(&(&(&c26(2) * &k).pow(3) * &(&(&c26(2) * &k) + &c26(2))) * &sq(&(&n + &c26(1))))
            + &c26(1))
            - &sq(&f),
        // p + q + z + 2n - e
        &(&(&(&p + &q) + &z) + &(&c26(2) * &n)) - &e,
        // e^3 (e + 2)(a + 1)^2 + 1 - o^2
        &(&(&(&e.pow(3) * &(&e + &c26(2))) * &sq(&(&a + &c26(1)))) + &c26(1)) - &sq(&o),
        // x^2 - (a^2 - 1) y^2 - 1
        &(&sq(&x) - &(&(&sq(&a) - &c26(1)) * &sq(&y))) - &c26(1),
        // 16 (a^2 - 1) r^2 y^2 y^2 + 1 - u^2
        &(&(&(&(&c26(16) * &(&sq(&a) - &c26(1))) * &sq(&r)) * &(&sq(&y) * &sq(&y))) + &c26(1))
            - &sq(&u),
        // ((a + u^2 (u^2 - a))^2 - 1)(n + 4 d y)^2 + 1 - (x + c u)^2
        &(&(&(&sq(&(&a + &(&sq(&u) * &(&sq(&u) - &a)))) - &c26(1))
            * &sq(&(&n + &(&(&c26(4) * &d) * &y))))
            + &c26(1))
            - &sq(&(&x + &(&c * &u))),
        // m^2 - (a^2 - 1) l^2 - 1
        &(&sq(&m) - &(&(&sq(&a) - &c26(1)) * &sq(&l))) - &c26(1),
        // k + i (a - 1) - l
        &(&k + &(&i * &(&a - &c26(1)))) - &l,
        // n + l + v - y
        &(&(&n + &l) + &v) - &y,
        // p + l (a - n - 1) + b (2 a (n + 1) - (n + 1)^2 - 1) - m
        &(&(&p + &(&l * &(&(&a - &n) - &c26(1))))
            + &(&b
                * &(&(&(&(&c26(2) * &a) * &(&n + &c26(1))) - &sq(&(&n + &c26(1)))) - &c26(1))))
            - &m,
        // q + y (a - p - 1) + s (2 a (p + 1) - (p + 1)^2 - 1) - x
        &(&(&q + &(&y * &(&(&a - &p) - &c26(1))))
            + &(&s
                * &(&(&(&(&c26(2) * &a) * &(&p + &c26(1))) - &sq(&(&p + &c26(1)))) - &c26(1))))
            - &x,
        // z + p l (a - p) + t (2 a p - p^2 - 1) - p m
        &(&(&z + &(&(&p * &l) * &(&a - &p)))
            + &(&t * &(&(&(&(&c26(2) * &a) * &p) - &sq(&p)) - &c26(1))))
            - &(&p * &m),
    ]
}

/// The full 26-variable polynomial: the sum of the squared components.
pub fn build_poly26() -> Polynomial {
    let squares = poly26_component_polys().into_iter().map(|p| p.pow(2));
    sum(26, squares).expect("uniform arity 26")
}

/// DAG form of the 26-variable polynomial (used to exercise expansion).
pub fn poly26_dag() -> ExprDag {
    let mut b = DagBuilder::new(poly26_vars());
    let slots: Vec<NodeId> = (0..26).map(|i| b.var(i)).collect();
    let mut squares = Vec::new();
    for comp in poly26_component_polys() {
        let node = b.polynomial(&comp, &slots);
        squares.push(b.pow(node, 2));
    }
    let root = b.add(&squares);
    b.finish(root)
}

/// Direct arithmetic evaluation of the 14 components, written out from the
/// same source as [`poly26_component_polys`] but with no polynomial
/// machinery; serves as the independent oracle for the expansion.
pub fn poly26_components(point: &[BigInt]) -> Result<Vec<BigInt>, PrimeError> {
    if point.len() != 26 {
        return Err(PrimeError::PointLength { got: point.len(), want: 26 });
    }
    let [a, b, c, d, e, f, g, h, i, j, k, l, m, n, o, p, q, r, s, t, u, v, w, x, y, z] =
        std::array::from_fn::<&BigInt, 26, _>(|idx| &point[idx]);
    let one = BigInt::one();
    let sq = |v: &BigInt| v * v;

    let comp3 = {
        let two_k = 2 * k;
        &two_k * &two_k * &two_k * (&two_k + 2) * sq(&(n + &one)) + &one - sq(f)
    };
    let comp8 = {
        let inner = a + sq(u) * (sq(u) - a);
        (sq(&inner) - &one) * sq(&(n + 4 * d * y)) + &one - sq(&(x + c * u))
    };
    Ok(vec![
        w * z + h + j - q,
        (g * k + g + k) * (h + j) + h - z,
        comp3,
        p + q + z + 2 * n - e,
        e * e * e * (e + 2) * sq(&(a + &one)) + &one - sq(o),
        sq(x) - (sq(a) - &one) * sq(y) - &one,
        16 * (sq(a) - &one) * sq(r) * sq(y) * sq(y) + &one - sq(u),
        comp8,
        sq(m) - (sq(a) - &one) * sq(l) - &one,
        k + i * (a - &one) - l,
        n + l + v - y,
        p + l * (a - n - &one) + b * (2 * a * (n + &one) - sq(&(n + &one)) - &one) - m,
        q + y * (a - p - &one) + s * (2 * a * (p + &one) - sq(&(p + &one)) - &one) - x,
        z + p * l * (a - p) + t * (2 * a * p - sq(p) - &one) - p * m,
    ])
}

/// Wilson primality oracle: `k + 1` is prime iff `k + 1` divides `k! + 1`.
/// The factorial is accumulated modulo `k + 1`, never in full.
pub fn wilson_is_prime(k: u64) -> Result<bool, PrimeError> {
    if k == 0 {
        return Err(PrimeError::RangePositive { name: "k" });
    }
    let modulus = u128::from(k) + 1;
    let mut fact: u128 = 1;
    for t in 1..=u128::from(k) {
        fact = fact * t % modulus;
    }
    Ok((fact + 1) % modulus == 0)
}

/// Result of the bounded zero scan of the 26-variable polynomial.
#[derive(Debug, Clone)]
pub struct ProbeReport {
    pub k: u64,
    pub box_bound: u64,
    pub points_scanned: u64,
    pub zero_count: u64,
    /// Up to eight witnesses, as full 26-coordinate assignments.
    pub zeros: Vec<Vec<u64>>,
    /// Wilson verdict for `k + 1`, for context.
    pub k_plus_1_prime: bool,
    /// False only if a zero was found while `k + 1` is composite.
    pub sound: bool,
}

/// Scans every assignment of the 25 non-`k` variables over `[0, box]` and
/// records zeros of the 26-variable polynomial. A zero with composite
/// `k + 1` falsifies the construction; absence of zeros proves nothing
/// (genuine witnesses are astronomically large).
pub fn poly26_soundness_probe(k: u64, box_bound: u64) -> Result<ProbeReport, PrimeError> {
    if k == 0 {
        return Err(PrimeError::RangePositive { name: "k" });
    }
    if box_bound > 3 {
        return Err(PrimeError::BoxTooLarge(box_bound));
    }
    if k > 1_000_000 {
        return Err(PrimeError::ProbeKTooLarge(k));
    }
    let radix = box_bound + 1;
    let free = 25usize;
    // Fan out over a prefix of the odometer so chunks parallelize.
    let mut prefix_len = 0usize;
    let mut chunks: u64 = 1;
    while chunks < 256 && prefix_len < free {
        chunks *= radix;
        prefix_len += 1;
    }
    let suffix_len = free - prefix_len;
    let suffix_count = radix.pow(suffix_len as u32);

    let results: Vec<(u64, Vec<Vec<u64>>)> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut point = [0i128; 26];
            point[POLY26_K_INDEX] = k as i128;
            let mut free_vals = [0u64; 25];
            let mut rem = chunk;
            for slot in 0..prefix_len {
                free_vals[slot] = rem % radix;
                rem /= radix;
            }
            let mut zeros = Vec::new();
            let mut zero_count = 0u64;
            for _ in 0..suffix_count {
                let mut fi = 0;
                for (idx, val) in point.iter_mut().enumerate() {
                    if idx != POLY26_K_INDEX {
                        *val = free_vals[fi] as i128;
                        fi += 1;
                    }
                }
                if poly26_components_all_zero_i128(&point) {
                    zero_count += 1;
                    if zeros.len() < 8 {
                        zeros.push(point.iter().map(|&v| v as u64).collect());
                    }
                }
                // odometer over the suffix digits
                let mut slot = prefix_len;
                while slot < free {
                    free_vals[slot] += 1;
                    if free_vals[slot] < radix {
                        break;
                    }
                    free_vals[slot] = 0;
                    slot += 1;
                }
            }
            (zero_count, zeros)
        })
        .collect();

    let zero_count: u64 = results.iter().map(|(c, _)| c).sum();
    let mut zeros = Vec::new();
    for (_, zs) in results {
        for z in zs {
            if zeros.len() < 8 {
                zeros.push(z);
            }
        }
    }
    let prime = wilson_is_prime(k)?;
    Ok(ProbeReport {
        k,
        box_bound,
        points_scanned: chunks * suffix_count,
        zero_count,
        zeros,
        k_plus_1_prime: prime,
        sound: zero_count == 0 || prime,
    })
}

/// Early-exit component evaluation in fixed-width arithmetic. Bounds: with
/// `k <= 10^6` and coordinates `<= 3` every component stays far inside
/// i128 range (the largest is the `(2k)^3 (2k+2) (n+1)^2` term, about
/// `2.6 * 10^26`).
fn poly26_components_all_zero_i128(pt: &[i128; 26]) -> bool {
    let [a, b, c, d, e, f, g, h, i, j, k, l, m, n, o, p, q, r, s, t, u, v, w, x, y, z] = *pt;
    if w * z + h + j - q != 0 {
        return false;
    }
    if (g * k + g + k) * (h + j) + h - z != 0 {
        return false;
    }
    if p + q + z + 2 * n - e != 0 {
        return false;
    }
    if n + l + v - y != 0 {
        return false;
    }
    if k + i * (a - 1) - l != 0 {
        return false;
    }
    if x * x - (a * a - 1) * y * y - 1 != 0 {
        return false;
    }
    if m * m - (a * a - 1) * l * l - 1 != 0 {
        return false;
    }
    let two_k = 2 * k;
    let np1 = n + 1;
    if two_k * two_k * two_k * (two_k + 2) * np1 * np1 + 1 - f * f != 0 {
        return false;
    }
    if e * e * e * (e + 2) * (a + 1) * (a + 1) + 1 - o * o != 0 {
        return false;
    }
    if 16 * (a * a - 1) * r * r * y * y * y * y + 1 - u * u != 0 {
        return false;
    }
    let inner = a + u * u * (u * u - a);
    let ndy = n + 4 * d * y;
    let xcu = x + c * u;
    if (inner * inner - 1) * ndy * ndy + 1 - xcu * xcu != 0 {
        return false;
    }
    if p + l * (a - n - 1) + b * (2 * a * np1 - np1 * np1 - 1) - m != 0 {
        return false;
    }
    let pp1 = p + 1;
    if q + y * (a - p - 1) + s * (2 * a * pp1 - pp1 * pp1 - 1) - x != 0 {
        return false;
    }
    if z + p * l * (a - p) + t * (2 * a * p - p * p - 1) - p * m != 0 {
        return false;
    }
    true
}

// ---------------------------------------------------------------------------
// The auxiliary chain and the five-fold prime condition
// ---------------------------------------------------------------------------

/// Base unknowns of the prime condition system (`k` is the parameter).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BaseAssignment {
    pub k: u64,
    pub f: u64,
    pub i: u64,
    pub j: u64,
    pub m: u64,
    pub u: u64,
    pub r: u64,
    pub s: u64,
    pub t: u64,
}

/// Names of the derived quantities, in dependency order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AuxSymbol {
    W,
    U,
    M,
    S,
    T,
    Q,
    L,
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    H,
    I,
}

impl AuxSymbol {
    pub const ALL: [AuxSymbol; 16] = [
        AuxSymbol::W,
        AuxSymbol::U,
        AuxSymbol::M,
        AuxSymbol::S,
        AuxSymbol::T,
        AuxSymbol::Q,
        AuxSymbol::L,
        AuxSymbol::A,
        AuxSymbol::B,
        AuxSymbol::C,
        AuxSymbol::D,
        AuxSymbol::E,
        AuxSymbol::F,
        AuxSymbol::G,
        AuxSymbol::H,
        AuxSymbol::I,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AuxSymbol::W => "W",
            AuxSymbol::U => "U",
            AuxSymbol::M => "M",
            AuxSymbol::S => "S",
            AuxSymbol::T => "T",
            AuxSymbol::Q => "Q",
            AuxSymbol::L => "L",
            AuxSymbol::A => "A",
            AuxSymbol::B => "B",
            AuxSymbol::C => "C",
            AuxSymbol::D => "D",
            AuxSymbol::E => "E",
            AuxSymbol::F => "F",
            AuxSymbol::G => "G",
            AuxSymbol::H => "H",
            AuxSymbol::I => "I",
        }
    }
}

/// The condition references a quantity `Z` that the auxiliary list never
/// defines. The structural parallel with the `HL` term of the `n`
/// substitution suggests `Z = L`, which is the default; the choice stays
/// configurable and is recorded in every report and artifact header.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ZChoice {
    Aux(AuxSymbol),
    Const(BigInt),
}

impl Default for ZChoice {
    fn default() -> Self {
        ZChoice::Aux(AuxSymbol::L)
    }
}

impl fmt::Display for ZChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZChoice::Aux(s) => write!(f, "{}", s.name()),
            ZChoice::Const(c) => write!(f, "{c}"),
        }
    }
}

impl FromStr for ZChoice {
    type Err = PrimeError;

    fn from_str(s: &str) -> Result<Self, PrimeError> {
        for sym in AuxSymbol::ALL {
            if sym.name() == s {
                return Ok(ZChoice::Aux(sym));
            }
        }
        BigInt::from_str(s)
            .map(ZChoice::Const)
            .map_err(|_| PrimeError::UnknownSymbol(s.to_string()))
    }
}

/// All derived quantities at one base assignment, computed exactly in
/// dependency order `W, U, M, S, T, Q, L, A, B, C, D, E, F, G, H, I`.
#[derive(Debug, Clone)]
pub struct AuxAssignment {
    pub base: BaseAssignment,
    pub w: BigInt,
    pub u: BigInt,
    pub m: BigInt,
    pub s: BigInt,
    pub t: BigInt,
    pub q: BigInt,
    pub l: BigInt,
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
    pub e: BigInt,
    pub f: BigInt,
    pub g: BigInt,
    pub h: BigInt,
    pub i: BigInt,
}

/// `W = 100 f k (k+1)`, `U = 100 u^3 W^3 + 1`, `M = 100 m U W + 1`,
/// `S = (M-1)s + k + 1`, `T = (MU-1)t + W - k + 1`, `Q = 2MW - W^2 - 1`,
/// `L = (k+1)Q`, `A = M(U+1)`, `B = W+1`, `C = r+W+1`,
/// `D = (A^2-1)C^2 + 1`, `E = 2iC^2LD`, `F = (A^2-1)E^2 + 1`,
/// `G = A + F(F-A)`, `H = B + 2(j-1)C`, `I = (G^2-1)H^2 + 1`.
pub fn total_aux(base: BaseAssignment) -> Result<AuxAssignment, PrimeError> {
    for (name, v) in [
        ("f", base.f),
        ("i", base.i),
        ("j", base.j),
        ("m", base.m),
        ("u", base.u),
    ] {
        if v == 0 {
            return Err(PrimeError::RangePositive { name });
        }
    }
    let big = BigInt::from;
    let (k, f, i, j, m, u, r, s, t) = (
        big(base.k),
        big(base.f),
        big(base.i),
        big(base.j),
        big(base.m),
        big(base.u),
        big(base.r),
        big(base.s),
        big(base.t),
    );
    let w = 100 * &f * &k * (&k + 1);
    let uu = 100 * &u * &u * &u * &w * &w * &w + 1;
    let mm = 100 * &m * &uu * &w + 1;
    let ss = (&mm - 1) * &s + &k + 1;
    let tt = (&mm * &uu - 1) * &t + &w - &k + 1;
    let q = 2 * &mm * &w - &w * &w - 1;
    let l = (&k + 1) * &q;
    let a = &mm * (&uu + 1);
    let b = &w + 1;
    let c = &r + &w + 1;
    let d = (&a * &a - 1) * &c * &c + 1;
    let e = 2 * &i * &c * &c * &l * &d;
    let ff = (&a * &a - 1) * &e * &e + 1;
    let g = &a + &ff * (&ff - &a);
    let h = &b + 2 * (&j - 1) * &c;
    let ii = (&g * &g - 1) * &h * &h + 1;
    Ok(AuxAssignment {
        base,
        w,
        u: uu,
        m: mm,
        s: ss,
        t: tt,
        q,
        l,
        a,
        b,
        c,
        d,
        e,
        f: ff,
        g,
        h,
        i: ii,
    })
}

impl AuxAssignment {
    pub fn get(&self, sym: AuxSymbol) -> &BigInt {
        match sym {
            AuxSymbol::W => &self.w,
            AuxSymbol::U => &self.u,
            AuxSymbol::M => &self.m,
            AuxSymbol::S => &self.s,
            AuxSymbol::T => &self.t,
            AuxSymbol::Q => &self.q,
            AuxSymbol::L => &self.l,
            AuxSymbol::A => &self.a,
            AuxSymbol::B => &self.b,
            AuxSymbol::C => &self.c,
            AuxSymbol::D => &self.d,
            AuxSymbol::E => &self.e,
            AuxSymbol::F => &self.f,
            AuxSymbol::G => &self.g,
            AuxSymbol::H => &self.h,
            AuxSymbol::I => &self.i,
        }
    }

    pub fn z_value(&self, z: &ZChoice) -> BigInt {
        match z {
            ZChoice::Aux(sym) => self.get(*sym).clone(),
            ZChoice::Const(c) => c.clone(),
        }
    }

    /// First squareness operand, `(M^2 - 1)S^2 + 1`.
    pub fn x1_value(&self) -> BigInt {
        (&self.m * &self.m - 1) * &self.s * &self.s + 1
    }

    /// Second squareness operand, `((MU)^2 - 1)T^2 + 1`.
    pub fn x2_value(&self) -> BigInt {
        let mu = &self.m * &self.u;
        (&mu * &mu - 1) * &self.t * &self.t + 1
    }

    /// Third squareness operand, `D F I`.
    pub fn x3_value(&self) -> BigInt {
        &self.d * &self.f * &self.i
    }

    /// Divisor of the divisibility condition, `F L` (never zero: `Q` is odd).
    pub fn p_value(&self) -> BigInt {
        &self.f * &self.l
    }

    /// Numerator of the divisibility condition,
    /// `(H-C)Z + F(f+1)Q + F(k+1)((W^2-1)Su - W^2 u^2 + 1)`.
    pub fn r_numerator(&self, z: &ZChoice) -> BigInt {
        let f_base = BigInt::from(self.base.f);
        let k_base = BigInt::from(self.base.k);
        let u_base = BigInt::from(self.base.u);
        let w2 = &self.w * &self.w;
        (&self.h - &self.c) * self.z_value(z)
            + &self.f * (&f_base + 1) * &self.q
            + &self.f * (&k_base + 1) * ((&w2 - 1) * &self.s * &u_base - &w2 * &u_base * &u_base + 1)
    }

    /// The strict inequality's two sides:
    /// `(4f^2-1)(r-mSTU)^2 + 4u^2S^2T^2  <  8fuST(r-mSTU)`.
    pub fn inequality_sides(&self) -> (BigInt, BigInt) {
        let f = BigInt::from(self.base.f);
        let m = BigInt::from(self.base.m);
        let u = BigInt::from(self.base.u);
        let r = BigInt::from(self.base.r);
        let stu = &self.s * &self.t * &self.u;
        let rm = &r - &m * &stu;
        let st = &self.s * &self.t;
        let lhs = (4 * &f * &f - 1) * &rm * &rm + 4 * &u * &u * &st * &st;
        let rhs = 8 * &f * &u * &st * &rm;
        (lhs, rhs)
    }

    /// The `v` substitution: `rhs - lhs - 1` of the inequality, so that
    /// `v >= 0` iff the strict inequality holds.
    pub fn v_value(&self) -> BigInt {
        let (lhs, rhs) = self.inequality_sides();
        rhs - lhs - 1
    }

    /// The `n` substitution:
    /// `MS + 2MUT + 4A^2CEGH + 2(HL + FfQ + Fk(W^2Su + W^2u^2))`.
    pub fn n_value(&self) -> BigInt {
        let f_base = BigInt::from(self.base.f);
        let k_base = BigInt::from(self.base.k);
        let u_base = BigInt::from(self.base.u);
        let w2 = &self.w * &self.w;
        &self.m * &self.s
            + 2 * &self.m * &self.u * &self.t
            + 4 * &self.a * &self.a * &self.c * &self.e * &self.g * &self.h
            + 2 * (&self.h * &self.l
                + &self.f * &f_base * &self.q
                + &self.f * &k_base * (&w2 * &self.s * &u_base + &w2 * &u_base * &u_base))
    }
}

/// Per-condition outcome of the five-fold prime condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionReport {
    pub sq_dfi: bool,
    pub sq_x1: bool,
    pub sq_x2: bool,
    pub inequality: bool,
    pub divisibility: bool,
    /// `f, i, j, m, u >= 1` and `r, s, t >= 0`; validated on entry.
    pub ranges_ok: bool,
    pub z_choice: String,
    pub overall: bool,
}

/// Evaluates the five conditions directly (squareness by exact integer
/// square root, the inequality by comparison, divisibility by remainder).
pub fn total_conditions(base: BaseAssignment, z: &ZChoice) -> Result<ConditionReport, PrimeError> {
    let aux = total_aux(base)?;
    Ok(conditions_from_aux(&aux, z))
}

pub fn conditions_from_aux(aux: &AuxAssignment, z: &ZChoice) -> ConditionReport {
    let sq_dfi = is_square(&aux.x3_value());
    let sq_x1 = is_square(&aux.x1_value());
    let sq_x2 = is_square(&aux.x2_value());
    let (lhs, rhs) = aux.inequality_sides();
    let inequality = lhs < rhs;
    let divisibility = aux.r_numerator(z).mod_floor(&aux.p_value()).is_zero();
    let overall = sq_dfi && sq_x1 && sq_x2 && inequality && divisibility;
    ConditionReport {
        sq_dfi,
        sq_x1,
        sq_x2,
        inequality,
        divisibility,
        ranges_ok: true,
        z_choice: z.to_string(),
        overall,
    }
}

// ---------------------------------------------------------------------------
// DAG forms: the compiled condition system and the 10-variable polynomial
// ---------------------------------------------------------------------------

/// Variable order of the 10-variable polynomial.
pub fn poly10_vars() -> Vec<String> {
    ["k", "f", "i", "j", "m", "u", "r", "s", "t", "y"]
        .iter()
        .map(ToString::to_string)
        .collect()
}

struct AuxNodes {
    w: NodeId,
    u: NodeId,
    m: NodeId,
    s: NodeId,
    t: NodeId,
    q: NodeId,
    l: NodeId,
    a: NodeId,
    b: NodeId,
    c: NodeId,
    d: NodeId,
    e: NodeId,
    f: NodeId,
    g: NodeId,
    h: NodeId,
    i: NodeId,
}

/// Builds the auxiliary chain over base variable nodes
/// `(k, f, i, j, m, u, r, s, t)`; hash-consing shares everything downstream.
fn build_aux_nodes(bld: &mut DagBuilder, base: &[NodeId; 9]) -> AuxNodes {
    let [k, f, i, j, m, u, r, s, t] = *base;
    let one = bld.constant(1);
    let hundred = bld.constant(100);
    let two = bld.constant(2);

    let k1 = bld.add(&[k, one]);
    let w = bld.mul(&[hundred, f, k, k1]);
    let u3 = bld.pow(u, 3);
    let w3 = bld.pow(w, 3);
    let u_big = {
        let prod = bld.mul(&[hundred, u3, w3]);
        bld.add(&[prod, one])
    };
    let m_big = {
        let prod = bld.mul(&[hundred, m, u_big, w]);
        bld.add(&[prod, one])
    };
    let s_big = {
        let mm1 = bld.sub(m_big, one);
        let prod = bld.mul(&[mm1, s]);
        bld.add(&[prod, k, one])
    };
    let t_big = {
        let mu = bld.mul(&[m_big, u_big]);
        let mum1 = bld.sub(mu, one);
        let prod = bld.mul(&[mum1, t]);
        let partial = bld.add(&[prod, w, one]);
        bld.sub(partial, k)
    };
    let q = {
        let mw2 = bld.mul(&[two, m_big, w]);
        let w2 = bld.pow(w, 2);
        let diff = bld.sub(mw2, w2);
        bld.sub(diff, one)
    };
    let l = bld.mul(&[k1, q]);
    let a = {
        let up1 = bld.add(&[u_big, one]);
        bld.mul(&[m_big, up1])
    };
    let b = bld.add(&[w, one]);
    let c = bld.add(&[r, w, one]);
    let a2m1 = {
        let a2 = bld.pow(a, 2);
        bld.sub(a2, one)
    };
    let d = {
        let c2 = bld.pow(c, 2);
        let prod = bld.mul(&[a2m1, c2]);
        bld.add(&[prod, one])
    };
    let e = {
        let c2 = bld.pow(c, 2);
        bld.mul(&[two, i, c2, l, d])
    };
    let f_big = {
        let e2 = bld.pow(e, 2);
        let prod = bld.mul(&[a2m1, e2]);
        bld.add(&[prod, one])
    };
    let g = {
        let fma = bld.sub(f_big, a);
        let prod = bld.mul(&[f_big, fma]);
        bld.add(&[a, prod])
    };
    let h = {
        let jm1 = bld.sub(j, one);
        let prod = bld.mul(&[two, jm1, c]);
        bld.add(&[b, prod])
    };
    let i_big = {
        let g2 = bld.pow(g, 2);
        let g2m1 = bld.sub(g2, one);
        let h2 = bld.pow(h, 2);
        let prod = bld.mul(&[g2m1, h2]);
        bld.add(&[prod, one])
    };
    AuxNodes {
        w,
        u: u_big,
        m: m_big,
        s: s_big,
        t: t_big,
        q,
        l,
        a,
        b,
        c,
        d,
        e,
        f: f_big,
        g,
        h,
        i: i_big,
    }
}

struct SlotNodes {
    x1: NodeId,
    x2: NodeId,
    x3: NodeId,
    p: NodeId,
    r_num: NodeId,
    n: NodeId,
    v: NodeId,
    /// Inequality sides, reused by the compiled condition system.
    lhs: NodeId,
    rhs: NodeId,
}

fn build_slot_nodes(bld: &mut DagBuilder, base: &[NodeId; 9], aux: &AuxNodes, z: &ZChoice) -> SlotNodes {
    let [k, f, _i, _j, m, u, r, _s, _t] = *base;
    let one = bld.constant(1);
    let two = bld.constant(2);
    let four = bld.constant(4);
    let eight = bld.constant(8);

    let z_node = match z {
        ZChoice::Aux(sym) => match sym {
            AuxSymbol::W => aux.w,
            AuxSymbol::U => aux.u,
            AuxSymbol::M => aux.m,
            AuxSymbol::S => aux.s,
            AuxSymbol::T => aux.t,
            AuxSymbol::Q => aux.q,
            AuxSymbol::L => aux.l,
            AuxSymbol::A => aux.a,
            AuxSymbol::B => aux.b,
            AuxSymbol::C => aux.c,
            AuxSymbol::D => aux.d,
            AuxSymbol::E => aux.e,
            AuxSymbol::F => aux.f,
            AuxSymbol::G => aux.g,
            AuxSymbol::H => aux.h,
            AuxSymbol::I => aux.i,
        },
        ZChoice::Const(c) => bld.constant(c.clone()),
    };

    let x1 = {
        let m2 = bld.pow(aux.m, 2);
        let m2m1 = bld.sub(m2, one);
        let s2 = bld.pow(aux.s, 2);
        let prod = bld.mul(&[m2m1, s2]);
        bld.add(&[prod, one])
    };
    let x2 = {
        let mu = bld.mul(&[aux.m, aux.u]);
        let mu2 = bld.pow(mu, 2);
        let mu2m1 = bld.sub(mu2, one);
        let t2 = bld.pow(aux.t, 2);
        let prod = bld.mul(&[mu2m1, t2]);
        bld.add(&[prod, one])
    };
    let x3 = bld.mul(&[aux.d, aux.f, aux.i]);
    let p = bld.mul(&[aux.f, aux.l]);

    let w2 = bld.pow(aux.w, 2);
    let u2 = bld.pow(u, 2);
    let r_num = {
        let hc = bld.sub(aux.h, aux.c);
        let term1 = bld.mul(&[hc, z_node]);
        let fp1 = bld.add(&[f, one]);
        let term2 = bld.mul(&[aux.f, fp1, aux.q]);
        let w2m1 = bld.sub(w2, one);
        let su = bld.mul(&[aux.s, u]);
        let t3a = bld.mul(&[w2m1, su]);
        let t3b = bld.mul(&[w2, u2]);
        let diff = bld.sub(t3a, t3b);
        let inner = bld.add(&[diff, one]);
        let kp1 = bld.add(&[k, one]);
        let term3 = bld.mul(&[aux.f, kp1, inner]);
        bld.add(&[term1, term2, term3])
    };

    let n = {
        let ms = bld.mul(&[aux.m, aux.s]);
        let mut_term = bld.mul(&[two, aux.m, aux.u, aux.t]);
        let a2 = bld.pow(aux.a, 2);
        let big_term = bld.mul(&[four, a2, aux.c, aux.e, aux.g, aux.h]);
        let hl = bld.mul(&[aux.h, aux.l]);
        let ffq = bld.mul(&[aux.f, f, aux.q]);
        let su = bld.mul(&[aux.s, u]);
        let w2su = bld.mul(&[w2, su]);
        let w2u2 = bld.mul(&[w2, u2]);
        let inner = bld.add(&[w2su, w2u2]);
        let fk_term = bld.mul(&[aux.f, k, inner]);
        let paren = bld.add(&[hl, ffq, fk_term]);
        let doubled = bld.mul(&[two, paren]);
        bld.add(&[ms, mut_term, big_term, doubled])
    };

    let (lhs, rhs, v) = {
        let stu = bld.mul(&[aux.s, aux.t, aux.u]);
        let mstu = bld.mul(&[m, stu]);
        let rm = bld.sub(r, mstu);
        let st = bld.mul(&[aux.s, aux.t]);
        let rhs = bld.mul(&[eight, f, u, st, rm]);
        let f2 = bld.pow(f, 2);
        let f2x4 = bld.mul(&[four, f2]);
        let f2x4m1 = bld.sub(f2x4, one);
        let rm2 = bld.pow(rm, 2);
        let lhs_a = bld.mul(&[f2x4m1, rm2]);
        let s2 = bld.pow(aux.s, 2);
        let t2 = bld.pow(aux.t, 2);
        let lhs_b = bld.mul(&[four, u2, s2, t2]);
        let lhs = bld.add(&[lhs_a, lhs_b]);
        let lhs_p1 = bld.add(&[lhs, one]);
        let v = bld.sub(rhs, lhs_p1);
        (lhs, rhs, v)
    };

    SlotNodes { x1, x2, x3, p, r_num, n, v, lhs, rhs }
}

/// The 10-variable polynomial as a DAG, with its `Z` choice recorded.
#[derive(Debug, Clone)]
pub struct Poly10 {
    dag: ExprDag,
    z_choice: ZChoice,
}

impl Poly10 {
    pub fn dag(&self) -> &ExprDag {
        &self.dag
    }

    pub fn z_choice(&self) -> &ZChoice {
        &self.z_choice
    }
}

/// Fills `K`'s eight slots with the condition system: `y` slot from the
/// tenth variable, the three squareness operands, `p := FL`, `r` slot the
/// divisibility numerator, and the `n`/`v` substitutions. The base unknown
/// `r` and `K`'s `r` slot are distinct objects, kept apart positionally.
pub fn build_poly10(kf: &KFamily, z: &ZChoice) -> Poly10 {
    let mut bld = DagBuilder::new(poly10_vars());
    let base: [NodeId; 9] = std::array::from_fn(|idx| bld.var(idx));
    let y = bld.var(9);
    let aux = build_aux_nodes(&mut bld, &base);
    let slots = build_slot_nodes(&mut bld, &base, &aux, z);
    let slot_nodes = [
        y,
        slots.x1,
        slots.x2,
        slots.x3,
        slots.p,
        slots.r_num,
        slots.n,
        slots.v,
    ];
    let root = bld.polynomial(kf.k(), &slot_nodes);
    Poly10 { dag: bld.finish(root), z_choice: z.clone() }
}

/// Witness slots appended to the base variables in the compiled condition
/// system: three square roots, one order slack, one quotient.
pub fn condition_witness_vars() -> Vec<String> {
    ["w_sq1", "w_sq2", "w_sq3", "w_lt", "w_div"]
        .iter()
        .map(ToString::to_string)
        .collect()
}

/// Sum-of-squares form of the five-fold condition over the nine base
/// variables plus five witness variables: zero at a point iff the three
/// squareness conditions, the strict inequality and the divisibility all
/// hold with the given witnesses. Same encodings as [`compile`], built as
/// a DAG because the auxiliary quantities are far too large to expand.
pub fn prime_condition_dag(z: &ZChoice) -> ExprDag {
    let mut vars = poly10_vars();
    vars.pop(); // no y here
    vars.extend(condition_witness_vars());
    let mut bld = DagBuilder::new(vars);
    let base: [NodeId; 9] = std::array::from_fn(|idx| bld.var(idx));
    let witnesses: [NodeId; 5] = std::array::from_fn(|idx| bld.var(9 + idx));
    let aux = build_aux_nodes(&mut bld, &base);
    let slots = build_slot_nodes(&mut bld, &base, &aux, z);

    let one = bld.constant(1);
    let enc_sq1 = {
        let w2 = bld.pow(witnesses[0], 2);
        bld.sub(w2, slots.x1)
    };
    let enc_sq2 = {
        let w2 = bld.pow(witnesses[1], 2);
        bld.sub(w2, slots.x2)
    };
    let enc_sq3 = {
        let w2 = bld.pow(witnesses[2], 2);
        bld.sub(w2, slots.x3)
    };
    let enc_lt = {
        // lhs + 1 + slack - rhs
        let sum = bld.add(&[slots.lhs, one, witnesses[3]]);
        bld.sub(sum, slots.rhs)
    };
    let enc_div = {
        let prod = bld.mul(&[slots.p, witnesses[4]]);
        bld.sub(prod, slots.r_num)
    };
    let squares: Vec<NodeId> = [enc_sq1, enc_sq2, enc_sq3, enc_lt, enc_div]
        .iter()
        .map(|&e| bld.pow(e, 2))
        .collect();
    let root = bld.add(&squares);
    bld.finish(root)
}

/// The canonical witnesses for [`prime_condition_dag`]: integer square
/// roots, the order slack clamped at zero, and the rounded quotient. The
/// compiled system is zero at `(base, witnesses)` iff all five conditions
/// hold. (The quotient witness ranges over the integers; for genuine prime
/// condition instances both divisibility factors are non-negative.)
pub fn condition_witnesses(aux: &AuxAssignment, z: &ZChoice) -> [BigInt; 5] {
    let (lhs, rhs) = aux.inequality_sides();
    let slack = (rhs - lhs - BigInt::one()).max(BigInt::zero());
    let fl = aux.p_value();
    let quotient = aux.r_numerator(z).div_floor(&fl);
    [
        isqrt(&aux.x1_value()),
        isqrt(&aux.x2_value()),
        isqrt(&aux.x3_value()),
        slack,
        quotient,
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    // ---- compiler ----

    #[test]
    fn compile_divides_example() {
        let vars = vec!["a".to_string(), "b".to_string()];
        let a = Polynomial::variable(2, 0).unwrap();
        let b = Polynomial::variable(2, 1).unwrap();
        let sys = compile(&[Relation::Divides(a, b)], &vars).unwrap();
        assert_eq!(sys.introduced_unknowns, vec!["u0"]);
        assert_eq!(sys.total_variables, 3);
        // (a x0 - b)^2 at (a, b, x) points
        let v = sys.poly.evaluate(&[big(3), big(12), big(4)]).unwrap();
        assert!(v.is_zero());
        let v = sys.poly.evaluate(&[big(3), big(12), big(3)]).unwrap();
        assert_eq!(v, big(9));
    }

    #[test]
    fn compile_poly_eq_uses_no_unknowns() {
        let vars = vec!["x".to_string(), "y".to_string()];
        let x_m1 = Polynomial::variable(2, 0).unwrap().sub(&Polynomial::one(2)).unwrap();
        let y_m2 = Polynomial::variable(2, 1).unwrap().sub(&Polynomial::constant(2, 2)).unwrap();
        let sys = compile(&[Relation::PolyEq(x_m1), Relation::PolyEq(y_m2)], &vars).unwrap();
        assert!(sys.introduced_unknowns.is_empty());
        assert_eq!(sys.total_variables, 2);
        assert!(sys.poly.evaluate(&[big(1), big(2)]).unwrap().is_zero());
        assert_eq!(sys.poly.evaluate(&[big(0), big(0)]).unwrap(), big(5));
    }

    #[test]
    fn compile_is_square_zero_set() {
        let vars = vec!["a".to_string()];
        let a = Polynomial::variable(1, 0).unwrap();
        let sys = compile(&[Relation::IsSquare(a)], &vars).unwrap();
        for a_val in 0i64..=100 {
            let found = (0i64..=10).any(|x| {
                sys.poly.evaluate(&[big(a_val), big(x)]).unwrap().is_zero()
            });
            assert_eq!(found, is_square(&big(a_val)), "a = {a_val}");
        }
    }

    #[test]
    fn compile_brute_force_each_variant() {
        let vars = vec!["a".to_string(), "b".to_string()];
        let a = Polynomial::variable(2, 0).unwrap();
        let b = Polynomial::variable(2, 1).unwrap();
        let cases: Vec<(Relation, Box<dyn Fn(i64, i64) -> bool>)> = vec![
            (
                Relation::Divides(a.clone(), b.clone()),
                Box::new(|a, b| if a == 0 { b == 0 } else { b % a == 0 }),
            ),
            (Relation::Leq(a.clone(), b.clone()), Box::new(|a, b| a <= b)),
            (Relation::Lt(a.clone(), b.clone()), Box::new(|a, b| a < b)),
            (
                // congruence mod 3: holds when b <= a and 3 | a - b
                Relation::Congruent(a.clone(), b.clone(), Polynomial::constant(2, 3)),
                Box::new(|a, b| b <= a && (a - b) % 3 == 0),
            ),
        ];
        for (rel, oracle) in cases {
            let sys = compile(std::slice::from_ref(&rel), &vars).unwrap();
            for av in 0i64..=30 {
                for bv in 0i64..=30 {
                    let found = (0i64..=60).any(|x| {
                        sys.poly.evaluate(&[big(av), big(bv), big(x)]).unwrap().is_zero()
                    });
                    assert_eq!(found, oracle(av, bv), "{rel:?} at ({av}, {bv})");
                }
            }
        }
    }

    #[test]
    fn compile_rejects_empty_and_mismatched() {
        assert!(matches!(compile(&[], &[]), Err(PrimeError::EmptyRelations)));
        let vars = vec!["a".to_string()];
        let wrong = Polynomial::variable(2, 0).unwrap();
        assert!(matches!(
            compile(&[Relation::PolyEq(wrong)], &vars),
            Err(PrimeError::RelationArity { got: 2, want: 1 })
        ));
    }

    // ---- 26-variable polynomial ----

    #[test]
    fn poly26_shape() {
        let p = build_poly26();
        assert_eq!(p.arity(), 26);
        // every variable must actually occur
        for var in 0..26 {
            assert!(
                p.terms().iter().any(|m| m.exponents[var] > 0),
                "variable {var} unused"
            );
        }
    }

    #[test]
    fn poly26_at_all_zeros_is_six() {
        let p = build_poly26();
        let zeros = vec![BigInt::zero(); 26];
        assert_eq!(p.evaluate(&zeros).unwrap(), big(6));
    }

    #[test]
    fn poly26_components_at_zeros() {
        let zeros = vec![BigInt::zero(); 26];
        let comps = poly26_components(&zeros).unwrap();
        let expected: Vec<BigInt> = [0, 0, 1, 0, 1, -1, 1, 1, -1, 0, 0, 0, 0, 0]
            .iter()
            .map(|&v| big(v))
            .collect();
        assert_eq!(comps, expected);
        let sum_sq: BigInt = comps.iter().map(|c| c * c).sum();
        assert_eq!(sum_sq, big(6));
    }

    #[test]
    fn poly26_matches_component_squares() {
        // deterministic pseudo-random小 grid, plus the i128 evaluator
        let mut state = 0x9E3779B97F4A7C15u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) % 21) as i64 - 10
        };
        let p = build_poly26();
        for _ in 0..50 {
            let point: Vec<BigInt> = (0..26).map(|_| big(next())).collect();
            let comps = poly26_components(&point).unwrap();
            let sum_sq: BigInt = comps.iter().map(|c| c * c).sum();
            assert_eq!(p.evaluate(&point).unwrap(), sum_sq);
            assert!(sum_sq >= BigInt::zero());
            let pt_i128: [i128; 26] = std::array::from_fn(|i| {
                i128::try_from(&point[i]).unwrap()
            });
            assert_eq!(
                poly26_components_all_zero_i128(&pt_i128),
                comps.iter().all(Zero::is_zero)
            );
        }
    }

    #[test]
    fn wilson_examples() {
        assert!(wilson_is_prime(1).unwrap()); // 2 | 2
        assert!(!wilson_is_prime(3).unwrap()); // 4 does not divide 7
        assert!(wilson_is_prime(4).unwrap()); // 5 | 25
        assert!(wilson_is_prime(0).is_err());
    }

    #[test]
    fn probe_small_boxes() {
        // k = 3 (4 composite): no zero may appear.
        let rep = poly26_soundness_probe(3, 1).unwrap();
        assert_eq!(rep.zero_count, 0);
        assert!(rep.sound);
        assert!(!rep.k_plus_1_prime);
        assert_eq!(rep.points_scanned, 1 << 25);

        // k = 1 with box 0: single point, all other vars zero; value 6 there.
        let rep = poly26_soundness_probe(1, 0).unwrap();
        assert_eq!(rep.points_scanned, 1);
        assert_eq!(rep.zero_count, 0);
        assert!(rep.sound);

        assert!(matches!(poly26_soundness_probe(1, 4), Err(PrimeError::BoxTooLarge(4))));
    }

    // ---- auxiliary chain ----

    fn base_ones() -> BaseAssignment {
        BaseAssignment { k: 1, f: 1, i: 1, j: 1, m: 1, u: 1, r: 1, s: 1, t: 1 }
    }

    #[test]
    fn aux_values_at_ones() {
        let aux = total_aux(base_ones()).unwrap();
        assert_eq!(aux.w, big(200));
        assert_eq!(aux.u, big(800_000_001)); // 100 * 200^3 + 1
        assert_eq!(aux.b, big(201));
        assert_eq!(aux.c, big(202));
        assert_eq!(aux.m, 100 * big(800_000_001) * 200 + 1);
        assert_eq!(aux.s, &aux.m - 1 + 2);
        assert_eq!(aux.q, 2 * &aux.m * 200 - 200 * 200 - 1);
        assert_eq!(aux.l, 2 * &aux.q);
    }

    #[test]
    fn aux_degenerate_k_zero() {
        let mut b = base_ones();
        b.k = 0;
        b.r = 0;
        b.s = 0;
        b.t = 0;
        let aux = total_aux(b).unwrap();
        assert_eq!(aux.w, BigInt::zero());
        assert_eq!(aux.u, BigInt::one());
        assert_eq!(aux.m, BigInt::one());
        assert_eq!(aux.s, BigInt::one()); // k + 1
        assert_eq!(aux.t, BigInt::one());
        assert_eq!(aux.q, big(-1));
        assert_eq!(aux.a, big(2));
    }

    #[test]
    fn aux_rejects_zero_positives() {
        let mut b = base_ones();
        b.u = 0;
        assert!(matches!(total_aux(b), Err(PrimeError::RangePositive { name: "u" })));
    }

    #[test]
    fn conditions_at_ones_fail_with_breakdown() {
        let rep = total_conditions(base_ones(), &ZChoice::default()).unwrap();
        assert!(!rep.overall);
        // r - mSTU is hugely negative, so the right side of the strict
        // inequality is negative while the left is positive.
        assert!(!rep.inequality);
        // consistency with the v substitution
        let aux = total_aux(base_ones()).unwrap();
        assert_eq!(rep.inequality, aux.v_value() >= BigInt::zero());
    }

    #[test]
    fn inequality_flag_matches_v_sign_on_grid() {
        for f in 1..=2u64 {
            for m in 1..=2u64 {
                for u in 1..=2u64 {
                    for r in [0u64, 1, 5] {
                        let base = BaseAssignment { k: 1, f, i: 1, j: 1, m, u, r, s: 0, t: 0 };
                        let aux = total_aux(base).unwrap();
                        let rep = conditions_from_aux(&aux, &ZChoice::default());
                        assert_eq!(rep.inequality, aux.v_value() >= BigInt::zero());
                    }
                }
            }
        }
    }

    #[test]
    fn z_choice_parsing() {
        assert_eq!(ZChoice::from_str("L").unwrap(), ZChoice::Aux(AuxSymbol::L));
        assert_eq!(ZChoice::from_str("W").unwrap(), ZChoice::Aux(AuxSymbol::W));
        assert_eq!(ZChoice::from_str("42").unwrap(), ZChoice::Const(big(42)));
        assert!(ZChoice::from_str("Z9").is_err());
        assert_eq!(ZChoice::default().to_string(), "L");
    }

    // ---- condition DAG and witnesses ----

    #[test]
    fn condition_dag_matches_direct_report() {
        let z = ZChoice::default();
        let dag = prime_condition_dag(&z);
        assert_eq!(dag.arity(), 14);
        for base in [
            base_ones(),
            BaseAssignment { k: 2, f: 1, i: 1, j: 2, m: 1, u: 1, r: 3, s: 0, t: 1 },
            BaseAssignment { k: 0, f: 1, i: 1, j: 1, m: 1, u: 1, r: 0, s: 0, t: 0 },
        ] {
            let aux = total_aux(base).unwrap();
            let rep = conditions_from_aux(&aux, &z);
            let wit = condition_witnesses(&aux, &z);
            let mut point: Vec<BigInt> = [
                base.k, base.f, base.i, base.j, base.m, base.u, base.r, base.s, base.t,
            ]
            .iter()
            .map(|&v| big(v as i64))
            .collect();
            point.extend(wit);
            let value = dag.evaluate(&point).unwrap();
            assert_eq!(value.is_zero(), rep.overall, "base {base:?}");
            assert!(value >= BigInt::zero());
        }
    }

    // ---- the 10-variable polynomial ----

    #[test]
    fn poly10_has_ten_variables() {
        let kf = KFamily::new();
        let p10 = build_poly10(&kf, &ZChoice::default());
        assert_eq!(p10.dag().arity(), 10);
        assert_eq!(p10.dag().vars(), poly10_vars().as_slice());
    }

    #[test]
    fn poly10_matches_staged_composition() {
        let kf = KFamily::new();
        let z = ZChoice::default();
        let p10 = build_poly10(&kf, &z);
        for base in [
            base_ones(),
            BaseAssignment { k: 0, f: 1, i: 1, j: 1, m: 1, u: 1, r: 0, s: 0, t: 0 },
            BaseAssignment { k: 2, f: 2, i: 1, j: 1, m: 1, u: 1, r: 1, s: 1, t: 0 },
        ] {
            for y in [0u64, 3] {
                let aux = total_aux(base).unwrap();
                let staged = kf
                    .k()
                    .evaluate(&[
                        big(y as i64),
                        aux.x1_value(),
                        aux.x2_value(),
                        aux.x3_value(),
                        aux.p_value(),
                        aux.r_numerator(&z),
                        aux.n_value(),
                        aux.v_value(),
                    ])
                    .unwrap();
                let point: Vec<BigInt> = [
                    base.k, base.f, base.i, base.j, base.m, base.u, base.r, base.s, base.t, y,
                ]
                .iter()
                .map(|&v| big(v as i64))
                .collect();
                let direct = p10.dag().evaluate(&point).unwrap();
                assert_eq!(direct, staged, "base {base:?}, y {y}");
            }
        }
    }
}
