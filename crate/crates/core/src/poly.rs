//! Sparse multivariate polynomials over arbitrary-precision integers.
//!
//! A polynomial is a canonical list of monomials: no duplicate exponent
//! vectors, no zero coefficients, terms sorted in graded-lexicographic
//! descending order. Equality of canonical forms is structural equality,
//! which makes serialization deterministic.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("arity mismatch: {left} vs {right}")]
    ArityMismatch { left: usize, right: usize },
    #[error("point has {got} coordinates, polynomial has arity {want}")]
    PointLength { got: usize, want: usize },
    #[error("variable index {var} out of range for arity {arity}")]
    VarOutOfRange { var: usize, arity: usize },
    #[error("substitution target arity {target} cannot host unmapped variable {var}")]
    SubstitutionArity { var: usize, target: usize },
    #[error("term budget exceeded: more than {budget} monomials in an intermediate result")]
    BudgetExceeded { budget: usize },
    #[error("evaluation on the ray is zero; pick another ray")]
    ZeroOnRay,
}

/// One monomial: a nonzero coefficient and one exponent per variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub coefficient: BigInt,
    pub exponents: Vec<u32>,
}

impl Monomial {
    pub fn degree(&self) -> u64 {
        self.exponents.iter().map(|&e| e as u64).sum()
    }
}

/// Graded-lexicographic comparison: higher total degree first, then
/// lexicographically larger exponent vector first.
fn grlex_desc(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    db.cmp(&da).then_with(|| b.cmp(a))
}

/// Canonical sparse polynomial. The zero polynomial has an empty term list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    arity: usize,
    terms: Vec<Monomial>,
}

/// Exact structural statistics of a polynomial.
///
/// `total_degree` of the zero polynomial is reported as 0 with `is_zero`
/// set, so the field stays a plain natural.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PolyStats {
    pub arity: usize,
    pub total_degree: u64,
    pub monomial_count: usize,
    pub is_zero: bool,
}

impl Polynomial {
    pub fn zero(arity: usize) -> Self {
        Polynomial { arity, terms: Vec::new() }
    }

    pub fn constant(arity: usize, value: impl Into<BigInt>) -> Self {
        let value = value.into();
        if value.is_zero() {
            return Self::zero(arity);
        }
        Polynomial {
            arity,
            terms: vec![Monomial { coefficient: value, exponents: vec![0; arity] }],
        }
    }

    pub fn one(arity: usize) -> Self {
        Self::constant(arity, 1)
    }

    pub fn variable(arity: usize, var: usize) -> Result<Self, PolyError> {
        if var >= arity {
            return Err(PolyError::VarOutOfRange { var, arity });
        }
        let mut exponents = vec![0; arity];
        exponents[var] = 1;
        Ok(Polynomial {
            arity,
            terms: vec![Monomial { coefficient: BigInt::one(), exponents }],
        })
    }

    /// Builds the canonical form from arbitrary (possibly duplicated,
    /// possibly zero-coefficient) terms.
    pub fn from_terms(
        arity: usize,
        terms: impl IntoIterator<Item = (BigInt, Vec<u32>)>,
    ) -> Result<Self, PolyError> {
        let mut acc: HashMap<Vec<u32>, BigInt> = HashMap::new();
        for (c, e) in terms {
            if e.len() != arity {
                return Err(PolyError::ArityMismatch { left: e.len(), right: arity });
            }
            *acc.entry(e).or_insert_with(BigInt::zero) += c;
        }
        Ok(Self::from_map(arity, acc))
    }

    fn from_map(arity: usize, map: HashMap<Vec<u32>, BigInt>) -> Self {
        let mut terms: Vec<Monomial> = map
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(exponents, coefficient)| Monomial { coefficient, exponents })
            .collect();
        terms.sort_by(|a, b| grlex_desc(&a.exponents, &b.exponents));
        Polynomial { arity, terms }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn monomial_count(&self) -> usize {
        self.terms.len()
    }

    /// Maximum exponent sum over all monomials; 0 for the zero polynomial.
    pub fn total_degree(&self) -> u64 {
        // Canonical order is graded, so the first term carries the degree.
        self.terms.first().map_or(0, Monomial::degree)
    }

    pub fn stats(&self) -> PolyStats {
        PolyStats {
            arity: self.arity,
            total_degree: self.total_degree(),
            monomial_count: self.terms.len(),
            is_zero: self.is_zero(),
        }
    }

    /// Coefficient of an exact exponent vector (zero if absent).
    pub fn coefficient(&self, exponents: &[u32]) -> BigInt {
        self.terms
            .iter()
            .find(|m| m.exponents == exponents)
            .map_or_else(BigInt::zero, |m| m.coefficient.clone())
    }

    fn check_same_arity(&self, other: &Self) -> Result<(), PolyError> {
        if self.arity != other.arity {
            return Err(PolyError::ArityMismatch { left: self.arity, right: other.arity });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_same_arity(other)?;
        let mut acc: HashMap<Vec<u32>, BigInt> =
            HashMap::with_capacity(self.terms.len() + other.terms.len());
        for m in self.terms.iter().chain(&other.terms) {
            *acc.entry(m.exponents.clone()).or_insert_with(BigInt::zero) += &m.coefficient;
        }
        Ok(Self::from_map(self.arity, acc))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Polynomial {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|m| Monomial {
                    coefficient: -&m.coefficient,
                    exponents: m.exponents.clone(),
                })
                .collect(),
        }
    }

    /// Exact product. Accumulates into a hash map keyed by exponent vector
    /// and sorts once at the end, so long factor chains (the `J_n` builds)
    /// stay close to linear in output size.
    pub fn mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_same_arity(other)?;
        Ok(self.mul_impl(other, None).expect("no budget"))
    }

    /// Product that fails once the accumulation map holds more than
    /// `budget` monomials.
    pub fn mul_budgeted(&self, other: &Self, budget: usize) -> Result<Self, PolyError> {
        self.check_same_arity(other)?;
        self.mul_impl(other, Some(budget))
            .ok_or(PolyError::BudgetExceeded { budget })
    }

    fn mul_impl(&self, other: &Self, budget: Option<usize>) -> Option<Self> {
        let (small, large) = if self.terms.len() <= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut acc: HashMap<Vec<u32>, BigInt> = HashMap::with_capacity(large.terms.len());
        for a in &small.terms {
            for b in &large.terms {
                let exps: Vec<u32> = a
                    .exponents
                    .iter()
                    .zip(&b.exponents)
                    .map(|(&x, &y)| x + y)
                    .collect();
                *acc.entry(exps).or_insert_with(BigInt::zero) += &a.coefficient * &b.coefficient;
            }
            if let Some(budget) = budget {
                if acc.len() > budget {
                    return None;
                }
            }
        }
        Some(Self::from_map(self.arity, acc))
    }

    /// `self` raised to a natural power; `pow(0)` is the constant 1.
    pub fn pow(&self, e: u32) -> Self {
        self.pow_impl(e, None).expect("no budget")
    }

    pub fn pow_budgeted(&self, e: u32, budget: usize) -> Result<Self, PolyError> {
        self.pow_impl(e, Some(budget))
            .ok_or(PolyError::BudgetExceeded { budget })
    }

    fn pow_impl(&self, mut e: u32, budget: Option<usize>) -> Option<Self> {
        let mut result = Self::one(self.arity);
        let mut base = self.clone();
        loop {
            if e & 1 == 1 {
                result = match budget {
                    Some(b) => result.mul_impl(&base, Some(b))?,
                    None => result.mul_impl(&base, None)?,
                };
            }
            e >>= 1;
            if e == 0 {
                return Some(result);
            }
            base = base.mul_impl(&base, budget)?;
        }
    }

    /// Composition: replaces variable `i` by `map[i]` where given; unmapped
    /// variables keep their index in the target arity. All replacement
    /// polynomials must share `target_arity`.
    pub fn substitute(
        &self,
        map: &HashMap<usize, Polynomial>,
        target_arity: usize,
    ) -> Result<Self, PolyError> {
        for (&var, p) in map {
            if var >= self.arity {
                return Err(PolyError::VarOutOfRange { var, arity: self.arity });
            }
            if p.arity != target_arity {
                return Err(PolyError::ArityMismatch { left: p.arity, right: target_arity });
            }
        }
        // Power cache per substituted variable, up to its maximum exponent.
        let mut max_exp = vec![0u32; self.arity];
        for m in &self.terms {
            for (v, &e) in m.exponents.iter().enumerate() {
                max_exp[v] = max_exp[v].max(e);
            }
        }
        let mut powers: HashMap<usize, Vec<Polynomial>> = HashMap::new();
        for (&var, p) in map {
            let mut table = vec![Self::one(target_arity)];
            for _ in 1..=max_exp[var] {
                table.push(table.last().unwrap().mul(p)?);
            }
            powers.insert(var, table);
        }
        let mut acc: HashMap<Vec<u32>, BigInt> = HashMap::new();
        for m in &self.terms {
            let mut term = Self::constant(target_arity, m.coefficient.clone());
            let mut passthrough = vec![0u32; target_arity];
            for (v, &e) in m.exponents.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match powers.get(&v) {
                    Some(table) => term = term.mul(&table[e as usize])?,
                    None => {
                        if v >= target_arity {
                            return Err(PolyError::SubstitutionArity { var: v, target: target_arity });
                        }
                        passthrough[v] += e;
                    }
                }
            }
            for t in term.terms {
                let exps: Vec<u32> = t
                    .exponents
                    .iter()
                    .zip(&passthrough)
                    .map(|(&x, &y)| x + y)
                    .collect();
                *acc.entry(exps).or_insert_with(BigInt::zero) += t.coefficient;
            }
        }
        Ok(Self::from_map(target_arity, acc))
    }

    /// Exact value at an integer point, with one power table per variable.
    pub fn evaluate(&self, point: &[BigInt]) -> Result<BigInt, PolyError> {
        if point.len() != self.arity {
            return Err(PolyError::PointLength { got: point.len(), want: self.arity });
        }
        let tables = power_tables(point, &self.max_exponents(), BigInt::one());
        let mut sum = BigInt::zero();
        for m in &self.terms {
            let mut v = m.coefficient.clone();
            for (var, &e) in m.exponents.iter().enumerate() {
                if e > 0 {
                    v *= &tables[var][e as usize];
                }
            }
            sum += v;
        }
        Ok(sum)
    }

    /// Exact value at a rational point.
    pub fn evaluate_rational(&self, point: &[BigRational]) -> Result<BigRational, PolyError> {
        if point.len() != self.arity {
            return Err(PolyError::PointLength { got: point.len(), want: self.arity });
        }
        let tables = power_tables(point, &self.max_exponents(), BigRational::one());
        let mut sum = BigRational::zero();
        for m in &self.terms {
            let mut v = BigRational::from_integer(m.coefficient.clone());
            for (var, &e) in m.exponents.iter().enumerate() {
                if e > 0 {
                    v *= &tables[var][e as usize];
                }
            }
            sum += v;
        }
        Ok(sum)
    }

    fn max_exponents(&self) -> Vec<u32> {
        let mut max_exp = vec![0u32; self.arity];
        for m in &self.terms {
            for (v, &e) in m.exponents.iter().enumerate() {
                max_exp[v] = max_exp[v].max(e);
            }
        }
        max_exp
    }

    /// Collects the polynomial by powers of one variable: entry `k` is the
    /// coefficient polynomial of `var^k`, with `var`'s exponent zeroed out.
    /// The result has the same arity.
    pub fn coefficients_in(&self, var: usize) -> Result<Vec<Polynomial>, PolyError> {
        if var >= self.arity {
            return Err(PolyError::VarOutOfRange { var, arity: self.arity });
        }
        let max = self
            .terms
            .iter()
            .map(|m| m.exponents[var])
            .max()
            .unwrap_or(0) as usize;
        let mut buckets: Vec<HashMap<Vec<u32>, BigInt>> = vec![HashMap::new(); max + 1];
        for m in &self.terms {
            let k = m.exponents[var] as usize;
            let mut exps = m.exponents.clone();
            exps[var] = 0;
            *buckets[k].entry(exps).or_insert_with(BigInt::zero) += &m.coefficient;
        }
        Ok(buckets
            .into_iter()
            .map(|map| Self::from_map(self.arity, map))
            .collect())
    }
}

fn power_tables<T>(point: &[T], max_exp: &[u32], one: T) -> Vec<Vec<T>>
where
    T: Clone,
    for<'a> T: std::ops::MulAssign<&'a T>,
{
    point
        .iter()
        .zip(max_exp)
        .map(|(x, &max)| {
            let mut table = Vec::with_capacity(max as usize + 1);
            table.push(one.clone());
            for e in 1..=max {
                let mut next = table[(e - 1) as usize].clone();
                next *= x;
                table.push(next);
            }
            table
        })
        .collect()
}

/// Convenience used throughout the constructions: `sign * coeff * prod vars^e`.
pub fn monomial(arity: usize, coefficient: impl Into<BigInt>, exps: &[(usize, u32)]) -> Polynomial {
    let mut exponents = vec![0u32; arity];
    for &(v, e) in exps {
        assert!(v < arity, "variable index out of range");
        exponents[v] += e;
    }
    let coefficient = coefficient.into();
    if coefficient.is_zero() {
        return Polynomial::zero(arity);
    }
    Polynomial { arity, terms: vec![Monomial { coefficient, exponents }] }
}

/// Sum of an iterator of polynomials of equal arity.
pub fn sum(arity: usize, polys: impl IntoIterator<Item = Polynomial>) -> Result<Polynomial, PolyError> {
    let mut acc = Polynomial::zero(arity);
    for p in polys {
        acc = acc.add(&p)?;
    }
    Ok(acc)
}

// Operator forms for construction code where arities are statically equal;
// they panic on mismatch where the methods return errors.
impl std::ops::Add<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        Polynomial::add(self, rhs).expect("arity mismatch")
    }
}

impl std::ops::Sub<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        Polynomial::sub(self, rhs).expect("arity mismatch")
    }
}

impl std::ops::Mul<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        Polynomial::mul(self, rhs).expect("arity mismatch")
    }
}

impl std::ops::Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::neg(self)
    }
}

impl std::fmt::Display for Polynomial {
    /// Displays with the default variable names `x0, x1, ...`.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let names: Vec<String> = (0..self.arity).map(|i| format!("x{i}")).collect();
        write!(f, "{}", crate::serial::to_text(self, &names))
    }
}

pub(crate) fn fmt_signed_terms(poly: &Polynomial, names: &[String]) -> String {
    let mut out = String::new();
    if poly.is_zero() {
        return "0".to_string();
    }
    for (i, m) in poly.terms.iter().enumerate() {
        let neg = m.coefficient.is_negative();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let abs = m.coefficient.abs();
        let mut factors: Vec<String> = Vec::new();
        if !abs.is_one() || m.exponents.iter().all(|&e| e == 0) {
            factors.push(abs.to_string());
        }
        for (v, &e) in m.exponents.iter().enumerate() {
            match e {
                0 => {}
                1 => factors.push(names[v].clone()),
                _ => factors.push(format!("{}^{}", names[v], e)),
            }
        }
        out.push_str(&factors.join("*"));
    }
    out
}
