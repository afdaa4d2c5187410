//! Shared-subexpression arithmetic DAGs.
//!
//! The 10-variable prime polynomial has total degree in the thousands and
//! cannot be required to expand, so it is held as a DAG of constants,
//! variables, sums, products, powers and negations. Nodes are immutable
//! after construction and deduplicated by structural hash, which keeps
//! memoized evaluation linear in DAG size.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::arith::log2_abs;
use crate::poly::{PolyError, Polynomial};

/// Index of a node inside its owning DAG.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub(crate) u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum DagNode {
    Const(BigInt),
    Var(usize),
    Add(Vec<NodeId>),
    Mul(Vec<NodeId>),
    Pow(NodeId, u32),
    Neg(NodeId),
}

/// Construction handle. Children must already exist when a node is created,
/// so the node list is topologically ordered and acyclic by construction.
pub struct DagBuilder {
    vars: Vec<String>,
    nodes: Vec<DagNode>,
    dedup: HashMap<DagNode, NodeId>,
}

impl DagBuilder {
    pub fn new(vars: impl IntoIterator<Item = impl Into<String>>) -> Self {
        DagBuilder {
            vars: vars.into_iter().map(Into::into).collect(),
            nodes: Vec::new(),
            dedup: HashMap::new(),
        }
    }

    fn intern(&mut self, node: DagNode) -> NodeId {
        if let Some(&id) = self.dedup.get(&node) {
            return id;
        }
        let id = NodeId(u32::try_from(self.nodes.len()).expect("node count fits u32"));
        self.nodes.push(node.clone());
        self.dedup.insert(node, id);
        id
    }

    pub fn constant(&mut self, v: impl Into<BigInt>) -> NodeId {
        self.intern(DagNode::Const(v.into()))
    }

    /// # Panics
    /// Panics if `index` is not a declared variable.
    pub fn var(&mut self, index: usize) -> NodeId {
        assert!(index < self.vars.len(), "variable index out of range");
        self.intern(DagNode::Var(index))
    }

    pub fn add(&mut self, children: &[NodeId]) -> NodeId {
        match children {
            [] => self.constant(0),
            [only] => *only,
            _ => {
                let mut sorted = children.to_vec();
                sorted.sort_unstable();
                self.intern(DagNode::Add(sorted))
            }
        }
    }

    pub fn mul(&mut self, children: &[NodeId]) -> NodeId {
        match children {
            [] => self.constant(1),
            [only] => *only,
            _ => {
                let mut sorted = children.to_vec();
                sorted.sort_unstable();
                self.intern(DagNode::Mul(sorted))
            }
        }
    }

    pub fn pow(&mut self, base: NodeId, exp: u32) -> NodeId {
        match exp {
            0 => self.constant(1),
            1 => base,
            _ => self.intern(DagNode::Pow(base, exp)),
        }
    }

    pub fn neg(&mut self, child: NodeId) -> NodeId {
        self.intern(DagNode::Neg(child))
    }

    pub fn sub(&mut self, a: NodeId, b: NodeId) -> NodeId {
        let nb = self.neg(b);
        self.add(&[a, nb])
    }

    /// Inserts an expanded polynomial with each of its variables mapped to the
    /// node in `slots`. Power nodes of the slots are shared between monomials.
    pub fn polynomial(&mut self, poly: &Polynomial, slots: &[NodeId]) -> NodeId {
        assert_eq!(poly.arity(), slots.len(), "slot count must match arity");
        let mut monomials = Vec::with_capacity(poly.monomial_count());
        for m in poly.terms() {
            let mut factors = Vec::new();
            if m.coefficient != BigInt::from(1) || m.exponents.iter().all(|&e| e == 0) {
                factors.push(self.constant(m.coefficient.clone()));
            }
            for (slot, &e) in slots.iter().zip(&m.exponents) {
                if e > 0 {
                    factors.push(self.pow(*slot, e));
                }
            }
            monomials.push(self.mul(&factors));
        }
        self.add(&monomials)
    }

    pub fn finish(self, root: NodeId) -> ExprDag {
        assert!(root.index() < self.nodes.len(), "root must be a built node");
        ExprDag { vars: self.vars, nodes: self.nodes, root }
    }
}

/// Immutable expression DAG over a declared variable list.
#[derive(Debug, Clone)]
pub struct ExprDag {
    vars: Vec<String>,
    nodes: Vec<DagNode>,
    root: NodeId,
}

impl ExprDag {
    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn nodes(&self) -> &[DagNode] {
        &self.nodes
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Exact value at an integer point. Shared nodes are computed once:
    /// children always precede parents, so one forward pass suffices.
    pub fn evaluate(&self, point: &[BigInt]) -> Result<BigInt, PolyError> {
        if point.len() != self.vars.len() {
            return Err(PolyError::PointLength { got: point.len(), want: self.vars.len() });
        }
        let mut values: Vec<BigInt> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let v = match node {
                DagNode::Const(c) => c.clone(),
                DagNode::Var(i) => point[*i].clone(),
                DagNode::Add(ch) => {
                    let mut s = BigInt::zero();
                    for c in ch {
                        s += &values[c.index()];
                    }
                    s
                }
                DagNode::Mul(ch) => {
                    let mut p = BigInt::from(1);
                    for c in ch {
                        p *= &values[c.index()];
                    }
                    p
                }
                DagNode::Pow(c, e) => values[c.index()].pow(*e),
                DagNode::Neg(c) => -&values[c.index()],
            };
            values.push(v);
        }
        Ok(values.swap_remove(self.root.index()))
    }

    /// Sound upper bound on the total degree, without expansion:
    /// sums take the max, products the sum, powers multiply.
    pub fn degree_upper_bound(&self) -> u64 {
        let mut deg: Vec<u64> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let d = match node {
                DagNode::Const(_) => 0,
                DagNode::Var(_) => 1,
                DagNode::Add(ch) => ch.iter().map(|c| deg[c.index()]).max().unwrap_or(0),
                DagNode::Mul(ch) => ch.iter().map(|c| deg[c.index()]).sum(),
                DagNode::Pow(c, e) => deg[c.index()] * u64::from(*e),
                DagNode::Neg(c) => deg[c.index()],
            };
            deg.push(d);
        }
        deg[self.root.index()]
    }

    /// Degree estimate from growth along a ray: evaluates at `t1 * ray` and
    /// `t2 * ray` and reads the slope on a log scale. Equals the degree of
    /// the univariate restriction along the ray when its leading coefficient
    /// is nonzero and dominates at the sampled scale.
    pub fn growth_degree_estimate(
        &self,
        ray: &[BigInt],
        t1: u64,
        t2: u64,
    ) -> Result<u64, PolyError> {
        assert!(t1 >= 2 && t2 > t1, "need t2 > t1 >= 2");
        let scale = |t: u64| -> Vec<BigInt> { ray.iter().map(|r| r * BigInt::from(t)).collect() };
        let v1 = self.evaluate(&scale(t1))?;
        let v2 = self.evaluate(&scale(t2))?;
        if v1.is_zero() || v2.is_zero() {
            return Err(PolyError::ZeroOnRay);
        }
        let slope = (log2_abs(&v2) - log2_abs(&v1)) / ((t2 as f64).log2() - (t1 as f64).log2());
        Ok(slope.round().max(0.0) as u64)
    }

    /// Exact expansion into a canonical polynomial, or `BudgetExceeded` once
    /// any intermediate result holds more than `term_budget` monomials.
    pub fn expand(&self, term_budget: usize) -> Result<Polynomial, PolyError> {
        let arity = self.vars.len();
        let mut polys: Vec<Polynomial> = Vec::with_capacity(self.nodes.len());
        let check = |p: Polynomial| -> Result<Polynomial, PolyError> {
            if p.monomial_count() > term_budget {
                Err(PolyError::BudgetExceeded { budget: term_budget })
            } else {
                Ok(p)
            }
        };
        for node in &self.nodes {
            let p = match node {
                DagNode::Const(c) => Polynomial::constant(arity, c.clone()),
                DagNode::Var(i) => Polynomial::variable(arity, *i)?,
                DagNode::Add(ch) => {
                    let mut s = Polynomial::zero(arity);
                    for c in ch {
                        s = check(s.add(&polys[c.index()])?)?;
                    }
                    s
                }
                DagNode::Mul(ch) => {
                    let mut p = Polynomial::one(arity);
                    for c in ch {
                        p = p.mul_budgeted(&polys[c.index()], term_budget)?;
                    }
                    p
                }
                DagNode::Pow(c, e) => polys[c.index()].pow_budgeted(*e, term_budget)?,
                DagNode::Neg(c) => polys[c.index()].neg(),
            };
            polys.push(p);
        }
        Ok(polys.swap_remove(self.root.index()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::monomial;

    fn product_of_shifts() -> ExprDag {
        // (x + 1) * (x - 1)
        let mut b = DagBuilder::new(["x"]);
        let x = b.var(0);
        let one = b.constant(1);
        let left = b.add(&[x, one]);
        let right = b.sub(x, one);
        let root = b.mul(&[left, right]);
        b.finish(root)
    }

    #[test]
    fn evaluate_memoizes_and_matches() {
        let d = product_of_shifts();
        assert_eq!(d.evaluate(&[BigInt::from(5)]).unwrap(), BigInt::from(24));
        assert_eq!(d.evaluate(&[BigInt::from(-3)]).unwrap(), BigInt::from(8));
    }

    #[test]
    fn degree_bound_examples() {
        let d = product_of_shifts();
        assert_eq!(d.degree_upper_bound(), 2);

        // x^2 - x^2 has true degree 0 but the bound stays sound, not tight.
        let mut b = DagBuilder::new(["x"]);
        let x = b.var(0);
        let sq = b.pow(x, 2);
        let root = b.sub(sq, sq);
        let d = b.finish(root);
        assert_eq!(d.degree_upper_bound(), 2);
        assert!(d.evaluate(&[BigInt::from(7)]).unwrap().is_zero());
    }

    #[test]
    fn growth_estimate_examples() {
        // x^3 on ray (1) with t = 2, 4.
        let mut b = DagBuilder::new(["x"]);
        let x = b.var(0);
        let root = b.pow(x, 3);
        let d = b.finish(root);
        assert_eq!(d.growth_degree_estimate(&[BigInt::from(1)], 2, 4).unwrap(), 3);

        // x^2 y on ray (1, 1).
        let mut b = DagBuilder::new(["x", "y"]);
        let x = b.var(0);
        let y = b.var(1);
        let x2 = b.pow(x, 2);
        let root = b.mul(&[x2, y]);
        let d = b.finish(root);
        let ray = [BigInt::from(1), BigInt::from(1)];
        assert_eq!(d.growth_degree_estimate(&ray, 2, 4).unwrap(), 3);
    }

    #[test]
    fn growth_estimate_rejects_zero_on_ray() {
        let d = product_of_shifts();
        // (t*1)^2 - 1 is nonzero for t >= 2, so use a ray hitting a root: ray 1 at t1=...
        // x^2 - 1 is zero at x = 1; no t >= 2 reaches it with ray (1), so use ray (0).
        let err = d.growth_degree_estimate(&[BigInt::from(0)], 2, 4).unwrap_err();
        assert_eq!(err, PolyError::ZeroOnRay);
    }

    #[test]
    fn expand_small_square() {
        // (x + y)^2 with budget 10.
        let mut b = DagBuilder::new(["x", "y"]);
        let x = b.var(0);
        let y = b.var(1);
        let s = b.add(&[x, y]);
        let root = b.pow(s, 2);
        let d = b.finish(root);
        let p = d.expand(10).unwrap();
        let expected = monomial(2, 1, &[(0, 2)])
            .add(&monomial(2, 2, &[(0, 1), (1, 1)]))
            .unwrap()
            .add(&monomial(2, 1, &[(1, 2)]))
            .unwrap();
        assert_eq!(p, expected);
    }

    #[test]
    fn expand_respects_budget() {
        // (x + y)^8 has 9 monomials; a budget of 5 must fail.
        let mut b = DagBuilder::new(["x", "y"]);
        let x = b.var(0);
        let y = b.var(1);
        let s = b.add(&[x, y]);
        let root = b.pow(s, 8);
        let d = b.finish(root);
        assert!(matches!(d.expand(5), Err(PolyError::BudgetExceeded { .. })));
        assert_eq!(d.expand(16).unwrap().monomial_count(), 9);
    }

    #[test]
    fn expansion_agrees_with_dag_evaluation() {
        let d = product_of_shifts();
        let p = d.expand(100).unwrap();
        for t in -10i32..=10 {
            let point = [BigInt::from(t)];
            assert_eq!(p.evaluate(&point).unwrap(), d.evaluate(&point).unwrap());
        }
    }

    #[test]
    fn shared_nodes_are_deduplicated() {
        let mut b = DagBuilder::new(["x"]);
        let x = b.var(0);
        let a = b.add(&[x, x]);
        let a2 = b.add(&[x, x]);
        assert_eq!(a, a2);
        let root = b.mul(&[a, a2]);
        let d = b.finish(root);
        // x, (x+x), and the product; no duplicate sum node.
        assert_eq!(d.node_count(), 3);
    }
}
