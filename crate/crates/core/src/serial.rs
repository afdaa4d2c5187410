//! Polynomial and DAG serialization.
//!
//! JSON schema for polynomials: `{"vars": [names], "terms": [{"c": decimal
//! string, "e": exponent array}]}`. Coefficients are decimal strings so
//! arbitrary precision survives any JSON reader. Output is always in
//! canonical term order; input may list terms in any order.
//!
//! Text format: a signed monomial list such as `x^2 - y^2` or
//! `-3*x*y^2 + 2`. Parsing accumulates repeated monomials; the variable
//! list is either supplied by the caller or inferred in order of first
//! appearance.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::dag::{DagNode, ExprDag};
use crate::poly::Polynomial;

/// Parse failure with a 1-based position where one is known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    fn at(line: usize, col: usize, message: impl Into<String>) -> Self {
        ParseError { line, col, message: message.into() }
    }

    fn general(message: impl Into<String>) -> Self {
        ParseError { line: 0, col: 0, message: message.into() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line > 0 {
            write!(f, "{}:{}: {}", self.line, self.col, self.message)
        } else {
            write!(f, "{}", self.message)
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Serialize, Deserialize)]
struct PolyDoc {
    vars: Vec<String>,
    terms: Vec<TermDoc>,
}

#[derive(Serialize, Deserialize)]
struct TermDoc {
    c: String,
    e: Vec<u32>,
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn check_names(names: &[String]) -> Result<(), ParseError> {
    for (i, n) in names.iter().enumerate() {
        if !is_identifier(n) {
            return Err(ParseError::general(format!("invalid variable name {n:?}")));
        }
        if names[..i].contains(n) {
            return Err(ParseError::general(format!("duplicate variable name {n:?}")));
        }
    }
    Ok(())
}

/// Canonical JSON document for a polynomial with the given variable names.
///
/// # Panics
/// Panics if the name count does not match the arity.
pub fn to_json(poly: &Polynomial, names: &[String]) -> String {
    assert_eq!(poly.arity(), names.len(), "one name per variable");
    let doc = PolyDoc {
        vars: names.to_vec(),
        terms: poly
            .terms()
            .iter()
            .map(|m| TermDoc { c: m.coefficient.to_string(), e: m.exponents.clone() })
            .collect(),
    };
    serde_json::to_string(&doc).expect("serialization cannot fail")
}

/// Parses the JSON polynomial document. Terms may appear in any order, but
/// duplicate exponent vectors and zero coefficients are rejected.
pub fn from_json(input: &str) -> Result<(Polynomial, Vec<String>), ParseError> {
    let doc: PolyDoc = serde_json::from_str(input)
        .map_err(|e| ParseError::at(e.line(), e.column(), e.to_string()))?;
    check_names(&doc.vars)?;
    let arity = doc.vars.len();
    let mut seen: HashMap<Vec<u32>, usize> = HashMap::new();
    let mut terms = Vec::with_capacity(doc.terms.len());
    for (i, t) in doc.terms.iter().enumerate() {
        if t.e.len() != arity {
            return Err(ParseError::general(format!(
                "term {i}: exponent vector has length {}, expected {arity}",
                t.e.len()
            )));
        }
        let c = BigInt::from_str(&t.c)
            .map_err(|_| ParseError::general(format!("term {i}: bad coefficient {:?}", t.c)))?;
        if c.is_zero() {
            return Err(ParseError::general(format!("term {i}: zero coefficient")));
        }
        if let Some(prev) = seen.insert(t.e.clone(), i) {
            return Err(ParseError::general(format!(
                "term {i}: duplicate exponent vector (first at term {prev})"
            )));
        }
        terms.push((c, t.e.clone()));
    }
    let poly = Polynomial::from_terms(arity, terms).map_err(|e| ParseError::general(e.to_string()))?;
    Ok((poly, doc.vars))
}

/// Human-readable signed monomial list, canonical term order.
pub fn to_text(poly: &Polynomial, names: &[String]) -> String {
    assert_eq!(poly.arity(), names.len(), "one name per variable");
    crate::poly::fmt_signed_terms(poly, names)
}

struct TextParser<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> TextParser<'a> {
    fn new(src: &'a str) -> Self {
        TextParser { src: src.as_bytes(), pos: 0, line: 1, col: 1 }
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::at(self.line, self.col, message)
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.bump();
        }
    }

    fn number(&mut self) -> Result<BigInt, ParseError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.bump();
        }
        if self.pos == start {
            return Err(self.error("expected a number"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        BigInt::from_str(text).map_err(|_| self.error("invalid number"))
    }

    fn name(&mut self) -> Result<String, ParseError> {
        let start = self.pos;
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                self.bump();
            }
            _ => return Err(self.error("expected a variable name")),
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
            self.bump();
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).unwrap().to_string())
    }
}

/// Parses the text format. When `names` is given the arity and variable
/// order are fixed by it and unknown names are rejected; otherwise variables
/// are collected in order of first appearance.
pub fn from_text(
    input: &str,
    names: Option<&[String]>,
) -> Result<(Polynomial, Vec<String>), ParseError> {
    if let Some(names) = names {
        check_names(names)?;
    }
    let mut p = TextParser::new(input);
    let mut vars: Vec<String> = names.map(<[String]>::to_vec).unwrap_or_default();
    let fixed = names.is_some();
    // terms as (coefficient, exponents by var name)
    let mut raw_terms: Vec<(BigInt, Vec<(String, u32, usize, usize)>)> = Vec::new();

    p.skip_ws();
    if p.peek().is_none() {
        return Err(p.error("empty input"));
    }
    let mut first = true;
    loop {
        p.skip_ws();
        if p.peek().is_none() {
            if first {
                return Err(p.error("expected a term"));
            }
            break;
        }
        let mut sign = BigInt::from(1);
        match p.peek() {
            Some(b'+') => {
                p.bump();
            }
            Some(b'-') => {
                sign = BigInt::from(-1);
                p.bump();
            }
            _ if first => {}
            _ => return Err(p.error("expected '+' or '-' between terms")),
        }
        first = false;
        p.skip_ws();
        let mut coeff = sign;
        let mut factors: Vec<(String, u32, usize, usize)> = Vec::new();
        loop {
            p.skip_ws();
            match p.peek() {
                Some(c) if c.is_ascii_digit() => {
                    coeff *= p.number()?;
                }
                Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                    let (line, col) = (p.line, p.col);
                    let name = p.name()?;
                    let exp = if p.peek() == Some(b'^') {
                        p.bump();
                        let e = p.number()?;
                        u32::try_from(&e).map_err(|_| p.error("exponent too large"))?
                    } else {
                        1
                    };
                    factors.push((name, exp, line, col));
                }
                _ => return Err(p.error("expected a coefficient or variable")),
            }
            p.skip_ws();
            if p.peek() == Some(b'*') {
                p.bump();
            } else {
                break;
            }
        }
        raw_terms.push((coeff, factors));
    }

    for (_, factors) in &raw_terms {
        for (name, _, line, col) in factors {
            if !vars.contains(name) {
                if fixed {
                    return Err(ParseError::at(*line, *col, format!("unknown variable {name:?}")));
                }
                vars.push(name.clone());
            }
        }
    }
    let arity = vars.len();
    let index: HashMap<&str, usize> =
        vars.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
    let terms = raw_terms.into_iter().map(|(c, factors)| {
        let mut exps = vec![0u32; arity];
        for (name, e, _, _) in factors {
            exps[index[name.as_str()]] += e;
        }
        (c, exps)
    });
    let poly = Polynomial::from_terms(arity, terms).map_err(|e| ParseError::general(e.to_string()))?;
    Ok((poly, vars))
}

#[derive(Serialize)]
#[serde(tag = "op", rename_all = "lowercase")]
enum NodeDoc<'a> {
    Const { value: String },
    Var { index: usize },
    Add { children: &'a [crate::dag::NodeId] },
    Mul { children: &'a [crate::dag::NodeId] },
    Pow { child: u32, exp: u32 },
    Neg { child: u32 },
}

#[derive(Serialize)]
struct DagDoc<'a> {
    vars: &'a [String],
    #[serde(skip_serializing_if = "HashMap::is_empty")]
    meta: HashMap<String, String>,
    nodes: Vec<NodeDoc<'a>>,
    root: u32,
}

impl serde::Serialize for crate::dag::NodeId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u32(self.index() as u32)
    }
}

/// DAG document: typed node list with child indices, root index, variable
/// names, and free-form metadata (used to record the `Z` choice of the
/// 10-variable build).
pub fn dag_to_json(dag: &ExprDag, meta: &[(String, String)]) -> String {
    let nodes = dag
        .nodes()
        .iter()
        .map(|n| match n {
            DagNode::Const(c) => NodeDoc::Const { value: c.to_string() },
            DagNode::Var(i) => NodeDoc::Var { index: *i },
            DagNode::Add(ch) => NodeDoc::Add { children: ch },
            DagNode::Mul(ch) => NodeDoc::Mul { children: ch },
            DagNode::Pow(c, e) => NodeDoc::Pow { child: c.index() as u32, exp: *e },
            DagNode::Neg(c) => NodeDoc::Neg { child: c.index() as u32 },
        })
        .collect();
    let doc = DagDoc {
        vars: dag.vars(),
        meta: meta.iter().cloned().collect(),
        nodes,
        root: dag.root().index() as u32,
    };
    serde_json::to_string(&doc).expect("serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::monomial;

    fn names(list: &[&str]) -> Vec<String> {
        list.iter().map(ToString::to_string).collect()
    }

    fn x2_minus_y2() -> Polynomial {
        monomial(2, 1, &[(0, 2)]).sub(&monomial(2, 1, &[(1, 2)])).unwrap()
    }

    #[test]
    fn json_round_trip_matches_schema() {
        let p = x2_minus_y2();
        let json = to_json(&p, &names(&["x", "y"]));
        assert_eq!(
            json,
            r#"{"vars":["x","y"],"terms":[{"c":"1","e":[2,0]},{"c":"-1","e":[0,2]}]}"#
        );
        let (back, vars) = from_json(&json).unwrap();
        assert_eq!(back, p);
        assert_eq!(vars, names(&["x", "y"]));
    }

    #[test]
    fn json_zero_polynomial() {
        let z = Polynomial::zero(2);
        let json = to_json(&z, &names(&["x", "y"]));
        assert_eq!(json, r#"{"vars":["x","y"],"terms":[]}"#);
        let (back, _) = from_json(&json).unwrap();
        assert!(back.is_zero());
    }

    #[test]
    fn json_accepts_out_of_order_terms() {
        let input = r#"{"vars":["x","y"],"terms":[{"c":"-1","e":[0,2]},{"c":"1","e":[2,0]}]}"#;
        let (p, _) = from_json(input).unwrap();
        assert_eq!(p, x2_minus_y2());
    }

    #[test]
    fn json_rejects_malformed_documents() {
        assert!(from_json("{").is_err());
        // wrong exponent length
        let bad = r#"{"vars":["x"],"terms":[{"c":"1","e":[1,2]}]}"#;
        assert!(from_json(bad).unwrap_err().message.contains("length"));
        // duplicate exponent vector
        let dup = r#"{"vars":["x"],"terms":[{"c":"1","e":[1]},{"c":"2","e":[1]}]}"#;
        assert!(from_json(dup).unwrap_err().message.contains("duplicate"));
        // zero coefficient
        let zero = r#"{"vars":["x"],"terms":[{"c":"0","e":[1]}]}"#;
        assert!(from_json(zero).unwrap_err().message.contains("zero"));
    }

    #[test]
    fn text_round_trip() {
        let p = x2_minus_y2();
        let vars = names(&["x", "y"]);
        let text = to_text(&p, &vars);
        assert_eq!(text, "x^2 - y^2");
        let (back, got_vars) = from_text(&text, Some(&vars)).unwrap();
        assert_eq!(back, p);
        assert_eq!(got_vars, vars);
    }

    #[test]
    fn text_inferred_variables_and_coefficients() {
        let (p, vars) = from_text("-3*a*b^2 + 2 + a", None).unwrap();
        assert_eq!(vars, names(&["a", "b"]));
        assert_eq!(p.coefficient(&[1, 2]), BigInt::from(-3));
        assert_eq!(p.coefficient(&[0, 0]), BigInt::from(2));
        assert_eq!(p.coefficient(&[1, 0]), BigInt::from(1));
    }

    #[test]
    fn text_accumulates_repeated_monomials() {
        let (p, _) = from_text("x + x", None).unwrap();
        assert_eq!(p.coefficient(&[1]), BigInt::from(2));
    }

    #[test]
    fn text_error_positions() {
        let err = from_text("x^2 $ y", Some(&names(&["x", "y"]))).unwrap_err();
        assert_eq!((err.line, err.col), (1, 5));
        let err = from_text("x + q", Some(&names(&["x"]))).unwrap_err();
        assert!(err.message.contains("unknown variable"));
        assert_eq!((err.line, err.col), (1, 5));
    }

    #[test]
    fn text_zero_literal() {
        let (p, vars) = from_text("0", Some(&names(&["x"]))).unwrap();
        assert!(p.is_zero());
        assert_eq!(vars.len(), 1);
    }

    #[test]
    fn dag_json_shape() {
        let mut b = crate::dag::DagBuilder::new(["x"]);
        let x = b.var(0);
        let two = b.constant(2);
        let p = b.pow(x, 3);
        let root = b.mul(&[two, p]);
        let d = b.finish(root);
        let json = dag_to_json(&d, &[("z_choice".into(), "L".into())]);
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["vars"][0], "x");
        assert_eq!(v["meta"]["z_choice"], "L");
        assert_eq!(v["nodes"][0]["op"], "var");
        assert!(v["root"].is_u64());
    }
}
