//! Quantifier-free formulas over polynomial sign conditions, exact
//! distance descriptions, and residual functions.

mod distance;
mod residual;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use distance::{dist_1d, dist_formula_finite, dist_to_finite, Dist1d, DistValue, PointSet};
pub use residual::{
    det_exact, jacobi_eigenvalues, residual_binary, residual_psi, residual_sdp, BinaryResidual, SdpResidual,
};

use crate::error::{Error, Result};
use crate::poly::{default_var_names, parse_poly, FloatPoly};
use crate::scalar::{Real, Sign};
use crate::{Poly, Rational};

/// Sign relation of an atom against zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "eq0")]
    Eq,
    #[serde(rename = "gt0")]
    Gt,
    #[serde(rename = "lt0")]
    Lt,
    #[serde(rename = "ge0")]
    Ge,
    #[serde(rename = "le0")]
    Le,
    #[serde(rename = "ne0")]
    Ne,
}

impl Relation {
    pub fn holds(self, s: Sign) -> bool {
        match self {
            Relation::Eq => s == Sign::Zero,
            Relation::Gt => s == Sign::Positive,
            Relation::Lt => s == Sign::Negative,
            Relation::Ge => s != Sign::Negative,
            Relation::Le => s != Sign::Positive,
            Relation::Ne => s != Sign::Zero,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Eq => "= 0",
            Relation::Gt => "> 0",
            Relation::Lt => "< 0",
            Relation::Ge => ">= 0",
            Relation::Le => "<= 0",
            Relation::Ne => "!= 0",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Atom {
    pub polynomial: Poly,
    pub relation: Relation,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    And(Vec<Node>),
    Or(Vec<Node>),
    Not(Box<Node>),
    Atom(Atom),
}

impl Node {
    pub fn atom(polynomial: Poly, relation: Relation) -> Node {
        Node::Atom(Atom { polynomial, relation })
    }

    fn eval_with<E>(&self, sign: &mut impl FnMut(&Poly) -> Result<Sign, E>) -> Result<bool, E> {
        Ok(match self {
            Node::And(args) => {
                for a in args {
                    if !a.eval_with(sign)? {
                        return Ok(false);
                    }
                }
                true
            }
            Node::Or(args) => {
                for a in args {
                    if a.eval_with(sign)? {
                        return Ok(true);
                    }
                }
                false
            }
            Node::Not(a) => !a.eval_with(sign)?,
            Node::Atom(at) => at.relation.holds(sign(&at.polynomial)?),
        })
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a Atom>) {
        match self {
            Node::And(args) | Node::Or(args) => args.iter().for_each(|a| a.collect_atoms(out)),
            Node::Not(a) => a.collect_atoms(out),
            Node::Atom(at) => out.push(at),
        }
    }

    fn fmt_with(&self, vars: &[&str], f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |args: &[Node], op: &str, f: &mut fmt::Formatter<'_>| {
            if args.is_empty() {
                return f.write_str(if op == "and" { "true" } else { "false" });
            }
            f.write_str("(")?;
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    write!(f, " {op} ")?;
                }
                a.fmt_with(vars, f)?;
            }
            f.write_str(")")
        };
        match self {
            Node::And(args) => join(args, "and", f),
            Node::Or(args) => join(args, "or", f),
            Node::Not(a) => {
                f.write_str("not ")?;
                a.fmt_with(vars, f)
            }
            Node::Atom(at) => write!(f, "{} {}", at.polynomial.to_string_with(vars), at.relation.symbol()),
        }
    }
}

/// Formula with a fixed ambient arity shared by all of its atoms.
#[derive(Clone, Debug, PartialEq)]
pub struct Formula {
    arity: usize,
    node: Node,
}

impl Formula {
    pub fn new(arity: usize, node: Node) -> Result<Self> {
        let f = Formula { arity, node };
        for a in f.atoms() {
            if a.polynomial.arity() != arity {
                return Err(Error::ArityMismatch { expected: arity, got: a.polynomial.arity() });
            }
        }
        Ok(f)
    }

    /// Conjunction of `p_i rel_i 0`.
    pub fn conjunction(arity: usize, atoms: impl IntoIterator<Item = (Poly, Relation)>) -> Result<Self> {
        Self::new(arity, Node::And(atoms.into_iter().map(|(p, r)| Node::atom(p, r)).collect()))
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn node(&self) -> &Node {
        &self.node
    }

    pub fn atoms(&self) -> Vec<&Atom> {
        let mut out = Vec::new();
        self.node.collect_atoms(&mut out);
        out
    }

    /// Distinct atom polynomials in first-occurrence order.
    pub fn atom_polynomials(&self) -> Vec<Poly> {
        let mut out: Vec<Poly> = Vec::new();
        for a in self.atoms() {
            if !out.contains(&a.polynomial) {
                out.push(a.polynomial.clone());
            }
        }
        out
    }

    /// Evaluates the formula given the sign of each atom polynomial.
    pub fn eval_with<E>(&self, mut sign: impl FnMut(&Poly) -> Result<Sign, E>) -> Result<bool, E> {
        self.node.eval_with(&mut sign)
    }

    /// Exact truth value at a rational point.
    pub fn eval(&self, x: &[Rational]) -> Result<bool> {
        if x.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, got: x.len() });
        }
        self.eval_with(|p| p.eval(x).map(|v| Sign::of(&v)))
    }

    /// Floating-point evaluator with coefficients converted once.
    pub fn compile<F: Real>(&self) -> CompiledFormula<F> {
        let polys = self.atom_polynomials();
        let fp = polys.iter().map(FloatPoly::new).collect();
        CompiledFormula { node: compile_node(&self.node, &polys), fp }
    }

    pub fn to_json(&self) -> FormulaJson {
        let names = default_var_names(self.arity);
        let vars: Vec<&str> = names.iter().map(String::as_str).collect();
        FormulaJson { arity: self.arity, vars: None, node: node_to_json(&self.node, &vars) }
    }

    pub fn from_json(json: &FormulaJson) -> Result<Self> {
        let names = match &json.vars {
            Some(v) => {
                if v.len() != json.arity {
                    return Err(Error::ArityMismatch { expected: json.arity, got: v.len() });
                }
                v.clone()
            }
            None => default_var_names(json.arity),
        };
        let vars: Vec<&str> = names.iter().map(String::as_str).collect();
        Self::new(json.arity, node_from_json(&json.node, &vars)?)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = default_var_names(self.arity);
        let vars: Vec<&str> = names.iter().map(String::as_str).collect();
        self.node.fmt_with(&vars, f)
    }
}

/// Formula whose atom polynomials have been converted to a float type.
#[derive(Clone, Debug)]
pub struct CompiledFormula<F> {
    node: CNode,
    fp: Vec<FloatPoly<F>>,
}

#[derive(Clone, Debug)]
enum CNode {
    And(Vec<CNode>),
    Or(Vec<CNode>),
    Not(Box<CNode>),
    Atom(usize, Relation),
}

fn compile_node(node: &Node, polys: &[Poly]) -> CNode {
    match node {
        Node::And(a) => CNode::And(a.iter().map(|x| compile_node(x, polys)).collect()),
        Node::Or(a) => CNode::Or(a.iter().map(|x| compile_node(x, polys)).collect()),
        Node::Not(a) => CNode::Not(Box::new(compile_node(a, polys))),
        Node::Atom(at) => {
            CNode::Atom(polys.iter().position(|q| *q == at.polynomial).expect("atom polynomial"), at.relation)
        }
    }
}

impl<F: Real> CompiledFormula<F> {
    pub fn eval(&self, x: &[F]) -> bool {
        self.eval_node(&self.node, x)
    }

    fn eval_node(&self, node: &CNode, x: &[F]) -> bool {
        match node {
            CNode::And(a) => a.iter().all(|n| self.eval_node(n, x)),
            CNode::Or(a) => a.iter().any(|n| self.eval_node(n, x)),
            CNode::Not(a) => !self.eval_node(a, x),
            CNode::Atom(i, rel) => {
                let v = self.fp[*i].eval(x);
                let s = if v > F::zero() {
                    Sign::Positive
                } else if v < F::zero() {
                    Sign::Negative
                } else {
                    Sign::Zero
                };
                rel.holds(s)
            }
        }
    }
}

/// Serialized formula: `{"arity": n, "node": {...}}`, optionally with
/// variable names used by the atom texts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormulaJson {
    pub arity: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vars: Option<Vec<String>>,
    pub node: NodeJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum NodeJson {
    And { args: Vec<NodeJson> },
    Or { args: Vec<NodeJson> },
    Not { arg: Box<NodeJson> },
    Atom { poly: String, rel: Relation },
}

fn node_to_json(n: &Node, vars: &[&str]) -> NodeJson {
    match n {
        Node::And(a) => NodeJson::And { args: a.iter().map(|x| node_to_json(x, vars)).collect() },
        Node::Or(a) => NodeJson::Or { args: a.iter().map(|x| node_to_json(x, vars)).collect() },
        Node::Not(a) => NodeJson::Not { arg: Box::new(node_to_json(a, vars)) },
        Node::Atom(at) => NodeJson::Atom { poly: at.polynomial.to_string_with(vars), rel: at.relation },
    }
}

fn node_from_json(n: &NodeJson, vars: &[&str]) -> Result<Node> {
    Ok(match n {
        NodeJson::And { args } => Node::And(args.iter().map(|x| node_from_json(x, vars)).collect::<Result<_>>()?),
        NodeJson::Or { args } => Node::Or(args.iter().map(|x| node_from_json(x, vars)).collect::<Result<_>>()?),
        NodeJson::Not { arg } => Node::Not(Box::new(node_from_json(arg, vars)?)),
        NodeJson::Atom { poly, rel } => Node::atom(parse_poly(poly, vars)?, *rel),
    })
}

/// Convenience: `atom_of("x^2 - 1", Relation::Le, &["x"])`.
pub fn atom_of(text: &str, rel: Relation, vars: &[&str]) -> Result<Node> {
    Ok(Node::atom(parse_poly(text, vars)?, rel))
}
