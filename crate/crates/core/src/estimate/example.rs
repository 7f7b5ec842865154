use super::{CurveSpec, SemiAlgFn};
use crate::error::{Error, Result};
use crate::formulas::{Formula, Node, Relation};
use crate::{Poly, Rational};

/// The exponential-dependence instance on the unit ball of `R^n`:
/// `f = |x_2 - x_1^d| + ... + |x_n - x_{n-1}^d| + |x_n^d|`,
/// `g = |x|`, with the curve `x(t) = (t, t^d, ..., t^(d^(n-1)))` on which
/// `f = |t|^(d^n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PaperExample {
    pub d: u32,
    pub n: u32,
    pub vars: Vec<String>,
    pub f: SemiAlgFn,
    pub g: SemiAlgFn,
    pub curve: CurveSpec,
    pub domain: Formula,
}

impl PaperExample {
    /// `d^n`, the exponent realized along the curve.
    pub fn expected_exponent(&self) -> u64 {
        (self.d as u64).pow(self.n)
    }
}

pub fn paper_example(d: u32, n: u32) -> Result<PaperExample> {
    if d < 1 || n < 1 {
        return Err(Error::InvalidInput("example needs d >= 1 and n >= 1".into()));
    }
    if (d as f64).powi(n as i32) > 64.0 {
        return Err(Error::InvalidInput("d^n above 64 underflows any float sample".into()));
    }
    let k = n as usize;
    let x = |i: usize| Poly::var(k, i).expect("index");
    let mut f: Vec<Poly> = (0..k - 1).map(|i| &x(i + 1) - &x(i).pow(d)).collect();
    f.push(x(k - 1).pow(d));
    let g: Vec<Poly> = (0..k).map(x).collect();
    let t = Poly::var(1, 0).expect("index");
    let curve = CurveSpec::new((0..n).map(|i| t.pow(d.pow(i))).collect())?;
    let norm2 = g.iter().fold(Poly::zero(k), |acc, xi| &acc + &(xi * xi));
    let ball = &norm2 - &Poly::constant(k, Rational::from_integer(1.into()));
    let domain = Formula::new(k, Node::atom(ball, Relation::Le))?;
    Ok(PaperExample {
        d,
        n,
        vars: (1..=k).map(|i| format!("x{i}")).collect(),
        f: SemiAlgFn::AbsSum(f),
        g: SemiAlgFn::Norm(g),
        curve,
        domain,
    })
}
