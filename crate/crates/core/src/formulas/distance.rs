use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};

use super::{Formula, Node, Relation};
use crate::error::{Error, Result};
use crate::realroots::{realizable_sign_conditions_1d, IsolatingInterval, LineCell, RealAlgebraic};
use crate::scalar::{rational_to_f64, Sign};
use crate::{Poly, Rational};

/// Nonempty finite set of pairwise distinct rational points.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSet {
    points: Vec<Vec<Rational>>,
}

impl PointSet {
    pub fn new(points: Vec<Vec<Rational>>) -> Result<Self> {
        let first = points.first().ok_or(Error::EmptySet)?;
        let n = first.len();
        for p in &points {
            if p.len() != n {
                return Err(Error::ArityMismatch { expected: n, got: p.len() });
            }
        }
        for (i, p) in points.iter().enumerate() {
            if points[..i].contains(p) {
                return Err(Error::InvalidInput(format!("duplicate point at index {i}")));
            }
        }
        Ok(PointSet { points })
    }

    pub fn arity(&self) -> usize {
        self.points[0].len()
    }

    pub fn points(&self) -> &[Vec<Rational>] {
        &self.points
    }
}

fn sq_dist_poly(p: &[Rational], n: usize) -> Poly {
    // ||X - p||^2 over variables X_1..X_n, T (arity n + 1).
    let mut acc = Poly::zero(n + 1);
    for (i, pi) in p.iter().enumerate() {
        let d = &Poly::var(n + 1, i).expect("index") - &Poly::constant(n + 1, pi.clone());
        acc = &acc + &(&d * &d);
    }
    acc
}

/// The formula in `(X, T)` whose realization is the graph of the Euclidean
/// distance to `m`:
/// `T >= 0 and (and_i T^2 <= |X - p_i|^2) and (or_i T^2 = |X - p_i|^2)`.
pub fn dist_formula_finite(m: &PointSet) -> Formula {
    let n = m.arity();
    let t = Poly::var(n + 1, n).expect("index");
    let t2 = &t * &t;
    let diffs: Vec<Poly> = m.points.iter().map(|p| &t2 - &sq_dist_poly(p, n)).collect();
    let node = Node::And(vec![
        Node::atom(t, Relation::Ge),
        Node::And(diffs.iter().map(|d| Node::atom(d.clone(), Relation::Le)).collect()),
        Node::Or(diffs.into_iter().map(|d| Node::atom(d, Relation::Eq)).collect()),
    ]);
    Formula::new(n + 1, node).expect("arity is consistent")
}

/// Exact squared distance from `x` to `m`, and its floating square root.
pub fn dist_to_finite(m: &PointSet, x: &[Rational]) -> Result<(Rational, f64)> {
    if x.len() != m.arity() {
        return Err(Error::ArityMismatch { expected: m.arity(), got: x.len() });
    }
    let sq = m
        .points
        .iter()
        .map(|p| p.iter().zip(x).map(|(a, b)| (a - b) * (a - b)).fold(Rational::zero(), |s, v| s + v))
        .min()
        .expect("nonempty");
    let v = rational_to_f64(&sq).sqrt();
    Ok((sq, v))
}

/// Distance value on the line: a rational, or `scale * root + offset` with
/// `scale = +-1` for an irrational root.
#[derive(Clone, Debug, PartialEq)]
pub enum DistValue {
    Exact(Rational),
    Algebraic { root: IsolatingInterval, scale: Sign, offset: Rational },
}

impl DistValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            DistValue::Exact(r) => rational_to_f64(r),
            DistValue::Algebraic { root, scale, offset } => {
                // Refine until the value is known to about 1e-15 relative.
                let mut iv = root.clone();
                let approx = (scale.as_i8() as f64) * iv.to_f64() + rational_to_f64(offset);
                let tol = crate::scalar::f64_to_rational((approx.abs() * 1e-17).max(1e-300)).unwrap_or_default();
                iv.refine_to_width(&tol);
                let mid = (&iv.low + &iv.high) / Rational::from_integer(2.into());
                let v = if *scale == Sign::Negative { -mid } else { mid } + offset;
                rational_to_f64(&v)
            }
        }
    }
}

impl fmt::Display for DistValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DistValue::Exact(r) => f.write_str(&crate::scalar::rational_string(r)),
            DistValue::Algebraic { root, scale, offset } => {
                let s = if *scale == Sign::Negative { "-" } else { "" };
                if offset.is_zero() {
                    write!(f, "{s}[{root}]")
                } else {
                    let op = if offset.is_negative() { "-" } else { "+" };
                    write!(f, "{s}[{root}] {op} {}", crate::scalar::rational_string(&offset.abs()))
                }
            }
        }
    }
}

/// Exact distance from a point to a closed subset of the line, together
/// with the cell that realizes it.
#[derive(Clone, Debug, PartialEq)]
pub struct Dist1d {
    pub value: DistValue,
    pub witness: LineCell,
}

/// `q(c - t)` for a dense `q`.
fn reflect(q: &[Rational], c: &Rational) -> Vec<Rational> {
    let mut out: Vec<Rational> = Vec::new();
    for a in q.iter().rev() {
        // out = out * (c - t) + a
        let mut next = vec![Rational::zero(); out.len() + 1];
        for (k, v) in out.iter().enumerate() {
            next[k] += c * v;
            next[k + 1] -= v;
        }
        next[0] += a;
        out = next;
    }
    crate::poly::trim_dense(&mut out);
    out
}

/// `c - alpha` as a real algebraic number.
fn reflected(alpha: &RealAlgebraic, c: &Rational) -> RealAlgebraic {
    match alpha {
        RealAlgebraic::Rational(r) => RealAlgebraic::Rational(c - r),
        RealAlgebraic::Root(iv) => {
            let p = reflect(&iv.sqf_dense(), c);
            RealAlgebraic::Root(IsolatingInterval::from_parts(&p, c - &iv.high, c - &iv.low))
        }
    }
}

fn signed_value(alpha: &RealAlgebraic, scale: Sign, offset: Rational) -> DistValue {
    match alpha {
        RealAlgebraic::Rational(r) => DistValue::Exact(if scale == Sign::Negative { -r } else { r.clone() } + offset),
        RealAlgebraic::Root(iv) => DistValue::Algebraic { root: iv.clone(), scale, offset },
    }
}

/// Exact distance from `x` to `S = R(phi)`, a closed nonempty subset of the
/// line, computed from the cell decomposition by the atoms' roots.
pub fn dist_1d(phi: &Formula, x: &Rational) -> Result<Dist1d> {
    if phi.arity() != 1 {
        return Err(Error::ArityMismatch { expected: 1, got: phi.arity() });
    }
    let family: Vec<Poly> = phi.atom_polynomials().into_iter().filter(|p| !p.is_constant()).collect();
    let cells = realizable_sign_conditions_1d(&family)?;
    let inside: Vec<bool> = cells
        .iter()
        .map(|(cond, _)| {
            phi.eval_with(|p| -> Result<Sign> {
                Ok(match family.iter().position(|q| q == p) {
                    Some(i) => cond.assignment[i],
                    None => p.constant_value().map_or(Sign::Zero, |c| Sign::of(&c)),
                })
            })
        })
        .collect::<Result<_>>()?;
    if !inside.iter().any(|&b| b) {
        return Err(Error::EmptySet);
    }
    for (i, (_, cell)) in cells.iter().enumerate() {
        if inside[i] && !cell.is_point() {
            let open_left = i > 0 && !inside[i - 1];
            let open_right = i + 1 < cells.len() && !inside[i + 1];
            if open_left || open_right {
                let end = if open_left { &cells[i - 1].1 } else { &cells[i + 1].1 };
                return Err(Error::NotClosed(format!("boundary point {} is not in the set", end.sample())));
            }
        }
    }
    let k = cells
        .iter()
        .position(|(_, c)| match c {
            LineCell::Point(r) => r.cmp_rational(x) == Ordering::Equal,
            LineCell::Interval { lower, upper, .. } => {
                lower.as_ref().is_none_or(|l| l.cmp_rational(x) == Ordering::Less)
                    && upper.as_ref().is_none_or(|u| u.cmp_rational(x) == Ordering::Greater)
            }
        })
        .expect("cells partition the line");
    if inside[k] {
        return Ok(Dist1d { value: DistValue::Exact(Rational::zero()), witness: cells[k].1.clone() });
    }
    // Nearest members of S on either side are boundary points.
    let left = (0..k).rev().find(|&j| inside[j]);
    let right = (k + 1..cells.len()).find(|&j| inside[j]);
    let point_of = |j: usize| match &cells[j].1 {
        LineCell::Point(r) => r.clone(),
        LineCell::Interval { .. } => unreachable!("closed set: nearest member is an endpoint"),
    };
    let pick_left = match (left, right) {
        (Some(_), None) => true,
        (None, Some(_)) => false,
        (Some(l), Some(r)) => {
            // x - a <= b - x  iff  2x - a <= b.
            let two_x = x * Rational::from_integer(2.into());
            reflected(&point_of(l), &two_x).cmp_exact(&point_of(r)) != Ordering::Greater
        }
        (None, None) => unreachable!("set is nonempty"),
    };
    let (j, value) = if pick_left {
        let l = left.unwrap();
        (l, signed_value(&point_of(l), Sign::Negative, x.clone()))
    } else {
        let r = right.unwrap();
        (r, signed_value(&point_of(r), Sign::Positive, -x.clone()))
    };
    Ok(Dist1d { value, witness: cells[j].1.clone() })
}
