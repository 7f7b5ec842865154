//! Exact real roots of univariate rational polynomials: isolation, counting,
//! signs at roots, Thom encodings and sign conditions on the line.

mod algebraic;
pub(crate) mod engine;

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Zero};

pub use algebraic::AlgebraicPoint;
pub use engine::simplest_between;
use engine::{Bracket, Engine, RationalField};

use crate::error::{Error, Result};
use crate::scalar::{rational_string, rational_to_f64, Sign};
use crate::{Poly, Rational};

const FIELD: RationalField = RationalField;

fn engine() -> Engine<'static, RationalField> {
    Engine::new(&FIELD)
}

pub(crate) fn dense_of(p: &Poly) -> Result<Vec<Rational>> {
    p.to_dense()
}

fn nonzero_dense(p: &Poly) -> Result<Vec<Rational>> {
    let d = dense_of(p)?;
    if d.is_empty() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(d)
}

/// Rational interval `[low, high]` containing exactly one real root of
/// `polynomial`, which is kept square-free. When `low < high` the root is
/// interior and neither endpoint is a root.
#[derive(Clone, Debug, PartialEq)]
pub struct IsolatingInterval {
    pub low: Rational,
    pub high: Rational,
    pub polynomial: Poly,
}

impl IsolatingInterval {
    /// Checks that `[low, high]` holds exactly one root of `p` and
    /// normalizes it (an endpoint root collapses the interval to a point).
    pub fn new(p: &Poly, low: Rational, high: Rational) -> Result<Self> {
        let dense = nonzero_dense(p)?;
        if low > high {
            return Err(Error::InvalidInterval(format!("{} > {}", rational_string(&low), rational_string(&high))));
        }
        let eng = engine();
        let sqf = eng.square_free(&dense);
        let at_low = eng.sign_at(&sqf, &low) == Sign::Zero;
        let at_high = eng.sign_at(&sqf, &high) == Sign::Zero;
        let seq = eng.sturm(&sqf);
        let interior = if low == high { 0 } else { eng.variations(&seq, &low) - eng.variations(&seq, &high) - usize::from(at_high) };
        let total = interior + usize::from(at_low) + usize::from(at_high && low != high);
        if total != 1 {
            return Err(Error::InvalidInput(format!("interval contains {total} roots, expected exactly one")));
        }
        let (low, high) = if at_low {
            (low.clone(), low)
        } else if at_high {
            (high.clone(), high)
        } else {
            (low, high)
        };
        Ok(Self::from_parts(&sqf, low, high))
    }

    pub(crate) fn from_parts(sqf: &[Rational], low: Rational, high: Rational) -> Self {
        IsolatingInterval { low, high, polynomial: Poly::from_dense(sqf).primitive_part() }
    }

    pub(crate) fn sqf_dense(&self) -> Vec<Rational> {
        self.polynomial.to_dense().expect("univariate")
    }

    pub(crate) fn bracket(&self) -> Bracket {
        Bracket { low: self.low.clone(), high: self.high.clone() }
    }

    fn set_bracket(&mut self, br: Bracket) {
        self.low = br.low;
        self.high = br.high;
    }

    pub fn is_exact(&self) -> bool {
        self.low == self.high
    }

    pub fn width(&self) -> Rational {
        &self.high - &self.low
    }

    /// Halves the interval (or pins the root when a midpoint hits it).
    pub fn refine(&mut self) {
        let mut br = self.bracket();
        engine().refine(&self.sqf_dense(), &mut br);
        self.set_bracket(br);
    }

    pub fn refine_to_width(&mut self, width: &Rational) {
        let mut br = self.bracket();
        engine().refine_to_width(&self.sqf_dense(), &mut br, width);
        self.set_bracket(br);
    }

    /// Floating-point approximation of the root to about `f64` precision.
    pub fn to_f64(&self) -> f64 {
        let mut me = self.clone();
        let lo = rational_to_f64(&me.low).abs().max(rational_to_f64(&me.high).abs()).max(1e-300);
        let tol = crate::scalar::f64_to_rational(lo * 1e-17).unwrap_or_else(Rational::zero);
        me.refine_to_width(&tol);
        rational_to_f64(&((&me.low + &me.high) / Rational::from_integer(2.into())))
    }

    /// Orders the root against `r`.
    pub fn cmp_rational(&self, r: &Rational) -> Ordering {
        let mut br = self.bracket();
        engine().compare_root(&self.sqf_dense(), &mut br, r)
    }
}

impl fmt::Display for IsolatingInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact() {
            write!(f, "{}", rational_string(&self.low))
        } else {
            write!(f, "root of {} in ({}, {})", self.polynomial, rational_string(&self.low), rational_string(&self.high))
        }
    }
}

/// A real algebraic number: either rational, or a root given by an
/// isolating interval.
#[derive(Clone, Debug, PartialEq)]
pub enum RealAlgebraic {
    Rational(Rational),
    Root(IsolatingInterval),
}

impl RealAlgebraic {
    pub fn from_interval(iv: IsolatingInterval) -> Self {
        if iv.is_exact() {
            RealAlgebraic::Rational(iv.low)
        } else {
            RealAlgebraic::Root(iv)
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            RealAlgebraic::Rational(r) => Some(r),
            RealAlgebraic::Root(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            RealAlgebraic::Rational(r) => rational_to_f64(r),
            RealAlgebraic::Root(iv) => iv.to_f64(),
        }
    }

    pub fn cmp_rational(&self, r: &Rational) -> Ordering {
        match self {
            RealAlgebraic::Rational(v) => v.cmp(r),
            RealAlgebraic::Root(iv) => iv.cmp_rational(r),
        }
    }

    /// Sign of the univariate `q` at this number.
    pub fn sign_of(&self, q: &Poly) -> Result<Sign> {
        match self {
            RealAlgebraic::Rational(r) => Ok(Sign::of(&q.eval(std::slice::from_ref(r))?)),
            RealAlgebraic::Root(iv) => sign_at_root(q, iv),
        }
    }

    /// Exact comparison of two real algebraic numbers.
    pub fn cmp_exact(&self, other: &RealAlgebraic) -> Ordering {
        match (self, other) {
            (RealAlgebraic::Rational(a), _) => other.cmp_rational(a).reverse(),
            (_, RealAlgebraic::Rational(b)) => self.cmp_rational(b),
            (RealAlgebraic::Root(a), RealAlgebraic::Root(b)) => {
                let eng = engine();
                let (pa, pb) = (a.sqf_dense(), b.sqf_dense());
                let (mut ba, mut bb) = (a.bracket(), b.bracket());
                // Equal iff `a` is a root of `pb` lying in `b`'s bracket.
                if eng.sign_at_root(&pb, &pa, &mut ba) == Sign::Zero {
                    let below = eng.compare_root(&pa, &mut ba.clone(), &bb.low) != Ordering::Greater;
                    let above = eng.compare_root(&pa, &mut ba.clone(), &bb.high) != Ordering::Less;
                    if !below && !above {
                        return Ordering::Equal;
                    }
                }
                loop {
                    if ba.high < bb.low || (ba.high == bb.low && !(ba.is_point() && bb.is_point())) {
                        return Ordering::Less;
                    }
                    if bb.high < ba.low || (bb.high == ba.low && !(ba.is_point() && bb.is_point())) {
                        return Ordering::Greater;
                    }
                    if ba.is_point() && bb.is_point() {
                        return ba.low.cmp(&bb.low);
                    }
                    eng.refine(&pa, &mut ba);
                    eng.refine(&pb, &mut bb);
                }
            }
        }
    }
}

impl fmt::Display for RealAlgebraic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealAlgebraic::Rational(r) => f.write_str(&rational_string(r)),
            RealAlgebraic::Root(iv) => iv.fmt(f),
        }
    }
}

/// Collapses the bracket to a point when its root is rational. A rational
/// root `p/q` of a primitive integer polynomial has `q | lc`, so once the
/// width is below `1/lc^2` it is the simplest rational in the bracket.
pub(crate) fn pin_rational(sqf: &[Rational], br: &mut Bracket) {
    if br.is_point() {
        return;
    }
    let prim = Poly::from_dense(sqf).primitive_part();
    let lc = prim.leading_term().map(|(_, c)| c.clone()).unwrap_or_else(Rational::one);
    let eng = engine();
    eng.refine_to_width(sqf, br, &(Rational::one() / (&lc * &lc * Rational::from_integer(2.into()))));
    if br.is_point() {
        return;
    }
    let s = simplest_between(&br.low, &br.high);
    if eng.sign_at(sqf, &s) == Sign::Zero {
        *br = Bracket::point(s);
    }
}

/// Isolating intervals of the distinct real roots of `p`, in increasing
/// order, each of width at most 1. Rational roots come back as points.
pub fn isolate_roots(p: &Poly) -> Result<Vec<IsolatingInterval>> {
    let dense = nonzero_dense(p)?;
    let eng = engine();
    let sqf = eng.square_free(&dense);
    let one = Rational::one();
    Ok(eng
        .isolate(&sqf)
        .into_iter()
        .map(|mut br| {
            eng.refine_to_width(&sqf, &mut br, &one);
            pin_rational(&sqf, &mut br);
            IsolatingInterval::from_parts(&sqf, br.low, br.high)
        })
        .collect())
}

/// Number of distinct real roots of `p` in the open interval `(a, b)`.
pub fn count_roots_in(p: &Poly, a: &Rational, b: &Rational) -> Result<usize> {
    let dense = nonzero_dense(p)?;
    if a >= b {
        return Err(Error::InvalidInterval(format!("{} >= {}", rational_string(a), rational_string(b))));
    }
    let eng = engine();
    for e in [a, b] {
        if eng.sign_at(&dense, e) == Sign::Zero {
            return Err(Error::EndpointIsRoot(rational_string(e)));
        }
    }
    let seq = eng.sturm(&dense);
    Ok(eng.variations(&seq, a) - eng.variations(&seq, b))
}

/// Exact sign of the univariate `q` at the root isolated by `root`.
pub fn sign_at_root(q: &Poly, root: &IsolatingInterval) -> Result<Sign> {
    let qd = dense_of(q)?;
    let mut br = root.bracket();
    Ok(engine().sign_at_root(&qd, &root.sqf_dense(), &mut br))
}

/// Multiplicity of `root` as a root of `p` (0 when it is not a root).
pub fn root_multiplicity(p: &Poly, root: &RealAlgebraic) -> Result<usize> {
    nonzero_dense(p)?;
    let mut k = 0;
    for d in p.derivatives(0)? {
        if d.is_zero() || root.sign_of(&d)? != Sign::Zero {
            break;
        }
        k += 1;
    }
    Ok(k)
}

/// Sign vector of the derivatives `P, P', ..., P^(D)` at one real root.
#[derive(Clone, Debug, PartialEq)]
pub struct ThomEncoding {
    pub polynomial: Poly,
    pub signs: Vec<Sign>,
    pub root: IsolatingInterval,
}

/// Thom encodings of the distinct real roots of `p`, in increasing order.
pub fn thom_encode_roots(p: &Poly) -> Result<Vec<ThomEncoding>> {
    let dense = nonzero_dense(p)?;
    let derivs = p.derivatives(0)?;
    let eng = engine();
    let roots = isolate_roots(p)?;
    let mut out = Vec::with_capacity(roots.len());
    for root in roots {
        let sqf = root.sqf_dense();
        let mut br = root.bracket();
        let signs = derivs
            .iter()
            .map(|d| eng.sign_at_root(&d.to_dense().expect("univariate"), &sqf, &mut br))
            .collect();
        out.push(ThomEncoding { polynomial: p.clone(), signs, root });
    }
    debug_assert!(out.iter().all(|e| e.signs.len() == dense.len()));
    Ok(out)
}

/// Sign vector over an indexed family; entry `i` is the sign of member `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignCondition {
    pub assignment: Vec<Sign>,
}

impl fmt::Display for SignCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, s) in self.assignment.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str(")")
    }
}

/// One cell of the decomposition of the line: a root, or an open interval
/// between consecutive roots (`None` for an infinite end) with a rational
/// sample inside.
#[derive(Clone, Debug, PartialEq)]
pub enum LineCell {
    Point(RealAlgebraic),
    Interval { lower: Option<RealAlgebraic>, upper: Option<RealAlgebraic>, sample: Rational },
}

impl LineCell {
    pub fn sample(&self) -> RealAlgebraic {
        match self {
            LineCell::Point(r) => r.clone(),
            LineCell::Interval { sample, .. } => RealAlgebraic::Rational(sample.clone()),
        }
    }

    pub fn is_point(&self) -> bool {
        matches!(self, LineCell::Point(_))
    }
}

/// Splits the line at the real roots of a square-free polynomial: returns
/// root brackets pairwise strictly separated, plus one rational sample per
/// gap (`roots.len() + 1` of them).
pub(crate) fn separate_roots(sqf: &[Rational]) -> (Vec<Bracket>, Vec<Rational>) {
    let eng = engine();
    let mut brs = eng.isolate(sqf);
    for br in brs.iter_mut() {
        pin_rational(sqf, br);
    }
    eng.separate(sqf, &mut brs);
    let samples = engine::gap_samples(&brs);
    (brs, samples)
}

/// Every cell of the decomposition of the line by the roots of the family,
/// left to right, with the sign condition realized on it.
pub fn realizable_sign_conditions_1d(family: &[Poly]) -> Result<Vec<(SignCondition, LineCell)>> {
    let dense: Vec<Vec<Rational>> = family.iter().map(nonzero_dense).collect::<Result<_>>()?;
    let eng = engine();
    let mut product = vec![Rational::one()];
    for d in &dense {
        if d.len() > 1 {
            product = eng.mul_poly(&product, &eng.square_free(d));
        }
    }
    let sqf = eng.square_free(&product);
    let (brs, samples) = separate_roots(&sqf);
    let conds: Vec<SignCondition> = brs
        .iter()
        .map(|b| {
            let mut br = b.clone();
            SignCondition { assignment: dense.iter().map(|d| eng.sign_at_root(d, &sqf, &mut br)).collect() }
        })
        .collect();
    // Irrational roots are described by the smallest member vanishing there.
    let roots: Vec<RealAlgebraic> = brs
        .iter()
        .zip(&conds)
        .map(|(b, c)| {
            if b.is_point() {
                return RealAlgebraic::Rational(b.low.clone());
            }
            let member = c
                .assignment
                .iter()
                .zip(&dense)
                .filter(|(s, _)| **s == Sign::Zero)
                .map(|(_, d)| d)
                .min_by_key(|d| d.len())
                .expect("every root belongs to a member");
            RealAlgebraic::Root(IsolatingInterval::from_parts(&eng.square_free(member), b.low.clone(), b.high.clone()))
        })
        .collect();
    let signs_at = |x: &Rational| SignCondition { assignment: dense.iter().map(|d| eng.sign_at(d, x)).collect() };
    let mut out = Vec::with_capacity(2 * roots.len() + 1);
    for (i, s) in samples.iter().enumerate() {
        let cell = LineCell::Interval {
            lower: i.checked_sub(1).map(|j| roots[j].clone()),
            upper: roots.get(i).cloned(),
            sample: s.clone(),
        };
        out.push((signs_at(s), cell));
        if let Some(r) = roots.get(i) {
            out.push((conds[i].clone(), LineCell::Point(r.clone())));
        }
    }
    Ok(out)
}
