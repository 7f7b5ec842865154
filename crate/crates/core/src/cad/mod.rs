//! Cylindrical algebraic decomposition of the plane adapted to a family of
//! bivariate polynomials.
//!
//! The base line is cut by the roots of the projection; above every base
//! cell the fiber is cut by the roots in `y` of the family members, giving
//! a stack of alternating sectors (even index) and sections (odd index).
//! Fibers above irrational base points are computed over `Q(alpha)`.

mod growth;

use std::cmp::Ordering;
use std::fmt;

use num_traits::Zero;
use rand::Rng;

pub use growth::{default_growth_samples, growth_check, GrowthReport, GROWTH_TOLERANCE};

use crate::error::{Error, Result};
use crate::poly::{discriminant_wrt_last, gcd_wrt_last, resultant_wrt_last, Degree};
use crate::realroots::engine::{gap_samples, simplest_between, Bracket, Domain, Engine};
use crate::realroots::{pin_rational, realizable_sign_conditions_1d, AlgebraicPoint, LineCell, RealAlgebraic};
use crate::scalar::{rational_string, rational_to_f64, Sign};
use crate::{Poly, Rational};

fn check_family(family: &[Poly]) -> Result<()> {
    for p in family {
        if p.arity() != 2 {
            return Err(Error::ArityMismatch { expected: 2, got: p.arity() });
        }
        if p.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
    }
    Ok(())
}

fn univariate_content(coeffs: &[Poly]) -> Vec<Rational> {
    let mut g: Vec<Rational> = Vec::new();
    for c in coeffs {
        g = crate::poly::poly_gcd(&g, &c.to_dense().expect("univariate coefficient"));
    }
    g
}

/// Splits `f` into its content in `y` (a polynomial in `x`) and the
/// square-free part of its primitive part.
fn content_and_sqf(f: &Poly) -> (Poly, Poly) {
    let coeffs = f.coeffs_in_last();
    let cont = Poly::from_dense(&univariate_content(&coeffs));
    let prim = f.exact_div(&cont.extend_arity(2)).expect("content divides");
    if prim.degree_in(1) == Degree::Finite(0) {
        return (cont, prim);
    }
    let d = prim.derivative(1).expect("bivariate");
    let g = gcd_wrt_last(&prim, &d);
    let sqf = if g.degree_in(1).finite().unwrap_or(0) > 0 { prim.exact_div(&g).expect("gcd divides") } else { prim };
    (cont, sqf)
}

fn push_normalized(out: &mut Vec<Poly>, p: Poly) {
    if p.is_constant() {
        return;
    }
    let p = p.primitive_part();
    if !out.contains(&p) {
        out.push(p);
    }
}

/// Projection of a bivariate family onto the `x` line: contents,
/// leading and trailing coefficients and discriminants in `y`, and pairwise
/// resultants, normalized to primitive form with constants removed.
pub fn project2d(family: &[Poly]) -> Result<Vec<Poly>> {
    check_family(family)?;
    let mut out = Vec::new();
    let mut parts: Vec<Poly> = Vec::new();
    for f in family {
        let (cont, g) = content_and_sqf(f);
        push_normalized(&mut out, cont);
        if g.degree_in(1).finite().unwrap_or(0) == 0 {
            continue;
        }
        let coeffs = g.coeffs_in_last();
        push_normalized(&mut out, coeffs.last().unwrap().clone());
        if !coeffs[0].is_zero() {
            push_normalized(&mut out, coeffs[0].clone());
        }
        push_normalized(&mut out, discriminant_wrt_last(&g)?);
        parts.push(g);
    }
    let mut degenerate = false;
    for i in 0..parts.len() {
        for j in i + 1..parts.len() {
            let r = resultant_wrt_last(&parts[i], &parts[j])?;
            if r.is_zero() {
                degenerate = true;
            } else {
                push_normalized(&mut out, r);
            }
        }
    }
    if degenerate {
        // Members share a factor; the discriminant of the square-free
        // product still catches every crossing.
        let prod = parts.iter().fold(Poly::one(2), |a, b| &a * b);
        let (_, sqf) = content_and_sqf(&prod);
        if sqf.degree_in(1).finite().unwrap_or(0) >= 2 {
            push_normalized(&mut out, discriminant_wrt_last(&sqf)?);
        }
        push_normalized(&mut out, sqf.coeffs_in_last().pop().unwrap());
    }
    Ok(out)
}

/// `y`-coordinate of a cell sample: rational, or the root of the fiber
/// polynomial `fiber(x0, y)` inside `(low, high)`.
#[derive(Clone, Debug, PartialEq)]
pub enum YSample {
    Rational(Rational),
    Root { fiber: Poly, low: Rational, high: Rational, approx: f64 },
}

impl YSample {
    pub fn to_f64(&self) -> f64 {
        match self {
            YSample::Rational(r) => rational_to_f64(r),
            YSample::Root { approx, .. } => *approx,
        }
    }
}

impl fmt::Display for YSample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            YSample::Rational(r) => f.write_str(&rational_string(r)),
            YSample::Root { fiber, low, high, .. } => {
                write!(f, "root of {} in ({}, {})", fiber, rational_string(low), rational_string(high))
            }
        }
    }
}

/// One cell, identified by its base cell and its index in the stack.
#[derive(Clone, Debug, PartialEq)]
pub struct Cell {
    pub base: usize,
    pub index: usize,
    pub x: RealAlgebraic,
    pub y: YSample,
    /// Sign of each family member on the cell.
    pub signs: Vec<Sign>,
}

impl Cell {
    pub fn is_section(&self) -> bool {
        self.index % 2 == 1
    }

    /// Cell dimension: 0 (point), 1 (arc or vertical segment) or 2.
    pub fn dimension(&self, base_is_point: bool) -> usize {
        usize::from(!base_is_point) + usize::from(!self.is_section())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Stack {
    pub base: LineCell,
    pub cells: Vec<Cell>,
}

/// Roots in `y` of the family above a fixed `x`.
pub(crate) struct Fiber {
    point: AlgebraicPoint,
    members: Vec<Option<Vec<Vec<Rational>>>>,
    sqf: Vec<Vec<Rational>>,
    roots: Vec<Bracket>,
}

impl Fiber {
    fn new(family: &[Poly], x: &RealAlgebraic) -> Fiber {
        let point = AlgebraicPoint::new(x);
        let eng = Engine::new(&point);
        let members: Vec<Option<Vec<Vec<Rational>>>> = family
            .iter()
            .map(|p| {
                let v = fiber_of(&point, p);
                (!v.is_empty()).then_some(v)
            })
            .collect();
        let mut product = vec![point.one()];
        for m in members.iter().flatten() {
            if m.len() > 1 {
                product = eng.mul_poly(&product, &eng.square_free(m));
            }
        }
        let sqf = eng.square_free(&product);
        let mut roots = eng.isolate(&sqf);
        if point.as_rational().is_some() {
            let rsqf: Vec<Rational> = sqf.iter().map(|e| point.elem_value(e).expect("rational point")).collect();
            for br in roots.iter_mut() {
                pin_rational(&rsqf, br);
            }
        }
        eng.separate(&sqf, &mut roots);
        Fiber { point, members, sqf, roots }
    }

    fn signs_at_root(&self, k: usize) -> Vec<Sign> {
        let eng = Engine::new(&self.point);
        let mut br = self.roots[k].clone();
        self.members
            .iter()
            .map(|m| m.as_ref().map_or(Sign::Zero, |m| eng.sign_at_root(m, &self.sqf, &mut br)))
            .collect()
    }

    fn signs_at(&self, y: &Rational) -> Vec<Sign> {
        let eng = Engine::new(&self.point);
        self.members.iter().map(|m| m.as_ref().map_or(Sign::Zero, |m| eng.sign_at(m, y))).collect()
    }

    /// Stack index of the point `(x, y)` for rational `y`.
    fn index_of(&self, y: &Rational) -> usize {
        let eng = Engine::new(&self.point);
        for (k, br) in self.roots.iter().enumerate() {
            match eng.compare_root(&self.sqf, &mut br.clone(), y) {
                Ordering::Greater => return 2 * k,
                Ordering::Equal => return 2 * k + 1,
                Ordering::Less => {}
            }
        }
        2 * self.roots.len()
    }

    /// Sign of an arbitrary bivariate `p` at the `k`-th root of the fiber.
    fn sign_of_at_root(&self, p: &Poly, k: usize) -> Sign {
        let m = fiber_of(&self.point, p);
        let mut br = self.roots[k].clone();
        Engine::new(&self.point).sign_at_root(&m, &self.sqf, &mut br)
    }

    /// The `k`-th root to roughly 1e-13 relative accuracy.
    fn root_f64(&self, k: usize) -> f64 {
        let eng = Engine::new(&self.point);
        let mut br = self.roots[k].clone();
        let scale = rational_to_f64(&br.low).abs().max(rational_to_f64(&br.high).abs()).max(1e-300);
        let tol = crate::scalar::f64_to_rational(scale * 1e-14).unwrap_or_else(Rational::zero);
        eng.refine_to_width(&self.sqf, &mut br, &tol);
        rational_to_f64(&((&br.low + &br.high) / Rational::from_integer(2.into())))
    }

    fn fiber_poly(&self) -> Poly {
        let coeffs: Vec<Poly> = self.sqf.iter().map(|e| Poly::from_dense(e)).collect();
        Poly::from_coeffs_in_last(2, &coeffs).primitive_part()
    }

    fn sector_bounds(&self, index: usize) -> (Option<Rational>, Option<Rational>) {
        let k = index / 2;
        let lo = k.checked_sub(1).map(|j| self.roots[j].high.clone());
        let hi = self.roots.get(k).map(|b| b.low.clone());
        (lo, hi)
    }
}

/// `p(alpha, y)` as a dense polynomial in `y` over `Q(alpha)`.
fn fiber_of(point: &AlgebraicPoint, p: &Poly) -> Vec<Vec<Rational>> {
    let mut v: Vec<Vec<Rational>> =
        p.coeffs_in_last().iter().map(|c| point.elem(c.to_dense().expect("univariate coefficient"))).collect();
    Engine::new(point).trim(&mut v);
    v
}

/// Point of a cell: `x` algebraic, `y` rational or a numbered fiber root.
#[derive(Clone, Debug, PartialEq)]
pub enum CellY {
    Rational(Rational),
    Section(usize),
}

/// A cylindrical decomposition of the plane adapted to `family`.
#[derive(Clone, Debug, PartialEq)]
pub struct CylDecomp {
    pub family: Vec<Poly>,
    pub projection: Vec<Poly>,
    pub stacks: Vec<Stack>,
}

/// Builds the decomposition: base cells from the projection's roots, and
/// over each base sample the sections and sectors of the family's roots.
pub fn cad2d(family: &[Poly]) -> Result<CylDecomp> {
    let projection = project2d(family)?;
    let base = realizable_sign_conditions_1d(&projection)?;
    let mut stacks = Vec::with_capacity(base.len());
    for (bi, (_, cell)) in base.into_iter().enumerate() {
        let x = cell.sample();
        let fiber = Fiber::new(family, &x);
        let samples = gap_samples(&fiber.roots);
        let fpoly = fiber.fiber_poly();
        let mut cells = Vec::with_capacity(2 * fiber.roots.len() + 1);
        for (k, s) in samples.iter().enumerate() {
            cells.push(Cell { base: bi, index: 2 * k, x: x.clone(), y: YSample::Rational(s.clone()), signs: fiber.signs_at(s) });
            if let Some(br) = fiber.roots.get(k) {
                let y = if br.is_point() {
                    YSample::Rational(br.low.clone())
                } else {
                    YSample::Root { fiber: fpoly.clone(), low: br.low.clone(), high: br.high.clone(), approx: fiber.root_f64(k) }
                };
                cells.push(Cell { base: bi, index: 2 * k + 1, x: x.clone(), y, signs: fiber.signs_at_root(k) });
            }
        }
        stacks.push(Stack { base: cell, cells });
    }
    Ok(CylDecomp { family: family.to_vec(), projection, stacks })
}

impl CylDecomp {
    pub fn cells(&self) -> impl Iterator<Item = &Cell> {
        self.stacks.iter().flat_map(|s| s.cells.iter())
    }

    pub fn num_cells(&self) -> usize {
        self.stacks.iter().map(|s| s.cells.len()).sum()
    }

    pub fn cell(&self, base: usize, index: usize) -> Option<&Cell> {
        self.stacks.get(base)?.cells.get(index)
    }

    fn base_index_of(&self, x: &Rational) -> usize {
        self.stacks
            .iter()
            .position(|s| line_cell_contains(&s.base, x))
            .expect("base cells partition the line")
    }

    fn fiber_at(&self, x: &RealAlgebraic) -> Fiber {
        Fiber::new(&self.family, x)
    }

    /// The cell containing the rational point `(x, y)`.
    pub fn locate(&self, x: &Rational, y: &Rational) -> (usize, usize) {
        let b = self.base_index_of(x);
        let fiber = self.fiber_at(&RealAlgebraic::Rational(x.clone()));
        (b, fiber.index_of(y))
    }

    /// Membership predicate of a single cell for a rational point.
    pub fn cell_contains(&self, base: usize, index: usize, x: &Rational, y: &Rational) -> bool {
        let Some(stack) = self.stacks.get(base) else { return false };
        if !line_cell_contains(&stack.base, x) {
            return false;
        }
        let fiber = self.fiber_at(&RealAlgebraic::Rational(x.clone()));
        fiber.roots.len() * 2 + 1 == stack.cells.len() && fiber.index_of(y) == index
    }

    /// Family signs at a point given in cell coordinates.
    pub fn signs_at(&self, x: &RealAlgebraic, y: &CellY) -> Vec<Sign> {
        let fiber = self.fiber_at(x);
        match y {
            CellY::Rational(r) => fiber.signs_at(r),
            CellY::Section(k) => fiber.signs_at_root(*k),
        }
    }

    /// Random point of a cell drawn from its own parametrization: `x` in the
    /// base cell, then `y` in the matching sector or on the matching
    /// section above that `x`. Unbounded sides are truncated at distance
    /// `spread` from the nearest bound.
    pub fn random_point<R: Rng>(&self, base: usize, index: usize, spread: u32, rng: &mut R) -> (RealAlgebraic, CellY) {
        let stack = &self.stacks[base];
        let x = match &stack.base {
            LineCell::Point(r) => r.clone(),
            LineCell::Interval { lower, upper, sample } => {
                let lo = lower.as_ref().map(rational_below);
                let hi = upper.as_ref().map(rational_above);
                RealAlgebraic::Rational(random_between(lo.as_ref(), hi.as_ref(), sample, spread, rng, lower, upper))
            }
        };
        if index % 2 == 1 {
            return (x, CellY::Section(index / 2));
        }
        let fiber = self.fiber_at(&x);
        let (lo, hi) = fiber.sector_bounds(index);
        let anchor = gap_samples(&fiber.roots)[index / 2].clone();
        let y = (0..64)
            .map(|_| random_rational_in(lo.as_ref(), hi.as_ref(), &anchor, spread, rng))
            .find(|t| fiber.index_of(t) == index)
            .unwrap_or(anchor);
        (x, CellY::Rational(y))
    }
}

fn line_cell_contains(cell: &LineCell, x: &Rational) -> bool {
    match cell {
        LineCell::Point(r) => r.cmp_rational(x) == Ordering::Equal,
        LineCell::Interval { lower, upper, .. } => {
            lower.as_ref().is_none_or(|l| l.cmp_rational(x) == Ordering::Less)
                && upper.as_ref().is_none_or(|u| u.cmp_rational(x) == Ordering::Greater)
        }
    }
}

fn rational_below(a: &RealAlgebraic) -> Rational {
    match a {
        RealAlgebraic::Rational(r) => r.clone(),
        RealAlgebraic::Root(iv) => iv.low.clone(),
    }
}

fn rational_above(a: &RealAlgebraic) -> Rational {
    match a {
        RealAlgebraic::Rational(r) => r.clone(),
        RealAlgebraic::Root(iv) => iv.high.clone(),
    }
}

fn random_rational_in<R: Rng>(lo: Option<&Rational>, hi: Option<&Rational>, anchor: &Rational, spread: u32, rng: &mut R) -> Rational {
    let s = Rational::from_integer(spread.into());
    let lo = lo.cloned().unwrap_or_else(|| hi.unwrap_or(anchor) - &s);
    let hi = hi.cloned().unwrap_or_else(|| &lo + &s);
    let den: u32 = 1 << 20;
    let k: u32 = rng.gen_range(1..den);
    &lo + (&hi - &lo) * Rational::new(k.into(), den.into())
}

/// Random rational strictly inside an open base interval whose irrational
/// ends are only known through brackets.
fn random_between<R: Rng>(
    lo: Option<&Rational>,
    hi: Option<&Rational>,
    sample: &Rational,
    spread: u32,
    rng: &mut R,
    lower: &Option<RealAlgebraic>,
    upper: &Option<RealAlgebraic>,
) -> Rational {
    for _ in 0..64 {
        let a = random_rational_in(lo, hi, sample, spread, rng);
        let b = random_rational_in(lo, hi, sample, spread, rng);
        // Low-height points keep the fibers above them cheap.
        let t = if a < b { simplest_between(&a, &b) } else if b < a { simplest_between(&b, &a) } else { a };
        let above = lower.as_ref().is_none_or(|l| l.cmp_rational(&t) == Ordering::Less);
        let below = upper.as_ref().is_none_or(|u| u.cmp_rational(&t) == Ordering::Greater);
        if above && below {
            return t;
        }
    }
    sample.clone()
}

impl fmt::Display for CylDecomp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.stacks {
            for c in &s.cells {
                let signs: Vec<String> = c.signs.iter().map(Sign::to_string).collect();
                writeln!(f, "({}, {}) x = {}, y = {}: [{}]", c.base, c.index, c.x, c.y, signs.join(" "))?;
            }
        }
        Ok(())
    }
}
