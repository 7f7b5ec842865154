use crate::error::{Error, Result};
use crate::{Poly, Rational};

/// Lower convex hull of the support of `p(eps, y)`, as points
/// `(y exponent, eps exponent)` sorted by the `y` exponent.
pub fn newton_hull(p: &Poly) -> Result<Vec<(u32, u32)>> {
    if p.arity() != 2 {
        return Err(Error::ArityMismatch { expected: 2, got: p.arity() });
    }
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut pts: Vec<(u32, u32)> = p.terms().map(|(m, _)| (m.0[1], m.0[0])).collect();
    pts.sort();
    // Lowest eps exponent for each y exponent.
    pts.dedup_by_key(|q| q.0);
    let cross = |o: (u32, u32), a: (u32, u32), b: (u32, u32)| {
        let (ox, oy, ax, ay, bx, by) = (o.0 as i64, o.1 as i64, a.0 as i64, a.1 as i64, b.0 as i64, b.1 as i64);
        (ax - ox) * (by - oy) - (ay - oy) * (bx - ox)
    };
    let mut hull: Vec<(u32, u32)> = Vec::new();
    for q in pts {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], q) <= 0 {
            hull.pop();
        }
        hull.push(q);
    }
    Ok(hull)
}

/// First Puiseux exponent `gamma_1` of the branches `y(eps) -> 0`: the
/// smallest `-slope` among the descending edges of the Newton polygon.
pub fn newton_min_exponent(p: &Poly) -> Result<Rational> {
    let hull = newton_hull(p)?;
    if p.terms().all(|(m, _)| m.0[0] > 0) {
        return Err(Error::InvalidInput("p(0, y) vanishes identically".into()));
    }
    hull.windows(2)
        .filter(|w| w[1].1 < w[0].1)
        .map(|w| Rational::new((w[0].1 - w[1].1).into(), (w[1].0 - w[0].0).into()))
        .min()
        .ok_or_else(|| Error::InvalidInput("no branch vanishes at eps = 0".into()))
}
