//! Resultants, discriminants and gcds with respect to the last variable.
//!
//! A polynomial in `n` variables is viewed as a polynomial in `X_n` whose
//! coefficients live in the ring of the first `n - 1` variables. Resultants
//! use the subresultant remainder sequence, so every intermediate division
//! is exact and coefficient growth stays polynomial.

use super::univariate::{poly_div_rem, poly_gcd};
use super::{Degree, Polynomial};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

type Coeffs<C> = Vec<Polynomial<C>>;

fn trim<C: Scalar>(v: &mut Coeffs<C>) {
    while v.last().is_some_and(Polynomial::is_zero) {
        v.pop();
    }
}

fn deg<C: Scalar>(v: &Coeffs<C>) -> Option<usize> {
    v.len().checked_sub(1)
}

/// Pseudo-remainder `lc(b)^(deg a - deg b + 1) * a mod b`.
fn prem<C: Scalar>(a: &Coeffs<C>, b: &Coeffs<C>) -> Coeffs<C> {
    let db = deg(b).expect("nonzero divisor");
    let lb = b[db].clone();
    let mut r = a.clone();
    trim(&mut r);
    let Some(da) = deg(&r) else { return r };
    if da < db {
        return r;
    }
    let mut e = da - db + 1;
    while let Some(dr) = deg(&r) {
        if dr < db {
            break;
        }
        let k = dr - db;
        let lr = r[dr].clone();
        for c in r.iter_mut() {
            *c = &*c * &lb;
        }
        for (i, bc) in b.iter().enumerate() {
            r[k + i] = &r[k + i] - &(&lr * bc);
        }
        trim(&mut r);
        e -= 1;
    }
    if e > 0 {
        let f = lb.pow(e as u32);
        for c in r.iter_mut() {
            *c = &*c * &f;
        }
    }
    r
}

fn div_all<C: Scalar>(v: &Coeffs<C>, d: &Polynomial<C>) -> Coeffs<C> {
    v.iter()
        .map(|c| c.exact_div(d).expect("subresultant division is exact"))
        .collect()
}

/// Resultant in the last variable; accepts inputs of degree zero in it.
pub(crate) fn resultant_last_unchecked<C: Scalar>(f: &Polynomial<C>, g: &Polynomial<C>) -> Polynomial<C> {
    let base = f.arity() - 1;
    let mut a = f.coeffs_in_last();
    let mut b = g.coeffs_in_last();
    if a.is_empty() || b.is_empty() {
        return Polynomial::zero(base);
    }
    let mut negate = false;
    if deg(&a) < deg(&b) {
        std::mem::swap(&mut a, &mut b);
        if deg(&a).unwrap() % 2 == 1 && deg(&b).unwrap() % 2 == 1 {
            negate = true;
        }
    }
    if deg(&b) == Some(0) {
        let r = b[0].pow(deg(&a).unwrap() as u32);
        return if negate { -r } else { r };
    }
    let mut g = Polynomial::one(base);
    let mut h = Polynomial::one(base);
    loop {
        let da = deg(&a).unwrap();
        let db = deg(&b).unwrap();
        let delta = (da - db) as u32;
        if da % 2 == 1 && db % 2 == 1 {
            negate = !negate;
        }
        let r = prem(&a, &b);
        if r.is_empty() {
            return Polynomial::zero(base);
        }
        a = b;
        b = div_all(&r, &(&g * &h.pow(delta)));
        g = a.last().unwrap().clone();
        if delta > 0 {
            h = g.pow(delta).exact_div(&h.pow(delta - 1)).expect("exact");
        }
        if deg(&b) == Some(0) {
            let da = deg(&a).unwrap() as u32;
            let res = b[0].pow(da).exact_div(&h.pow(da - 1)).expect("exact");
            return if negate { -res } else { res };
        }
    }
}

/// Resultant of `f` and `g` with respect to their last variable.
pub fn resultant_wrt_last<C: Scalar>(f: &Polynomial<C>, g: &Polynomial<C>) -> Result<Polynomial<C>> {
    if f.arity() != g.arity() {
        return Err(Error::ArityMismatch { expected: f.arity(), got: g.arity() });
    }
    if f.arity() == 0 {
        return Err(Error::InvalidInput("resultant needs at least one variable".into()));
    }
    let last = f.arity() - 1;
    for p in [f, g] {
        if !matches!(p.degree_in(last), Degree::Finite(d) if d > 0) {
            return Err(Error::DegreeZeroInLastVariable);
        }
    }
    Ok(resultant_last_unchecked(f, g))
}

/// Discriminant in the last variable:
/// `(-1)^(m(m-1)/2) / lc(f) * res(f, df/dX_last)`, with `m` the degree.
pub fn discriminant_wrt_last<C: Scalar>(f: &Polynomial<C>) -> Result<Polynomial<C>> {
    if f.arity() == 0 {
        return Err(Error::InvalidInput("discriminant needs at least one variable".into()));
    }
    let last = f.arity() - 1;
    let m = match f.degree_in(last) {
        Degree::Finite(d) if d > 0 => d,
        _ => return Err(Error::DegreeZeroInLastVariable),
    };
    let base = f.arity() - 1;
    if m == 1 {
        return Ok(Polynomial::one(base));
    }
    let df = f.derivative(last)?;
    let res = resultant_last_unchecked(f, &df);
    let lc = f.coeffs_in_last().pop().unwrap();
    let d = res.exact_div(&lc).expect("leading coefficient divides res(f, f')");
    Ok(if (m * (m - 1) / 2) % 2 == 1 { -d } else { d })
}

fn content_univariate<C: Scalar>(v: &Coeffs<C>) -> Vec<C> {
    let mut g: Vec<C> = Vec::new();
    for c in v {
        g = poly_gcd(&g, &c.to_dense().expect("univariate coefficients"));
        if g.len() == 1 {
            break;
        }
    }
    g
}

fn primitive<C: Scalar>(v: &Coeffs<C>) -> (Vec<C>, Coeffs<C>) {
    let cont = content_univariate(v);
    if cont.len() <= 1 {
        return (cont, v.clone());
    }
    let pp = v
        .iter()
        .map(|c| Polynomial::from_dense(&poly_div_rem(&c.to_dense().unwrap(), &cont).0))
        .collect();
    (cont, pp)
}

/// Greatest common divisor of two bivariate polynomials (up to a constant
/// factor), computed with the primitive remainder sequence in the last
/// variable and univariate contents in the first.
pub(crate) fn gcd_wrt_last<C: Scalar>(f: &Polynomial<C>, g: &Polynomial<C>) -> Polynomial<C> {
    assert_eq!(f.arity(), 2, "gcd_wrt_last is implemented for bivariate input");
    if f.is_zero() {
        return g.clone();
    }
    if g.is_zero() {
        return f.clone();
    }
    let (ca, mut a) = primitive(&f.coeffs_in_last());
    let (cb, mut b) = primitive(&g.coeffs_in_last());
    let c = poly_gcd(&ca, &cb);
    if deg(&a) < deg(&b) {
        std::mem::swap(&mut a, &mut b);
    }
    while deg(&b).is_some_and(|d| d > 0) {
        let r = prem(&a, &b);
        a = b;
        if r.is_empty() {
            b = Vec::new();
            break;
        }
        b = primitive(&r).1;
    }
    let c_poly = Polynomial::from_dense(&c).extend_arity(2);
    if !b.is_empty() {
        // Nonzero constant remainder in the last variable: coprime parts.
        return c_poly;
    }
    let pp = Polynomial::from_coeffs_in_last(2, &primitive(&a).1);
    &c_poly * &pp
}

/// Sylvester matrix of `f` and `g` in the last variable, entries being
/// polynomials in the remaining variables.
pub fn sylvester_matrix<C: Scalar>(f: &Polynomial<C>, g: &Polynomial<C>) -> Vec<Vec<Polynomial<C>>> {
    let a = f.coeffs_in_last();
    let b = g.coeffs_in_last();
    let base = f.arity() - 1;
    let (m, n) = (a.len() - 1, b.len() - 1);
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![Polynomial::zero(base); size];
        for (j, c) in a.iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![Polynomial::zero(base); size];
        for (j, c) in b.iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    rows
}
