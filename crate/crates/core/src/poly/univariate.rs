//! Dense univariate arithmetic over a field. Coefficient vectors are stored
//! constant term first and kept trimmed (no trailing zeros).

use super::Polynomial;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub fn trim_dense<C: Scalar>(v: &mut Vec<C>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

pub fn dense_eval<C: Scalar>(p: &[C], x: &C) -> C {
    p.iter().rev().fold(C::zero(), |acc, c| acc * x.clone() + c.clone())
}

pub fn derivative_dense<C: Scalar>(p: &[C]) -> Vec<C> {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c.clone() * C::from_usize(i).expect("degree fits scalar"))
        .collect()
}

/// Euclidean division `a = q*b + r` with `deg r < deg b`.
pub fn poly_div_rem<C: Scalar>(a: &[C], b: &[C]) -> (Vec<C>, Vec<C>) {
    assert!(!b.is_empty(), "division by the zero polynomial");
    let mut r: Vec<C> = a.to_vec();
    trim_dense(&mut r);
    let db = b.len() - 1;
    let lb = b[db].clone();
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![C::zero(); r.len() - db];
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let c = r.last().unwrap().clone() / lb.clone();
        for (i, bc) in b.iter().enumerate() {
            r[k + i] = r[k + i].clone() - c.clone() * bc.clone();
        }
        q[k] = c;
        r.pop();
        trim_dense(&mut r);
    }
    (q, r)
}

pub fn dense_rem<C: Scalar>(a: &[C], b: &[C]) -> Vec<C> {
    poly_div_rem(a, b).1
}

/// Monic gcd; the gcd of two zero polynomials is zero.
pub fn poly_gcd<C: Scalar>(a: &[C], b: &[C]) -> Vec<C> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim_dense(&mut a);
    trim_dense(&mut b);
    while !b.is_empty() {
        let r = dense_rem(&a, &b);
        a = b;
        b = r;
    }
    if let Some(l) = a.last().cloned() {
        for c in a.iter_mut() {
            *c = c.clone() / l.clone();
        }
    }
    a
}

/// `p / gcd(p, p')`, which has the same distinct roots as `p`, each simple.
pub fn square_free_part<C: Scalar>(p: &[C]) -> Vec<C> {
    let g = poly_gcd(p, &derivative_dense(p));
    if g.len() <= 1 {
        let mut v = p.to_vec();
        trim_dense(&mut v);
        return v;
    }
    poly_div_rem(p, &g).0
}

/// Signed remainder (Sturm) sequence `P, P', -rem(P, P'), ...`, ending at
/// the last nonzero remainder.
pub fn sturm_sequence<C: Scalar>(p: &Polynomial<C>) -> Result<Vec<Polynomial<C>>> {
    let dense = p.to_dense()?;
    if dense.is_empty() {
        return Err(Error::ZeroPolynomial);
    }
    let mut seq = vec![dense.clone()];
    let d = derivative_dense(&dense);
    let mut d = d;
    trim_dense(&mut d);
    if !d.is_empty() {
        seq.push(d);
        loop {
            let n = seq.len();
            let r = dense_rem(&seq[n - 2], &seq[n - 1]);
            if r.is_empty() {
                break;
            }
            seq.push(r.into_iter().map(|c| -c).collect());
        }
    }
    Ok(seq.iter().map(|v| Polynomial::from_dense(v)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;
    use crate::Rational;

    fn px(t: &str) -> Polynomial<Rational> {
        parse_poly(t, &["x"]).unwrap()
    }

    #[test]
    fn sturm_examples() {
        assert_eq!(sturm_sequence(&px("x")).unwrap(), vec![px("x"), px("1")]);
        assert_eq!(sturm_sequence(&px("x^2 - 2")).unwrap(), vec![px("x^2 - 2"), px("2*x"), px("2")]);
        assert_eq!(sturm_sequence(&px("x^2 + 1")).unwrap(), vec![px("x^2 + 1"), px("2*x"), px("-1")]);
        assert_eq!(sturm_sequence(&px("0")), Err(Error::ZeroPolynomial));
        assert_eq!(sturm_sequence(&parse_poly("x*y", &["x", "y"]).unwrap()), Err(Error::NotUnivariate(2)));
    }

    #[test]
    fn sturm_ends_at_gcd_for_repeated_roots() {
        let seq = sturm_sequence(&px("(x - 1)^2*(x + 2)")).unwrap();
        let last = seq.last().unwrap().to_dense().unwrap();
        let monic: Vec<Rational> = last.iter().map(|c| c / last.last().unwrap()).collect();
        assert_eq!(Polynomial::from_dense(&monic), px("x - 1"));
    }

    #[test]
    fn square_free_and_gcd() {
        let p = px("(x - 1)^3*(x + 1)").to_dense().unwrap();
        assert_eq!(Polynomial::from_dense(&square_free_part(&p)), px("x^2 - 1"));
        let g = poly_gcd(&px("x^2 - 1").to_dense().unwrap(), &px("x^2 + 2*x + 1").to_dense().unwrap());
        assert_eq!(Polynomial::from_dense(&g), px("x + 1"));
    }

    #[test]
    fn works_over_floats() {
        let p: Polynomial<f64> = Polynomial::from_dense(&[-2.0, 0.0, 1.0]);
        let seq = sturm_sequence(&p).unwrap();
        assert_eq!(seq.len(), 3);
        assert_eq!(seq[2].constant_value(), Some(2.0));
    }
}
