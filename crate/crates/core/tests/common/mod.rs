#![allow(dead_code)]

use proptest::prelude::*;
use semialg::{Poly, Rational};

pub fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

pub fn qq(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn small_rational() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=4).prop_map(|(n, d)| qq(n, d))
}

pub fn nonzero_small_int() -> impl Strategy<Value = i64> {
    prop_oneof![-5i64..=-1, 1i64..=5]
}

/// Dense univariate polynomial with small integer coefficients and a
/// nonzero leading coefficient.
pub fn univariate(max_deg: usize) -> impl Strategy<Value = Poly> {
    (1..=max_deg)
        .prop_flat_map(|deg| (proptest::collection::vec(-6i64..=6, deg), nonzero_small_int()))
        .prop_map(|(low, lead)| {
            let mut c: Vec<Rational> = low.into_iter().map(q).collect();
            c.push(q(lead));
            Poly::from_dense(&c)
        })
}

/// Random sparse polynomial in `arity` variables of total degree at most
/// `max_deg`.
pub fn sparse(arity: usize, max_deg: u32, max_terms: usize) -> impl Strategy<Value = Poly> {
    proptest::collection::vec((proptest::collection::vec(0..=max_deg, arity), small_rational()), 0..=max_terms)
        .prop_map(move |terms| {
            let terms = terms.into_iter().filter(|(e, _)| e.iter().sum::<u32>() <= max_deg);
            Poly::from_terms(arity, terms).unwrap()
        })
}

pub fn dense_of(p: &Poly) -> Vec<Rational> {
    p.to_dense().unwrap()
}
