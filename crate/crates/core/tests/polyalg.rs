mod common;

use common::*;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use semialg::poly::{resultant_wrt_last, sturm_sequence};
use semialg::realroots::isolate_roots;
use semialg::{parse_poly, Poly, Rational};

const VARS: [&str; 3] = ["x", "y", "z"];

/// Sign changes of the sequence at -inf or +inf, read off the leading terms.
fn variations_at_infinity(seq: &[Poly], positive: bool) -> usize {
    let signs: Vec<bool> = seq
        .iter()
        .map(|p| {
            let c = dense_of(p);
            let lead_pos = c.last().unwrap().is_positive();
            let odd = (c.len() - 1) % 2 == 1;
            if positive || !odd {
                lead_pos
            } else {
                !lead_pos
            }
        })
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// `lead * prod (x - r_i)^{m_i} * (x^2 + a)^k`: its distinct real roots are
/// exactly the distinct `r_i`.
fn with_known_roots() -> impl Strategy<Value = (Poly, usize)> {
    (
        proptest::collection::vec((-6i64..=6, 1i64..=3, 1u32..=2), 0..=4),
        1i64..=5,
        0u32..=1,
        nonzero_small_int(),
    )
        .prop_filter_map("degree at most 6 and positive", |(roots, a, k, lead)| {
            let x = Poly::var(1, 0).unwrap();
            let mut p = Poly::constant(1, q(lead));
            let mut distinct: Vec<Rational> = Vec::new();
            for (n, d, m) in roots {
                let r = qq(n, d);
                p = &p * &(&x - &Poly::constant(1, r.clone())).pow(m);
                if !distinct.contains(&r) {
                    distinct.push(r);
                }
            }
            p = &p * &(&(&x * &x) + &Poly::constant(1, q(a))).pow(k);
            let deg = p.total_degree().finite()?;
            (1..=6).contains(&deg).then_some((p, distinct.len()))
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn print_then_parse_is_identity(arity in 1usize..=3, p in sparse(3, 5, 6)) {
        let p = Poly::from_terms(arity, p.terms().filter(|(m, _)| m.0[arity..].iter().all(|&e| e == 0)).map(|(m, c)| (m.0[..arity].to_vec(), c.clone()))).unwrap();
        let text = p.to_string_with(&VARS[..arity]);
        prop_assert_eq!(parse_poly(&text, &VARS[..arity]).unwrap(), p);
    }

    #[test]
    fn ring_laws_hold_pointwise(
        p in sparse(3, 5, 5),
        r in sparse(3, 5, 5),
        points in proptest::collection::vec(proptest::collection::vec(small_rational(), 3), 10),
    ) {
        let sum = &p + &r;
        let prod = &p * &r;
        for x in &points {
            let (a, b) = (p.eval(x).unwrap(), r.eval(x).unwrap());
            prop_assert_eq!(sum.eval(x).unwrap(), &a + &b);
            prop_assert_eq!(prod.eval(x).unwrap(), a * b);
        }
    }

    #[test]
    fn sturm_counts_distinct_real_roots((p, distinct) in with_known_roots()) {
        let seq = sturm_sequence(&p).unwrap();
        let count = variations_at_infinity(&seq, false) - variations_at_infinity(&seq, true);
        prop_assert_eq!(count, distinct);
    }
}

/// `F = (y - u(x)) (y^2 + 1)` and `G = (y - v(x)) (y^2 + 2)` share no complex
/// root in `y` except where `u(x) = v(x)`.
fn resultant_pair() -> impl Strategy<Value = (Poly, Poly, Vec<Rational>)> {
    (nonzero_small_int(), -6i64..=6, -6i64..=6, -6i64..=6, proptest::collection::vec(small_rational(), 4)).prop_map(
        |(a1, b1, a2, b2, mut probes)| {
            let u = parse_poly(&format!("{a1}*x + {b1}"), &["x", "y"]).unwrap();
            let v = parse_poly(&format!("{a2}*x + {b2}"), &["x", "y"]).unwrap();
            let y = Poly::var(2, 1).unwrap();
            let f = &(&y - &u) * &parse_poly("y^2 + 1", &["x", "y"]).unwrap();
            let g = &(&y - &v) * &parse_poly("y^2 + 2", &["x", "y"]).unwrap();
            if a1 != a2 {
                probes.push(qq(b2 - b1, a1 - a2));
            }
            (f, g, probes)
        },
    )
}

fn fiber(p: &Poly, x: &Rational) -> Poly {
    let coeffs: Vec<Rational> = p.coeffs_in_last().iter().map(|c| c.eval(std::slice::from_ref(x)).unwrap()).collect();
    Poly::from_dense(&coeffs)
}

/// Real common root of the two fibers, found by isolating the roots of one
/// and testing the other at each.
fn share_real_root(f: &Poly, g: &Poly) -> bool {
    isolate_roots(f).unwrap().into_iter().any(|r| {
        let alpha = semialg::realroots::RealAlgebraic::from_interval(r);
        alpha.sign_of(g).unwrap() == semialg::scalar::Sign::Zero
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn resultant_vanishes_exactly_over_common_roots((f, g, probes) in resultant_pair()) {
        let res = resultant_wrt_last(&f, &g).unwrap();
        for x in &probes {
            let vanishes = res.eval(std::slice::from_ref(x)).unwrap().is_zero();
            prop_assert_eq!(vanishes, share_real_root(&fiber(&f, x), &fiber(&g, x)), "x = {}", x);
        }
    }
}
