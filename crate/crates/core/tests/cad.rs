mod common;

use std::cmp::Ordering;

use common::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use semialg::cad::{cad2d, growth_check, CellY, CylDecomp};
use semialg::formulas::{atom_of, Formula, Relation};
use semialg::realroots::{isolate_roots, RealAlgebraic};
use semialg::scalar::Sign;
use semialg::{parse_poly, Poly, Rational};

const XY: [&str; 2] = ["x", "y"];

/// Distinct polynomials `u_i(x)` of degree at most 3.
fn graphs() -> impl Strategy<Value = Vec<Poly>> {
    proptest::collection::vec(proptest::collection::vec(-4i64..=4, 1..=4), 1..=3).prop_filter_map("distinct", |cs| {
        let us: Vec<Poly> = cs.iter().map(|c| Poly::from_dense(&c.iter().map(|&v| q(v)).collect::<Vec<_>>())).collect();
        let distinct = us.iter().enumerate().all(|(i, u)| !us[..i].contains(u));
        distinct.then_some(us)
    })
}

fn lift(u: &Poly) -> Poly {
    // u(x) as a polynomial in (x, y).
    Poly::from_terms(2, u.terms().map(|(m, c)| (vec![m.0[0], 0], c.clone()))).unwrap()
}

fn graph_family(us: &[Poly]) -> Vec<Poly> {
    let y = Poly::var(2, 1).unwrap();
    us.iter().map(|u| &y - &lift(u)).collect()
}

/// Cells of the decomposition by the graphs `y = u_i(x)`. The base line is
/// cut at the crossings and at the zeros of each `u_i` (the trailing
/// coefficients). Over an open base interval all graphs are distinct
/// sections; over a crossing `x0` graphs through the same point merge.
fn graph_cell_count(us: &[Poly]) -> usize {
    let mut crossings: Vec<(RealAlgebraic, usize, usize)> = Vec::new();
    for (i, u) in us.iter().enumerate() {
        if !u.is_constant() {
            crossings.extend(isolate_roots(u).unwrap().into_iter().map(|r| (RealAlgebraic::from_interval(r), i, i)));
        }
    }
    for i in 0..us.len() {
        for j in i + 1..us.len() {
            let diff = &us[i] - &us[j];
            if diff.is_constant() {
                continue;
            }
            for r in isolate_roots(&diff).unwrap() {
                crossings.push((RealAlgebraic::from_interval(r), i, j));
            }
        }
    }
    crossings.sort_by(|a, b| a.0.cmp_exact(&b.0));
    let mut points: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut last: Option<RealAlgebraic> = None;
    for (x, i, j) in crossings {
        match &last {
            Some(l) if l.cmp_exact(&x) == Ordering::Equal => points.last_mut().unwrap().push((i, j)),
            _ => points.push(vec![(i, j)]),
        }
        last = Some(x);
    }
    let k = us.len();
    let mut total = (points.len() + 1) * (2 * k + 1);
    for pairs in &points {
        // Union-find over the graphs meeting at this crossing.
        let mut root: Vec<usize> = (0..k).collect();
        fn find(r: &mut Vec<usize>, i: usize) -> usize {
            if r[i] != i {
                let t = find(r, r[i]);
                r[i] = t;
            }
            r[i]
        }
        for &(i, j) in pairs {
            let (a, b) = (find(&mut root, i), find(&mut root, j));
            root[a] = b;
        }
        let classes = (0..k).filter(|&i| find(&mut root, i) == i).count();
        total += 2 * classes + 1;
    }
    total
}

/// Exact family signs at a point whose `x` is rational, computed on the
/// fibers without the decomposition.
fn signs_over_rational(family: &[Poly], x: &Rational, y: &CellY) -> Vec<Sign> {
    let fibers: Vec<Poly> = family
        .iter()
        .map(|p| {
            let coeffs: Vec<Rational> = p.coeffs_in_last().iter().map(|c| c.eval(std::slice::from_ref(x)).unwrap()).collect();
            Poly::from_dense(&coeffs)
        })
        .collect();
    let y = match y {
        CellY::Rational(r) => RealAlgebraic::Rational(r.clone()),
        CellY::Section(k) => {
            let mut roots: Vec<RealAlgebraic> = fibers
                .iter()
                .filter(|f| !f.is_constant())
                .flat_map(|f| isolate_roots(f).unwrap())
                .map(RealAlgebraic::from_interval)
                .collect();
            roots.sort_by(|a, b| a.cmp_exact(b));
            roots.dedup_by(|a, b| a.cmp_exact(b) == Ordering::Equal);
            roots[*k].clone()
        }
    };
    fibers.iter().map(|f| y.sign_of(f).unwrap()).collect()
}

fn check_invariance(d: &CylDecomp, probes: usize, rng: &mut ChaCha8Rng) {
    for cell in d.cells() {
        for _ in 0..probes {
            let (x, y) = d.random_point(cell.base, cell.index, 3, rng);
            let got = match &x {
                RealAlgebraic::Rational(r) => signs_over_rational(&d.family, r, &y),
                RealAlgebraic::Root(_) => d.signs_at(&x, &y),
            };
            assert_eq!(got, cell.signs, "cell ({}, {})", cell.base, cell.index);
        }
    }
}

fn check_partition(d: &CylDecomp, points: usize, rng: &mut ChaCha8Rng) {
    for _ in 0..points {
        let x = qq(rng.gen_range(-40..=40), rng.gen_range(1..=4));
        let y = qq(rng.gen_range(-40..=40), rng.gen_range(1..=4));
        let owners = d.cells().filter(|c| d.cell_contains(c.base, c.index, &x, &y)).count();
        assert_eq!(owners, 1, "({x}, {y})");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn graph_families_have_predicted_cell_count(us in graphs()) {
        let d = cad2d(&graph_family(&us)).unwrap();
        prop_assert_eq!(d.num_cells(), graph_cell_count(&us));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn graph_families_are_sign_invariant_partitions(us in graphs(), seed in any::<u64>()) {
        let d = cad2d(&graph_family(&us)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        check_invariance(&d, 3, &mut rng);
        check_partition(&d, 40, &mut rng);
    }
}

#[test]
fn curved_families_are_sign_invariant_partitions() {
    let families = [
        vec!["x^2 + y^2 - 4", "y - x"],
        vec!["y^2 - x^3 + x"],
        vec!["x*y - 1", "y - x^2 + 2"],
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for texts in families {
        let family: Vec<Poly> = texts.iter().map(|t| parse_poly(t, &XY).unwrap()).collect();
        let d = cad2d(&family).unwrap();
        check_invariance(&d, 8, &mut rng);
        check_partition(&d, 100, &mut rng);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn growth_matches_degree(lead in 1i64..=4, low in proptest::collection::vec(-4i64..=4, 1..=4), sign in prop_oneof![Just(1i64), Just(-1)]) {
        let mut c: Vec<Rational> = low.into_iter().map(q).collect();
        c.push(q(sign * lead));
        let u = Poly::from_dense(&c);
        let p = (c.len() - 1) as f64;
        let y = Poly::var(2, 1).unwrap();
        let curve = &y - &lift(&u);
        let text = curve.to_string_with(&XY);
        let sel = Formula::new(2, atom_of(&text, Relation::Eq, &XY).unwrap()).unwrap();
        let r = growth_check(&[curve], &sel, c.len() as u32 - 1, (q(100), q(1_000_000)), 12).unwrap();
        prop_assert!((r.fitted_exponent - p).abs() <= 0.05 * p, "{} vs {}", r.fitted_exponent, p);
    }
}
