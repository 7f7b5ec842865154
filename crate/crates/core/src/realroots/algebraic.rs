use std::sync::Mutex;

use num_traits::{Signed, Zero};

use super::engine::{Bracket, Domain, Engine, RationalField};
use super::{IsolatingInterval, RealAlgebraic};
use crate::poly::{poly_div_rem, trim_dense};
use crate::scalar::Sign;
use crate::Rational;

/// The field `Q(alpha)` for a fixed real algebraic `alpha`, with elements
/// written as rational polynomials in `alpha` reduced modulo its square-free
/// defining polynomial. Signs are decided at `alpha` itself; the isolating
/// bracket is refined in place as comparisons require.
#[derive(Debug)]
pub struct AlgebraicPoint {
    modulus: Vec<Rational>,
    bracket: Mutex<Bracket>,
}

impl Clone for AlgebraicPoint {
    fn clone(&self) -> Self {
        AlgebraicPoint { modulus: self.modulus.clone(), bracket: Mutex::new(self.bracket()) }
    }
}

impl AlgebraicPoint {
    pub fn rational(r: Rational) -> Self {
        AlgebraicPoint { modulus: vec![-r.clone(), Rational::from_integer(1.into())], bracket: Mutex::new(Bracket::point(r)) }
    }

    pub fn new(value: &RealAlgebraic) -> Self {
        match value {
            RealAlgebraic::Rational(r) => Self::rational(r.clone()),
            RealAlgebraic::Root(iv) => AlgebraicPoint {
                modulus: iv.sqf_dense(),
                bracket: Mutex::new(Bracket { low: iv.low.clone(), high: iv.high.clone() }),
            },
        }
    }

    fn bracket(&self) -> Bracket {
        self.bracket.lock().expect("bracket lock").clone()
    }

    pub fn value(&self) -> RealAlgebraic {
        let br = self.bracket();
        if br.is_point() {
            return RealAlgebraic::Rational(br.low);
        }
        RealAlgebraic::Root(IsolatingInterval::from_parts(&self.modulus, br.low, br.high))
    }

    /// The value when it is known to be rational.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.modulus.len() == 2 {
            return Some(-&self.modulus[0] / &self.modulus[1]);
        }
        let br = self.bracket();
        br.is_point().then_some(br.low)
    }

    /// Value of an element as a rational, when `alpha` is rational.
    pub(crate) fn elem_value(&self, e: &[Rational]) -> Option<Rational> {
        self.as_rational().map(|r| crate::poly::dense_eval(e, &r))
    }

    fn reduce(&self, mut e: Vec<Rational>) -> Vec<Rational> {
        trim_dense(&mut e);
        if e.len() >= self.modulus.len() {
            e = poly_div_rem(&e, &self.modulus).1;
        }
        e
    }

    /// Embeds a rational polynomial in `alpha`.
    pub(crate) fn elem(&self, coeffs: Vec<Rational>) -> Vec<Rational> {
        self.reduce(coeffs)
    }
}

impl Domain for AlgebraicPoint {
    type Elem = Vec<Rational>;

    fn zero(&self) -> Vec<Rational> {
        Vec::new()
    }

    fn from_rational(&self, r: &Rational) -> Vec<Rational> {
        if r.is_zero() {
            Vec::new()
        } else {
            vec![r.clone()]
        }
    }

    fn add(&self, a: &Vec<Rational>, b: &Vec<Rational>) -> Vec<Rational> {
        let n = a.len().max(b.len());
        let z = Rational::zero();
        let mut out: Vec<Rational> = (0..n).map(|i| a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z)).collect();
        trim_dense(&mut out);
        out
    }

    fn sub(&self, a: &Vec<Rational>, b: &Vec<Rational>) -> Vec<Rational> {
        let n = a.len().max(b.len());
        let z = Rational::zero();
        let mut out: Vec<Rational> = (0..n).map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).collect();
        trim_dense(&mut out);
        out
    }

    fn mul(&self, a: &Vec<Rational>, b: &Vec<Rational>) -> Vec<Rational> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        if a.len() == 1 && b.len() == 1 {
            return vec![&a[0] * &b[0]];
        }
        let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        self.reduce(out)
    }

    fn sign(&self, a: &Vec<Rational>) -> Sign {
        match a.len() {
            0 => Sign::Zero,
            1 => Sign::of(&a[0]),
            2 => {
                // a0 + a1 alpha has the sign of a1 (alpha + a0/a1).
                let r = -&a[0] / &a[1];
                let mut br = self.bracket.lock().expect("bracket lock");
                let s = match Engine::new(&RationalField).compare_root(&self.modulus, &mut br, &r) {
                    std::cmp::Ordering::Less => Sign::Negative,
                    std::cmp::Ordering::Equal => Sign::Zero,
                    std::cmp::Ordering::Greater => Sign::Positive,
                };
                s.mul(Sign::of(&a[1]))
            }
            _ => {
                let mut br = self.bracket.lock().expect("bracket lock");
                Engine::new(&RationalField).sign_at_root(a, &self.modulus, &mut br)
            }
        }
    }

    fn root_bound(&self, p: &[Vec<Rational>]) -> Option<Rational> {
        let vals: Vec<Rational> = p.iter().map(|e| self.elem_value(e)).collect::<Option<_>>()?;
        RationalField.root_bound(&vals)
    }

    fn normalize(&self, p: &mut [Vec<Rational>]) {
        let scale = p.iter().rev().find_map(|e| e.last()).map(Rational::abs);
        if let Some(s) = scale {
            for e in p.iter_mut() {
                for c in e.iter_mut() {
                    *c = &*c / &s;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;
    use crate::realroots::isolate_roots;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn arithmetic_in_sqrt_two() {
        let roots = isolate_roots(&parse_poly("x^2 - 2", &["x"]).unwrap()).unwrap();
        let alpha = AlgebraicPoint::new(&RealAlgebraic::Root(roots[1].clone()));
        let a = vec![q(0), q(1)];
        // alpha^2 reduces to 2
        assert_eq!(alpha.mul(&a, &a), vec![q(2)]);
        assert_eq!(alpha.sign(&a), Sign::Positive);
        // alpha - 3/2 < 0, alpha - 7/5 > 0
        assert_eq!(alpha.sign(&vec![Rational::new((-3).into(), 2.into()), q(1)]), Sign::Negative);
        assert_eq!(alpha.sign(&vec![Rational::new((-7).into(), 5.into()), q(1)]), Sign::Positive);
    }

    #[test]
    fn isolates_fiber_over_irrational_point() {
        // y^2 - alpha has roots +-2^(1/4) over alpha = sqrt 2.
        let roots = isolate_roots(&parse_poly("x^2 - 2", &["x"]).unwrap()).unwrap();
        let alpha = AlgebraicPoint::new(&RealAlgebraic::Root(roots[1].clone()));
        let p = vec![vec![q(0), q(-1)], vec![], vec![q(1)]];
        let eng = Engine::new(&alpha);
        let brs = eng.isolate(&p);
        assert_eq!(brs.len(), 2);
        let r = 2f64.powf(0.25);
        assert!(brs[1].low.clone() < f(r) && f(r) < brs[1].high.clone());
        assert!(brs[0].low.clone() < f(-r) && f(-r) < brs[0].high.clone());
    }

    fn f(v: f64) -> Rational {
        crate::scalar::f64_to_rational(v).unwrap()
    }
}
