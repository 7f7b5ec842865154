use super::Polynomial;
use crate::scalar::Real;
use crate::Poly;

/// A rational polynomial with coefficients converted once to a float type,
/// evaluated with integer powers.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatPoly<F> {
    arity: usize,
    terms: Vec<(F, Vec<(usize, i32)>)>,
}

impl<F: Real> FloatPoly<F> {
    pub fn new(p: &Poly) -> Self {
        let terms = p
            .terms()
            .map(|(m, c)| {
                let pows = m.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, &e)| (i, e as i32)).collect();
                (F::from_rational(c), pows)
            })
            .collect();
        FloatPoly { arity: p.arity(), terms }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Panics if `x` is shorter than the arity.
    pub fn eval(&self, x: &[F]) -> F {
        self.terms.iter().fold(F::zero(), |acc, (c, pows)| acc + pows.iter().fold(*c, |t, &(i, e)| t * x[i].powi(e)))
    }
}

impl<F: Real> From<&Polynomial<crate::Rational>> for FloatPoly<F> {
    fn from(p: &Poly) -> Self {
        FloatPoly::new(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse_poly;
    use crate::scalar::f64_to_rational;

    #[test]
    fn matches_exact_evaluation() {
        let p = parse_poly("3/4*x^3*y - 2*y^2 + x - 5", &["x", "y"]).unwrap();
        let fp = FloatPoly::<f64>::new(&p);
        for &(a, b) in &[(0.5, -1.25), (2.0, 3.0), (-0.75, 0.125)] {
            let exact = p.eval(&[f64_to_rational(a).unwrap(), f64_to_rational(b).unwrap()]).unwrap();
            assert_eq!(fp.eval(&[a, b]), crate::scalar::rational_to_f64(&exact));
        }
        assert_eq!(FloatPoly::<f32>::new(&p).eval(&[0.0, 0.0]), -5.0);
    }
}
