use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{rational_to_f64, Real};
use crate::{Poly, Rational};

fn eval_all(ps: &[Poly], x: &[Rational]) -> Result<Vec<Rational>> {
    ps.iter()
        .map(|p| {
            if p.arity() != x.len() {
                return Err(Error::ArityMismatch { expected: p.arity(), got: x.len() });
            }
            p.eval(x)
        })
        .collect()
}

fn pos_part(v: Rational) -> Rational {
    if v.is_positive() {
        v
    } else {
        Rational::zero()
    }
}

/// `sum_j |h_j(x)| + sum_i max{g_i(x), 0}` for the system `g <= 0, h = 0`.
pub fn residual_psi(g: &[Poly], h: &[Poly], x: &[Rational]) -> Result<Rational> {
    let gv = eval_all(g, x)?;
    let hv = eval_all(h, x)?;
    Ok(hv.iter().map(Rational::abs).chain(gv.into_iter().map(pos_part)).fold(Rational::zero(), |a, b| a + b))
}

/// Residual of a system with binary variables, kept as exact radicands.
#[derive(Clone, Debug, PartialEq)]
pub struct BinaryResidual {
    /// `sum_j h_j(x)^2`
    pub h_squares: Rational,
    /// `sum_i max{g_i(x), 0}^2`
    pub g_squares: Rational,
    /// `sum_k |x_k (1 - x_k)|`
    pub binary_part: Rational,
    pub value: f64,
}

/// `sqrt(sum h_j^2) + sqrt(sum max{g_i, 0}^2) + sum_k |x_k (1 - x_k)|`.
pub fn residual_binary(g: &[Poly], h: &[Poly], x: &[Rational]) -> Result<BinaryResidual> {
    let gv = eval_all(g, x)?;
    let hv = eval_all(h, x)?;
    let h_squares = hv.iter().map(|v| v * v).fold(Rational::zero(), |a, b| a + b);
    let g_squares = gv.into_iter().map(pos_part).map(|v| &v * &v).fold(Rational::zero(), |a, b| a + b);
    let one = Rational::from_integer(1.into());
    let binary_part = x.iter().map(|v| (v * (&one - v)).abs()).fold(Rational::zero(), |a, b| a + b);
    let value = rational_to_f64(&h_squares).sqrt() + rational_to_f64(&g_squares).sqrt() + rational_to_f64(&binary_part);
    Ok(BinaryResidual { h_squares, g_squares, binary_part, value })
}

/// Terms of the semidefinite residual at a symmetric matrix `X`.
#[derive(Clone, Debug, PartialEq)]
pub struct SdpResidual {
    /// `max{-lambda_min(X), 0}`
    pub lam_min_part: f64,
    /// Largest `max{-det(X_I), 0}` over principal submatrices `X_I`.
    pub minor_part: Rational,
    /// `sum_i max{g_i(vec X), 0}`
    pub constraint_part: Rational,
    /// Optional distance term supplied by the caller.
    pub dist_part: Option<f64>,
}

impl SdpResidual {
    pub fn with_dist(mut self, d: f64) -> Self {
        self.dist_part = Some(d);
        self
    }

    /// `lam_min_part + constraint_part (+ dist_part)`.
    pub fn total(&self) -> f64 {
        self.lam_min_part + rational_to_f64(&self.constraint_part) + self.dist_part.unwrap_or(0.0)
    }
}

pub const JACOBI_TOL: f64 = 1e-12;
pub const JACOBI_MAX_SWEEPS: usize = 50;

/// Residual terms for `X` positive semidefinite plus `g(vec X) <= 0`, where
/// `g` is over the `p^2` entries in row-major order.
pub fn residual_sdp(g: &[Poly], x: &[Vec<Rational>]) -> Result<SdpResidual> {
    let p = x.len();
    for (i, row) in x.iter().enumerate() {
        if row.len() != p {
            return Err(Error::InvalidInput(format!("row {i} has length {}, expected {p}", row.len())));
        }
        for j in 0..i {
            if x[i][j] != x[j][i] {
                return Err(Error::InvalidInput(format!("matrix is not symmetric at ({i}, {j})")));
            }
        }
    }
    let flat: Vec<Rational> = x.iter().flatten().cloned().collect();
    let constraint_part = eval_all(g, &flat)?.into_iter().map(pos_part).fold(Rational::zero(), |a, b| a + b);
    let xf: Vec<Vec<f64>> = x.iter().map(|r| r.iter().map(rational_to_f64).collect()).collect();
    let eig = jacobi_eigenvalues(&xf, JACOBI_TOL, JACOBI_MAX_SWEEPS);
    let lam_min = eig.iter().cloned().fold(f64::INFINITY, f64::min);
    let lam_min_part = if p == 0 { 0.0 } else { (-lam_min).max(0.0) };
    let mut minor_part = Rational::zero();
    for mask in 1u32..(1u32 << p) {
        let idx: Vec<usize> = (0..p).filter(|i| mask & (1 << i) != 0).collect();
        let sub: Vec<Vec<Rational>> = idx.iter().map(|&i| idx.iter().map(|&j| x[i][j].clone()).collect()).collect();
        let neg = -det_exact(&sub);
        if neg > minor_part {
            minor_part = neg;
        }
    }
    Ok(SdpResidual { lam_min_part, minor_part, constraint_part, dist_part: None })
}

/// Exact determinant by Gaussian elimination over the rationals.
pub fn det_exact(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let mut det = Rational::from_integer(1.into());
    for c in 0..n {
        let Some(piv) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return Rational::zero();
        };
        if piv != c {
            a.swap(piv, c);
            det = -det;
        }
        let pv = a[c][c].clone();
        det *= &pv;
        for r in c + 1..n {
            if a[r][c].is_zero() {
                continue;
            }
            let f = &a[r][c] / &pv;
            for k in c..n {
                let t = &f * &a[c][k];
                a[r][k] -= t;
            }
        }
    }
    det
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, stopping
/// once the off-diagonal Frobenius norm is below `tol` (relative to the full
/// norm) or after `max_sweeps` sweeps.
pub fn jacobi_eigenvalues<F: Real>(m: &[Vec<F>], tol: F, max_sweeps: usize) -> Vec<F> {
    let n = m.len();
    let mut a: Vec<Vec<F>> = m.to_vec();
    let two = F::one() + F::one();
    let norm = a.iter().flatten().fold(F::zero(), |s, &v| s + v * v).sqrt();
    for _ in 0..max_sweeps {
        let off = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .fold(F::zero(), |s, (i, j)| s + a[i][j] * a[i][j])
            .sqrt();
        if off <= tol * norm.max(F::min_positive_value()) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q] == F::zero() {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (two * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + F::one()).sqrt());
                let c = F::one() / (t * t + F::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i][i]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse_poly;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn px(t: &str) -> Poly {
        parse_poly(t, &["x"]).unwrap()
    }

    #[test]
    fn psi_examples() {
        assert_eq!(residual_psi(&[px("x")], &[px("x - 1")], &[q(3)]).unwrap(), q(5));
        assert_eq!(residual_psi(&[px("x")], &[], &[q(-1)]).unwrap(), q(0));
        assert_eq!(residual_psi(&[], &[px("x^2"), px("x - 1")], &[q(2)]).unwrap(), q(5));
        assert!(residual_psi(&[px("x")], &[], &[q(1), q(2)]).is_err());
    }

    #[test]
    fn binary_examples() {
        let r = residual_binary(&[], &[], &[Rational::new(1.into(), 2.into())]).unwrap();
        assert_eq!(r.binary_part, Rational::new(1.into(), 4.into()));
        assert_eq!(r.value, 0.25);
        assert_eq!(residual_binary(&[], &[], &[q(0), q(1), q(1)]).unwrap().value, 0.0);
        let r = residual_binary(&[px("x - 2")], &[], &[q(3)]).unwrap();
        assert_eq!((r.g_squares.clone(), r.binary_part.clone()), (q(1), q(6)));
        assert_eq!(r.value, 7.0);
    }

    #[test]
    fn sdp_examples() {
        let r = residual_sdp(&[], &[vec![q(0), q(0)], vec![q(0), q(-1)]]).unwrap();
        assert!((r.lam_min_part - 1.0).abs() < 1e-12);
        assert_eq!(r.minor_part, q(1));
        let r = residual_sdp(&[], &[vec![q(1), q(0)], vec![q(0), q(1)]]).unwrap();
        assert_eq!(r.lam_min_part, 0.0);
        assert_eq!(r.minor_part, q(0));
        let r = residual_sdp(&[], &[vec![q(0), q(1)], vec![q(1), q(0)]]).unwrap();
        assert!((r.lam_min_part - 1.0).abs() < 1e-12);
        assert_eq!(r.minor_part, q(1));
        assert!(residual_sdp(&[], &[vec![q(0), q(1)], vec![q(2), q(0)]]).is_err());
    }

    #[test]
    fn sdp_constraint_uses_row_major_entries() {
        let vars = ["a", "b", "c", "d"];
        let g = parse_poly("a + d - 1", &vars).unwrap();
        let r = residual_sdp(&[g], &[vec![q(2), q(0)], vec![q(0), q(3)]]).unwrap();
        assert_eq!(r.constraint_part, q(4));
        assert_eq!(r.clone().with_dist(0.5).total(), 4.5);
    }

    #[test]
    fn determinants() {
        assert_eq!(det_exact(&[vec![q(0), q(1)], vec![q(1), q(0)]]), q(-1));
        assert_eq!(det_exact(&[vec![q(2), q(1), q(0)], vec![q(1), q(2), q(1)], vec![q(0), q(1), q(2)]]), q(4));
        assert_eq!(det_exact(&[]), q(1));
    }

    #[test]
    fn jacobi_matches_closed_form() {
        // [[2,1],[1,2]] has eigenvalues 1 and 3.
        let mut e = jacobi_eigenvalues(&[vec![2.0, 1.0], vec![1.0, 2.0]], 1e-12, 50);
        e.sort_by(f64::total_cmp);
        assert!((e[0] - 1.0).abs() < 1e-12 && (e[1] - 3.0).abs() < 1e-12);
        // tridiagonal 2,-1 of size 4: 2 - 2cos(k pi / 5)
        let m: Vec<Vec<f64>> = (0..4usize)
            .map(|i| (0..4usize).map(|j| if i == j { 2.0 } else if i.abs_diff(j) == 1 { -1.0 } else { 0.0 }).collect())
            .collect();
        let mut e = jacobi_eigenvalues(&m, 1e-12, 50);
        e.sort_by(f64::total_cmp);
        for (k, v) in e.iter().enumerate() {
            let want = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / 5.0).cos();
            assert!((v - want).abs() < 1e-10, "{v} vs {want}");
        }
        let e32 = jacobi_eigenvalues(&[vec![2.0f32, 1.0], vec![1.0, 2.0]], 1e-6, 50);
        assert!(e32.iter().any(|v| (v - 3.0).abs() < 1e-5));
    }
}
