//! Ordinary least squares on a line, used for log-log exponent fits.

use serde::Serialize;

use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LineFit<F> {
    pub slope: F,
    pub intercept: F,
    /// Coefficient of determination; 1 when the residuals vanish.
    pub r_squared: F,
    /// Standard error of the slope (0 with two points).
    pub slope_stderr: F,
}

/// Fits `y = slope * x + intercept`. Needs at least two points with
/// distinct `x`.
pub fn ols<F: Real>(x: &[F], y: &[F]) -> Option<LineFit<F>> {
    let n = x.len();
    if n < 2 || y.len() != n {
        return None;
    }
    let nf = F::from_usize(n)?;
    let mx = x.iter().fold(F::zero(), |a, &b| a + b) / nf;
    let my = y.iter().fold(F::zero(), |a, &b| a + b) / nf;
    let (mut sxx, mut sxy, mut syy) = (F::zero(), F::zero(), F::zero());
    for (&a, &b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxx = sxx + dx * dx;
        sxy = sxy + dx * dy;
        syy = syy + dy * dy;
    }
    if sxx <= F::zero() {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse = x.iter().zip(y).fold(F::zero(), |acc, (&a, &b)| {
        let r = b - (slope * a + intercept);
        acc + r * r
    });
    let r_squared = if syy > F::zero() { F::one() - sse / syy } else { F::one() };
    let slope_stderr = if n > 2 { (sse / F::from_usize(n - 2)? / sxx).sqrt() } else { F::zero() };
    Some(LineFit { slope, intercept, r_squared, slope_stderr })
}
