use rayon::prelude::*;
use serde::Serialize;

use super::Fiber;
use crate::error::{Error, Result};
use crate::fit::ols;
use crate::formulas::Formula;
use crate::realroots::RealAlgebraic;
use crate::scalar::{f64_to_rational, rational_to_f64};
use crate::{Poly, Rational};

/// Allowed excess of the fitted slope over the claimed exponent.
pub const GROWTH_TOLERANCE: f64 = 0.1;

/// Result of fitting `log |f(x)|` against `log x` along a graph.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthReport {
    pub fitted_exponent: f64,
    pub window: (f64, f64),
    pub claimed_p: u32,
    pub tolerance: f64,
    pub pass: bool,
    /// `(x, f(x))` pairs used in the fit.
    pub points: Vec<(f64, f64)>,
}

/// Number of samples giving a geometric ratio of about 2 over the window.
pub fn default_growth_samples(window: (&Rational, &Rational)) -> usize {
    let ratio = rational_to_f64(window.1) / rational_to_f64(window.0);
    if !(ratio > 1.0) {
        return 2;
    }
    (ratio.log2().floor() as usize + 1).max(2)
}

/// Checks `|f(x)| <= c x^p` empirically along the graph of `f` selected by
/// `selector` among the sections of `family`: samples `x` geometrically in
/// the window, finds the graph point above each `x` exactly, and fits the
/// log-log slope.
pub fn growth_check(
    family: &[Poly],
    selector: &Formula,
    p: u32,
    window: (Rational, Rational),
    samples: usize,
) -> Result<GrowthReport> {
    super::check_family(family)?;
    if selector.arity() != 2 {
        return Err(Error::ArityMismatch { expected: 2, got: selector.arity() });
    }
    if p < 1 {
        return Err(Error::InvalidInput("claimed exponent p must be at least 1".into()));
    }
    let (lo, hi) = window;
    if lo <= Rational::from_integer(0.into()) || hi <= lo {
        return Err(Error::InvalidInterval("growth window must satisfy 0 < x_min < x_max".into()));
    }
    if samples < 2 {
        return Err(Error::InvalidInput("growth check needs at least 2 samples".into()));
    }
    let (l0, l1) = (rational_to_f64(&lo).ln(), rational_to_f64(&hi).ln());
    let xs: Vec<Rational> = (0..samples)
        .map(|i| match i {
            0 => lo.clone(),
            i if i + 1 == samples => hi.clone(),
            i => f64_to_rational((l0 + (l1 - l0) * i as f64 / (samples - 1) as f64).exp()).expect("finite"),
        })
        .collect();
    let values: Vec<Result<(f64, f64)>> = xs
        .par_iter()
        .map(|x| {
            let fiber = Fiber::new(family, &RealAlgebraic::Rational(x.clone()));
            for k in 0..fiber.roots.len() {
                let holds = selector.eval_with(|q| -> Result<_> { Ok(fiber.sign_of_at_root(q, k)) })?;
                if holds {
                    return Ok((rational_to_f64(x), fiber.root_f64(k)));
                }
            }
            Err(Error::InvalidInput(format!("no graph point selected above x = {}", rational_to_f64(x))))
        })
        .collect();
    let points = values.into_iter().collect::<Result<Vec<_>>>()?;
    let (lx, ly): (Vec<f64>, Vec<f64>) =
        points.iter().filter(|(_, y)| *y != 0.0).map(|(x, y)| (x.ln(), y.abs().ln())).unzip();
    let fit = ols(&lx, &ly).ok_or_else(|| Error::InsufficientSamples("fewer than two nonzero graph values".into()))?;
    let fitted_exponent = fit.slope;
    Ok(GrowthReport {
        fitted_exponent,
        window: (rational_to_f64(&lo), rational_to_f64(&hi)),
        claimed_p: p,
        tolerance: GROWTH_TOLERANCE,
        pass: fitted_exponent <= p as f64 + GROWTH_TOLERANCE,
        points,
    })
}
