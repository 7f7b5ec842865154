//! Empirical exponent estimation: seeded sampling of semi-algebraic
//! regions, log-log fits along curves and clouds, distance envelopes, and
//! the exact first Puiseux exponent of a Newton polygon.

mod example;
mod newton;

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

pub use example::{paper_example, PaperExample};
pub use newton::{newton_hull, newton_min_exponent};

use crate::error::{Error, Result};
use crate::fit::ols;
use crate::formulas::{CompiledFormula, Formula};
use crate::{FloatPoly, Poly};

/// Trials after which a low acceptance ratio is treated as failure.
pub const MAX_TRIALS: u64 = 1_000_000;
/// Acceptance ratio below which rejection sampling gives up.
pub const MIN_ACCEPTANCE: f64 = 1e-4;
/// Fits need at least this many usable samples.
pub const MIN_SAMPLES: usize = 8;
/// Fits with a lower coefficient of determination carry a warning.
pub const LOW_CONFIDENCE_R2: f64 = 0.99;
/// Fraction of highest-ratio points kept by the cloud estimator.
pub const CLOUD_QUANTILE: f64 = 0.05;

/// Semi-algebraic functions with fast float evaluation.
#[derive(Clone, Debug, PartialEq)]
pub enum SemiAlgFn {
    /// `sum_i |p_i|`
    AbsSum(Vec<Poly>),
    /// `sqrt(sum_i p_i^2)`
    Norm(Vec<Poly>),
    /// `sum_j |h_j| + sum_i max{g_i, 0}` for the system `g <= 0, h = 0`.
    Residual { g: Vec<Poly>, h: Vec<Poly> },
    /// Euclidean distance to the nearest listed point.
    DistPoints(Vec<Vec<f64>>),
}

impl SemiAlgFn {
    pub fn compile(&self) -> Evaluator {
        let fp = |ps: &[Poly]| ps.iter().map(FloatPoly::new).collect::<Vec<_>>();
        match self {
            SemiAlgFn::AbsSum(ps) => Evaluator::AbsSum(fp(ps)),
            SemiAlgFn::Norm(ps) => Evaluator::Norm(fp(ps)),
            SemiAlgFn::Residual { g, h } => Evaluator::Residual { g: fp(g), h: fp(h) },
            SemiAlgFn::DistPoints(pts) => Evaluator::DistPoints(pts.clone()),
        }
    }

    /// Number of variables, when it can be read off.
    pub fn arity(&self) -> Option<usize> {
        match self {
            SemiAlgFn::AbsSum(ps) | SemiAlgFn::Norm(ps) => ps.first().map(Poly::arity),
            SemiAlgFn::Residual { g, h } => g.first().or(h.first()).map(Poly::arity),
            SemiAlgFn::DistPoints(pts) => pts.first().map(Vec::len),
        }
    }
}

#[derive(Clone, Debug)]
pub enum Evaluator {
    AbsSum(Vec<FloatPoly<f64>>),
    Norm(Vec<FloatPoly<f64>>),
    Residual { g: Vec<FloatPoly<f64>>, h: Vec<FloatPoly<f64>> },
    DistPoints(Vec<Vec<f64>>),
}

impl Evaluator {
    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Evaluator::AbsSum(ps) => ps.iter().map(|p| p.eval(x).abs()).sum(),
            Evaluator::Norm(ps) => ps.iter().map(|p| p.eval(x).powi(2)).sum::<f64>().sqrt(),
            Evaluator::Residual { g, h } => {
                h.iter().map(|p| p.eval(x).abs()).sum::<f64>() + g.iter().map(|p| p.eval(x).max(0.0)).sum::<f64>()
            }
            Evaluator::DistPoints(pts) => pts
                .iter()
                .map(|p| p.iter().zip(x).map(|(a, b)| (a - b).powi(2)).sum::<f64>())
                .fold(f64::INFINITY, f64::min)
                .sqrt(),
        }
    }
}

/// Parametrized curve `t -> (c_1(t), ..., c_n(t))`.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveSpec {
    components: Vec<Poly>,
    compiled: Vec<FloatPoly<f64>>,
}

impl CurveSpec {
    pub fn new(components: Vec<Poly>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidInput("curve needs at least one component".into()));
        }
        if let Some(p) = components.iter().find(|p| p.arity() != 1) {
            return Err(Error::ArityMismatch { expected: 1, got: p.arity() });
        }
        let compiled = components.iter().map(FloatPoly::new).collect();
        Ok(CurveSpec { components, compiled })
    }

    pub fn components(&self) -> &[Poly] {
        &self.components
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn eval(&self, t: f64) -> Vec<f64> {
        self.compiled.iter().map(|c| c.eval(&[t])).collect()
    }
}

/// Seeded samples of a region, optionally carrying a pair of function
/// values per point.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleSet {
    pub points: Vec<Vec<f64>>,
    pub values: Vec<(f64, f64)>,
    pub bbox: Vec<(f64, f64)>,
    pub membership: Formula,
    pub seed: u64,
    pub trials: u64,
}

impl SampleSet {
    /// Wraps given points, checking each against the membership formula.
    pub fn from_points(points: Vec<Vec<f64>>, bbox: Vec<(f64, f64)>, membership: Formula) -> Result<Self> {
        let cf = membership.compile::<f64>();
        for (i, p) in points.iter().enumerate() {
            if p.len() != membership.arity() {
                return Err(Error::ArityMismatch { expected: membership.arity(), got: p.len() });
            }
            if !cf.eval(p) {
                return Err(Error::InvalidInput(format!("sample {i} lies outside the region")));
            }
        }
        let trials = points.len() as u64;
        Ok(SampleSet { points, values: Vec::new(), bbox, membership, seed: 0, trials })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn acceptance(&self) -> f64 {
        if self.trials == 0 {
            return 0.0;
        }
        self.points.len() as f64 / self.trials as f64
    }

    /// Attaches `(a(x), b(x))` to every point.
    pub fn with_values(mut self, a: impl Fn(&[f64]) -> f64 + Sync, b: impl Fn(&[f64]) -> f64 + Sync) -> Self {
        self.values = self.points.par_iter().map(|x| (a(x), b(x))).collect();
        self
    }
}

fn candidate(seed: u64, trial: u64, bbox: &[(f64, f64)]) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    bbox.iter().map(|&(lo, hi)| lo + (hi - lo) * rng.gen::<f64>()).collect()
}

/// Uniform rejection samples of `membership` inside `bbox`. Trial `j`
/// draws from its own stream of the seeded generator and the first
/// `count` accepted trials are kept, so the result does not depend on the
/// thread count.
pub fn sample_region(membership: &Formula, bbox: &[(f64, f64)], count: usize, seed: u64) -> Result<SampleSet> {
    if bbox.len() != membership.arity() {
        return Err(Error::ArityMismatch { expected: membership.arity(), got: bbox.len() });
    }
    if bbox.iter().any(|&(lo, hi)| !(lo < hi) || !lo.is_finite() || !hi.is_finite()) {
        return Err(Error::InvalidInterval("every box side must satisfy lo < hi".into()));
    }
    if count == 0 {
        return Err(Error::InvalidInput("sample count must be positive".into()));
    }
    let cf: CompiledFormula<f64> = membership.compile();
    let mut points = Vec::with_capacity(count);
    let mut trials = 0u64;
    let mut last = 0u64;
    while points.len() < count {
        let accepted = points.len() as f64;
        if trials >= MAX_TRIALS && accepted < MIN_ACCEPTANCE * trials as f64 {
            return Err(Error::InsufficientSamples(format!(
                "acceptance {} after {trials} trials; region too thin for rejection sampling",
                accepted / trials as f64
            )));
        }
        let ratio = if trials == 0 { 1.0 } else { (accepted / trials as f64).max(MIN_ACCEPTANCE) };
        let need = (count - points.len()) as f64;
        let batch = ((need / ratio * 1.2) as u64 + 64).clamp(256, 1 << 18);
        let found: Vec<(u64, Vec<f64>)> = (trials..trials + batch)
            .into_par_iter()
            .filter_map(|j| {
                let x = candidate(seed, j, bbox);
                cf.eval(&x).then_some((j, x))
            })
            .collect();
        for (j, x) in found {
            if points.len() < count {
                points.push(x);
                last = j;
            }
        }
        trials += batch;
    }
    Ok(SampleSet {
        points,
        values: Vec::new(),
        bbox: bbox.to_vec(),
        membership: membership.clone(),
        seed,
        trials: last + 1,
    })
}

/// A fitted power law with the data range it came from.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExponentEstimate {
    pub exponent: f64,
    /// Log of the fitted constant.
    pub intercept: f64,
    pub r_squared: f64,
    pub sample_count: usize,
    pub window: (f64, f64),
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl ExponentEstimate {
    pub fn low_confidence(&self) -> bool {
        self.r_squared < LOW_CONFIDENCE_R2
    }
}

fn fit_logs(lx: &[f64], ly: &[f64], what: &str) -> Result<crate::fit::LineFit<f64>> {
    if lx.len() < MIN_SAMPLES {
        return Err(Error::InsufficientSamples(format!("{what}: {} usable samples, need {MIN_SAMPLES}", lx.len())));
    }
    ols(lx, ly).ok_or_else(|| Error::InsufficientSamples(format!("{what}: samples do not spread in x")))
}

fn confidence_warnings(r2: f64) -> Vec<String> {
    if r2 < LOW_CONFIDENCE_R2 {
        vec![format!("low confidence: r_squared {r2:.4} < {LOW_CONFIDENCE_R2}")]
    } else {
        Vec::new()
    }
}

/// One sample along a curve, in natural logs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CurveRow {
    pub t: f64,
    pub log_f: f64,
    pub log_g: f64,
}

/// Samples `log |f|` and `log |g|` at `t` geometric in
/// `[t_max 10^-decades, t_max]`. Rows where either value vanishes are
/// dropped.
pub fn curve_samples(
    f: impl Fn(&[f64]) -> f64 + Sync,
    g: impl Fn(&[f64]) -> f64 + Sync,
    curve: &CurveSpec,
    t_max: f64,
    decades: u32,
    samples_per_decade: u32,
) -> Result<Vec<CurveRow>> {
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(Error::InvalidInput("t_max must be positive".into()));
    }
    if decades == 0 || samples_per_decade == 0 {
        return Err(Error::InvalidInput("decades and samples_per_decade must be positive".into()));
    }
    let m = (decades * samples_per_decade) as usize;
    let rows: Vec<Option<CurveRow>> = (0..=m)
        .into_par_iter()
        .map(|i| {
            let t = t_max * 10f64.powf(-(decades as f64) * (m - i) as f64 / m as f64);
            let x = curve.eval(t);
            let (fv, gv) = (f(&x).abs(), g(&x).abs());
            (fv > 0.0 && gv > 0.0 && fv.is_finite() && gv.is_finite()).then(|| CurveRow { t, log_f: fv.ln(), log_g: gv.ln() })
        })
        .collect();
    Ok(rows.into_iter().flatten().collect())
}

/// Slope of `log |f|` against `log |g|` along the curve: the exponent `N`
/// with `|g|^N ~ c |f|` there, a lower estimate of the Lojasiewicz
/// exponent. The intercept is `log c`.
pub fn estimate_loja_on_curve(
    f: impl Fn(&[f64]) -> f64 + Sync,
    g: impl Fn(&[f64]) -> f64 + Sync,
    curve: &CurveSpec,
    t_max: f64,
    decades: u32,
    samples_per_decade: u32,
) -> Result<ExponentEstimate> {
    let rows = curve_samples(f, g, curve, t_max, decades, samples_per_decade)?;
    loja_from_rows(&rows)
}

/// The curve fit on precomputed rows.
pub fn loja_from_rows(rows: &[CurveRow]) -> Result<ExponentEstimate> {
    let (lg, lf): (Vec<f64>, Vec<f64>) = rows.iter().map(|r| (r.log_g, r.log_f)).unzip();
    let fit = fit_logs(&lg, &lf, "curve estimate")?;
    let (t0, t1) = rows.iter().fold((f64::INFINITY, 0.0f64), |(a, b), r| (a.min(r.t), b.max(r.t)));
    Ok(ExponentEstimate {
        exponent: fit.slope,
        intercept: -fit.intercept,
        r_squared: fit.r_squared,
        sample_count: rows.len(),
        window: (t0, t1),
        warnings: confidence_warnings(fit.r_squared),
    })
}

/// Upper-envelope fit of `log |f|` against `log |g|` over the samples with
/// `0 < |g| < g_ceiling`: keeps the top fraction of points by
/// `log |f| / log |g|` and fits a line through them.
pub fn estimate_loja_cloud(
    f: impl Fn(&[f64]) -> f64 + Sync,
    g: impl Fn(&[f64]) -> f64 + Sync,
    samples: &SampleSet,
    g_ceiling: f64,
) -> Result<ExponentEstimate> {
    if !(g_ceiling > 0.0 && g_ceiling < 1.0) {
        return Err(Error::InvalidInput("g_ceiling must lie in (0, 1)".into()));
    }
    let logs: Vec<Option<(f64, f64)>> = samples
        .points
        .par_iter()
        .map(|x| {
            let (fv, gv) = (f(x).abs(), g(x).abs());
            (fv > 0.0 && fv.is_finite() && gv > 0.0 && gv < g_ceiling).then(|| (gv.ln(), fv.ln()))
        })
        .collect();
    let mut kept: Vec<(f64, f64)> = logs.into_iter().flatten().collect();
    if kept.len() < MIN_SAMPLES {
        return Err(Error::InsufficientSamples(format!(
            "cloud estimate: {} samples with 0 < |g| < {g_ceiling}, need {MIN_SAMPLES}",
            kept.len()
        )));
    }
    let total = kept.len();
    kept.sort_by(|a, b| (b.1 / b.0).total_cmp(&(a.1 / a.0)));
    let top = ((total as f64 * CLOUD_QUANTILE).ceil() as usize).max(MIN_SAMPLES);
    kept.truncate(top);
    let (lg, lf): (Vec<f64>, Vec<f64>) = kept.iter().copied().unzip();
    let fit = fit_logs(&lg, &lf, "cloud estimate")?;
    let (g0, g1) = lg.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    Ok(ExponentEstimate {
        exponent: fit.slope,
        intercept: -fit.intercept,
        r_squared: fit.r_squared,
        sample_count: kept.len(),
        window: (g0.exp(), g1.exp()),
        warnings: confidence_warnings(fit.r_squared),
    })
}

/// One row of the distance envelope.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EnvelopeRow {
    pub eps: f64,
    pub phi: f64,
    pub count: usize,
}

/// `phi(eps)`: the largest distance to the feasible set among samples
/// whose residual is about `eps`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnvelopeTable {
    pub rows: Vec<EnvelopeRow>,
}

impl EnvelopeTable {
    pub fn new(rows: Vec<EnvelopeRow>) -> Result<Self> {
        if rows.windows(2).any(|w| !(w[0].eps < w[1].eps)) {
            return Err(Error::InvalidInput("envelope eps must be strictly increasing".into()));
        }
        if rows.iter().any(|r| !(r.phi >= 0.0) || !(r.eps > 0.0)) {
            return Err(Error::InvalidInput("envelope needs eps > 0 and phi >= 0".into()));
        }
        Ok(EnvelopeTable { rows })
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("eps,phi,count\n");
        for r in &self.rows {
            let _ = writeln!(s, "{},{},{}", r.eps, r.phi, r.count);
        }
        s
    }
}

/// Bins the samples geometrically by residual value and records the
/// largest distance in each nonempty bin. A row's `eps` is the largest
/// residual seen in its bin.
pub fn envelope(
    psi: impl Fn(&[f64]) -> f64 + Sync,
    dist: impl Fn(&[f64]) -> f64 + Sync,
    samples: &SampleSet,
    bins: usize,
) -> Result<EnvelopeTable> {
    if bins < MIN_SAMPLES {
        return Err(Error::InvalidInput(format!("envelope needs at least {MIN_SAMPLES} bins")));
    }
    let vals: Vec<(f64, f64)> = samples
        .points
        .par_iter()
        .map(|x| (psi(x), dist(x)))
        .filter(|(p, d)| *p > 0.0 && p.is_finite() && d.is_finite())
        .collect();
    let (lo, hi) = vals.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &(p, _)| (a.min(p), b.max(p)));
    if vals.is_empty() || !(lo < hi) {
        return Err(Error::InsufficientSamples("residual values do not spread".into()));
    }
    let span = (hi / lo).ln();
    let mut acc: Vec<Option<EnvelopeRow>> = vec![None; bins];
    for &(p, d) in &vals {
        let k = ((bins as f64 * (p / lo).ln() / span) as usize).min(bins - 1);
        let row = acc[k].get_or_insert(EnvelopeRow { eps: p, phi: d, count: 0 });
        row.count += 1;
        row.eps = row.eps.max(p);
        row.phi = row.phi.max(d);
    }
    let rows: Vec<EnvelopeRow> = acc.into_iter().flatten().collect();
    if rows.len() < MIN_SAMPLES {
        return Err(Error::InsufficientSamples(format!("{} nonempty envelope bins, need {MIN_SAMPLES}", rows.len())));
    }
    EnvelopeTable::new(rows)
}

/// Error-bound exponent read off an envelope: `phi ~ a eps^gamma` near 0
/// gives `dist^rho <= kappa psi` with `rho = 1/gamma`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErrorBoundEstimate {
    /// `exponent` is `rho`, `intercept` is `log kappa`.
    #[serde(flatten)]
    pub estimate: ExponentEstimate,
    pub gamma: f64,
}

/// Fits `log phi` against `log eps` on the smallest-`eps` half of the
/// table.
pub fn estimate_error_exponent(table: &EnvelopeTable) -> Result<ErrorBoundEstimate> {
    let table = EnvelopeTable::new(table.rows.clone())?;
    if table.rows.len() < MIN_SAMPLES {
        return Err(Error::InsufficientSamples(format!("{} envelope rows, need {MIN_SAMPLES}", table.rows.len())));
    }
    let half = &table.rows[..table.rows.len().div_ceil(2)];
    let mut warnings = Vec::new();
    if half.windows(2).any(|w| w[1].phi < w[0].phi) {
        warnings.push("envelope is not monotone on the fitted half".to_string());
    }
    let used: Vec<&EnvelopeRow> = half.iter().filter(|r| r.phi > 0.0).collect();
    let (le, lp): (Vec<f64>, Vec<f64>) = used.iter().map(|r| (r.eps.ln(), r.phi.ln())).unzip();
    if le.len() < 2 {
        return Err(Error::InsufficientSamples("fewer than two positive envelope rows".into()));
    }
    let fit = ols(&le, &lp).ok_or_else(|| Error::InsufficientSamples("envelope rows do not spread".into()))?;
    if !(fit.slope > 0.0) {
        return Err(Error::Numeric(format!("envelope slope {} is not positive", fit.slope)));
    }
    let rho = 1.0 / fit.slope;
    warnings.extend(confidence_warnings(fit.r_squared));
    Ok(ErrorBoundEstimate {
        estimate: ExponentEstimate {
            exponent: rho,
            intercept: rho * fit.intercept,
            r_squared: fit.r_squared,
            sample_count: used.iter().map(|r| r.count).sum(),
            window: (half[0].eps, half[half.len() - 1].eps),
            warnings,
        },
        gamma: fit.slope,
    })
}

/// `t,log_f,log_g` lines.
pub fn curve_csv(rows: &[CurveRow]) -> String {
    let mut s = String::from("t,log_f,log_g\n");
    for r in rows {
        let _ = writeln!(s, "{},{},{}", r.t, r.log_f, r.log_g);
    }
    s
}
