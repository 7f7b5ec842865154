use num_bigint::BigInt;
use num_traits::FromPrimitive;
use serde_json::{json, Value};

use semialg::bounds::{comparator_bounds, descent_rate, sos_rate, BoundInputs};
use semialg::cad::{cad2d, default_growth_samples, growth_check, Cell};
use semialg::estimate::{
    curve_csv, curve_samples, envelope, estimate_error_exponent, estimate_loja_cloud, loja_from_rows,
    newton_hull, newton_min_exponent, paper_example, sample_region, CurveSpec, SemiAlgFn,
};
use semialg::formulas::{dist_1d, dist_formula_finite, dist_to_finite, residual_psi, residual_sdp, Formula, Node};
use semialg::poly::default_var_names;
use semialg::realroots::{
    isolate_roots, realizable_sign_conditions_1d, root_multiplicity, thom_encode_roots, IsolatingInterval, LineCell,
    RealAlgebraic,
};
use semialg::scalar::{rational_string, rational_to_f64};
use semialg::{Error, Poly, Sign};

use crate::spec::{at, formula, point_set, polys, rational, rationals, semialg_fn, CliError, CliResult, ProblemSpec};

pub struct Output {
    pub json: Value,
    pub csv: Option<String>,
    pub table: Option<String>,
}

impl From<Value> for Output {
    fn from(json: Value) -> Self {
        Output { json, csv: None, table: None }
    }
}

const DEFAULT_T_MAX: f64 = 1e-2;
const DEFAULT_DECADES: u32 = 6;
const DEFAULT_SAMPLES_PER_DECADE: u32 = 10;
const DEFAULT_COUNT: usize = 100_000;
const DEFAULT_G_CEILING: f64 = 0.5;
const DEFAULT_BINS: usize = 24;

pub fn run(command: &str, spec: &ProblemSpec) -> CliResult<Output> {
    match command {
        "parse" => parse(spec),
        "roots" => roots(spec),
        "thom" => thom(spec),
        "signcond1d" => signcond1d(spec),
        "cad2d" => cad(spec),
        "growth-check" => growth(spec),
        "dist" => dist(spec),
        "residual" => residual(spec),
        "bounds" => bounds(spec),
        "estimate-loja" => estimate_loja(spec),
        "estimate-errorbound" => estimate_errorbound(spec),
        "newton-slope" => newton(spec),
        "sos-rate" => sos(spec),
        "descent-rate" => descent(spec),
        other => Err(CliError::Io(format!("unknown command {other}"))),
    }
}

fn need<T: Clone>(v: &Option<T>, what: &str) -> CliResult<T> {
    v.clone().ok_or_else(|| CliError::Missing(what.into()))
}

fn family(spec: &ProblemSpec, default_vars: &[&str]) -> CliResult<(Vec<Poly>, Vec<String>)> {
    let vars = spec.var_names(default_vars);
    let texts = need(&spec.polys, "polys (--poly)")?;
    if texts.is_empty() {
        return Err(CliError::Missing("polys (--poly)".into()));
    }
    Ok((polys(&texts, &vars, "/polys")?, vars))
}

fn single(spec: &ProblemSpec, default_vars: &[&str]) -> CliResult<(Poly, Vec<String>)> {
    let (mut ps, vars) = family(spec, default_vars)?;
    if ps.len() != 1 {
        return Err(at("/polys", Error::InvalidInput(format!("expected one polynomial, got {}", ps.len()))));
    }
    Ok((ps.remove(0), vars))
}

fn strs(vars: &[String]) -> Vec<&str> {
    vars.iter().map(String::as_str).collect()
}

fn signs(s: &[Sign]) -> Value {
    s.iter().map(|v| v.as_i8()).collect()
}

fn real_json(r: &RealAlgebraic) -> Value {
    match r {
        RealAlgebraic::Rational(q) => json!({"exact": rational_string(q), "approx": rational_to_f64(q)}),
        RealAlgebraic::Root(iv) => interval_json(iv),
    }
}

fn interval_json(iv: &IsolatingInterval) -> Value {
    if iv.is_exact() {
        return json!({"exact": rational_string(&iv.low), "approx": iv.to_f64()});
    }
    json!({
        "polynomial": iv.polynomial.to_string(),
        "low": rational_string(&iv.low),
        "high": rational_string(&iv.high),
        "approx": iv.to_f64(),
    })
}

fn line_cell_json(c: &LineCell) -> Value {
    match c {
        LineCell::Point(r) => json!({"kind": "point", "point": real_json(r)}),
        LineCell::Interval { lower, upper, sample } => json!({
            "kind": "interval",
            "lower": lower.as_ref().map(real_json),
            "upper": upper.as_ref().map(real_json),
            "sample": rational_string(sample),
        }),
    }
}

fn parse(spec: &ProblemSpec) -> CliResult<Output> {
    let (ps, vars) = family(spec, &["x"])?;
    let v = strs(&vars);
    let items: Vec<Value> = ps
        .iter()
        .map(|p| {
            json!({
                "canonical": p.canonical_string(&v),
                "total_degree": p.total_degree().to_string(),
                "terms": p.coefficient_strings(),
            })
        })
        .collect();
    Ok(json!({"vars": vars, "polynomials": items}).into())
}

fn roots(spec: &ProblemSpec) -> CliResult<Output> {
    let (p, vars) = single(spec, &["x"])?;
    let rs = isolate_roots(&p).map_err(|e| at("/polys/0", e))?;
    let items = rs
        .iter()
        .map(|iv| {
            let m = root_multiplicity(&p, &RealAlgebraic::from_interval(iv.clone())).map_err(|e| at("/polys/0", e))?;
            let mut j = interval_json(iv);
            j["multiplicity"] = m.into();
            Ok(j)
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(json!({"polynomial": p.canonical_string(&strs(&vars)), "roots": items}).into())
}

fn thom(spec: &ProblemSpec) -> CliResult<Output> {
    let (p, vars) = single(spec, &["x"])?;
    let enc = thom_encode_roots(&p).map_err(|e| at("/polys/0", e))?;
    let items: Vec<Value> = enc.iter().map(|e| json!({"signs": signs(&e.signs), "root": interval_json(&e.root)})).collect();
    Ok(json!({"polynomial": p.canonical_string(&strs(&vars)), "encodings": items}).into())
}

fn signcond1d(spec: &ProblemSpec) -> CliResult<Output> {
    let (ps, vars) = family(spec, &["x"])?;
    let cells = realizable_sign_conditions_1d(&ps).map_err(|e| at("/polys", e))?;
    let items: Vec<Value> = cells
        .iter()
        .map(|(c, cell)| {
            let mut j = line_cell_json(cell);
            j["signs"] = signs(&c.assignment);
            j
        })
        .collect();
    let family: Vec<String> = ps.iter().map(|p| p.canonical_string(&strs(&vars))).collect();
    Ok(json!({"family": family, "num_cells": items.len(), "cells": items}).into())
}

fn cell_json(c: &Cell, base_is_point: bool) -> Value {
    json!({
        "index": c.index,
        "dimension": c.dimension(base_is_point),
        "signs": signs(&c.signs),
        "x": real_json(&c.x),
        "y": {"value": c.y.to_string(), "approx": c.y.to_f64()},
    })
}

fn cad(spec: &ProblemSpec) -> CliResult<Output> {
    let (ps, vars) = family(spec, &["x", "y"])?;
    let d = cad2d(&ps).map_err(|e| at("/polys", e))?;
    let v = strs(&vars);
    let stacks: Vec<Value> = d
        .stacks
        .iter()
        .map(|s| {
            let cells: Vec<Value> = s.cells.iter().map(|c| cell_json(c, s.base.is_point())).collect();
            json!({"base": line_cell_json(&s.base), "cells": cells})
        })
        .collect();
    let projection: Vec<String> = d.projection.iter().map(|p| p.canonical_string(&v[..1])).collect();
    Ok(json!({"num_cells": d.num_cells(), "projection": projection, "stacks": stacks}).into())
}

fn growth(spec: &ProblemSpec) -> CliResult<Output> {
    let (ps, _) = family(spec, &["x", "y"])?;
    let sel = formula(&need(&spec.formula, "selector formula (--selector)")?, "/formula")?;
    let p = need(&spec.params.p, "claimed exponent (--p)")?;
    let lo = rational(&need(&spec.params.x_min, "window start (--x-min)")?, "/params/x_min")?;
    let hi = rational(&need(&spec.params.x_max, "window end (--x-max)")?, "/params/x_max")?;
    let n = spec.params.samples.unwrap_or_else(|| default_growth_samples((&lo, &hi)));
    let r = growth_check(&ps, &sel, p, (lo, hi), n).map_err(|e| at("", e))?;
    Ok(serde_json::to_value(&r).expect("report serializes").into())
}

fn dist(spec: &ProblemSpec) -> CliResult<Output> {
    let x = rationals(&need(&spec.point, "query point (--point)")?, "/point")?;
    if let Some(pts) = &spec.points {
        let m = point_set(pts, "/points")?;
        let (sq, approx) = dist_to_finite(&m, &x).map_err(|e| at("/point", e))?;
        let theta = dist_formula_finite(&m);
        return Ok(json!({
            "kind": "finite",
            "squared": rational_string(&sq),
            "value": approx,
            "formula": theta.to_json(),
        })
        .into());
    }
    let phi = formula(&need(&spec.formula, "point set (--points) or formula (--formula)")?, "/formula")?;
    if x.len() != 1 {
        return Err(at("/point", Error::ArityMismatch { expected: 1, got: x.len() }));
    }
    let d = dist_1d(&phi, &x[0]).map_err(|e| at("/formula", e))?;
    Ok(json!({
        "kind": "line",
        "value": d.value.to_string(),
        "approx": d.value.to_f64(),
        "witness": line_cell_json(&d.witness),
    })
    .into())
}

fn residual(spec: &ProblemSpec) -> CliResult<Output> {
    if let Some(m) = &spec.matrix {
        let rows = m.iter().enumerate().map(|(i, r)| rationals(r, &format!("/matrix/{i}"))).collect::<CliResult<Vec<_>>>()?;
        let vars = spec.var_names(&strs(&default_var_names(rows.len() * rows.len())));
        let g = polys(&spec.ineqs.clone().unwrap_or_default(), &vars, "/ineqs")?;
        let r = residual_sdp(&g, &rows).map_err(|e| at("/matrix", e))?;
        return Ok(json!({
            "kind": "sdp",
            "lam_min_part": r.lam_min_part,
            "minor_part": rational_string(&r.minor_part),
            "constraint_part": rational_string(&r.constraint_part),
            "value": r.total(),
        })
        .into());
    }
    let x = rationals(&need(&spec.point, "point (--point)")?, "/point")?;
    let vars = spec.var_names(&strs(&default_var_names(x.len())));
    let g = polys(&spec.ineqs.clone().unwrap_or_default(), &vars, "/ineqs")?;
    let h = polys(&spec.eqs.clone().unwrap_or_default(), &vars, "/eqs")?;
    let psi = residual_psi(&g, &h, &x).map_err(|e| at("/point", e))?;
    Ok(json!({"kind": "system", "value": rational_string(&psi), "approx": rational_to_f64(&psi)}).into())
}

fn bounds(spec: &ProblemSpec) -> CliResult<Output> {
    let p = &spec.params;
    let d = need(&p.d, "degree (--d)")?;
    let n = need(&p.n, "dimension (--n)")?;
    let mut inp = BoundInputs::new(d, n);
    inp.r = p.r.unwrap_or(inp.r);
    inp.s = p.s.unwrap_or(inp.s);
    inp.d_bar = p.d_bar.unwrap_or(inp.d_bar);
    inp.r_bar = p.r_bar.unwrap_or(inp.r_bar);
    inp.p = p.p;
    let rep = comparator_bounds(inp).map_err(|e| at("/params", e))?;
    let mut json = serde_json::to_value(&rep).expect("report serializes");
    if let Some(v) = rep.integer("loja") {
        json["loja_bound"] = v.to_string().into();
    }
    Ok(Output { json, csv: None, table: Some(rep.table()) })
}

fn seed(spec: &ProblemSpec) -> u64 {
    spec.params.seed.unwrap_or(0)
}

fn estimate_loja(spec: &ProblemSpec) -> CliResult<Output> {
    let p = &spec.params;
    let (f, g, curve, domain, vars, expected) = if spec.example_paper == Some(true) {
        let ex = paper_example(need(&p.d, "degree (--d)")?, need(&p.n, "dimension (--n)")?)
            .map_err(|e| at("/params", e))?;
        let expected = (ex.expected_exponent(), ex.d, ex.n);
        (ex.f, ex.g, Some(ex.curve), Some(ex.domain), ex.vars, Some(expected))
    } else {
        let g_spec = need(&spec.g, "g")?;
        let n = spec.vars.as_ref().map(Vec::len).or(spec.curve.as_ref().map(Vec::len)).unwrap_or(1);
        let vars = spec.var_names(&strs(&default_var_names(n)));
        let f = semialg_fn(&need(&spec.f, "f")?, &vars, "/f")?;
        let g = semialg_fn(&g_spec, &vars, "/g")?;
        let curve = match &spec.curve {
            Some(c) => Some(CurveSpec::new(polys(c, &["t".to_string()], "/curve")?).map_err(|e| at("/curve", e))?),
            None => None,
        };
        let domain = match &spec.formula {
            Some(fj) => Some(formula(fj, "/formula")?),
            None => None,
        };
        (f, g, curve, domain, vars, None)
    };
    let (fe, ge) = (f.compile(), g.compile());
    let (fe, ge) = (|x: &[f64]| fe.eval(x), |x: &[f64]| ge.eval(x));
    let estimator = p.estimator.clone().unwrap_or_else(|| "curve".into());
    let (est, csv) = match estimator.as_str() {
        "curve" => {
            let curve = curve.ok_or_else(|| CliError::Missing("curve (--curve)".into()))?;
            if curve.dim() != vars.len() {
                return Err(at("/curve", Error::ArityMismatch { expected: vars.len(), got: curve.dim() }));
            }
            let rows = curve_samples(
                fe,
                ge,
                &curve,
                p.t_max.unwrap_or(DEFAULT_T_MAX),
                p.decades.unwrap_or(DEFAULT_DECADES),
                p.samples_per_decade.unwrap_or(DEFAULT_SAMPLES_PER_DECADE),
            )
            .map_err(|e| at("/params", e))?;
            (loja_from_rows(&rows).map_err(|e| at("", e))?, Some(curve_csv(&rows)))
        }
        "cloud" => {
            let domain = domain.unwrap_or_else(|| everything(vars.len()));
            let bbox = p.bbox.clone().unwrap_or_else(|| vec![(-1.0, 1.0); vars.len()]);
            let s = sample_region(&domain, &bbox, p.count.unwrap_or(DEFAULT_COUNT), seed(spec))
                .map_err(|e| at("/params", e))?;
            (estimate_loja_cloud(fe, ge, &s, p.g_ceiling.unwrap_or(DEFAULT_G_CEILING)).map_err(|e| at("", e))?, None)
        }
        other => return Err(at("/params/estimator", Error::InvalidInput(format!("unknown estimator {other:?}")))),
    };
    let mut json = json!({
        "estimator": estimator,
        "exponent": est.exponent,
        "intercept": est.intercept,
        "r_squared": est.r_squared,
        "sample_count": est.sample_count,
        "window": est.window,
        "seed": seed(spec),
        "warnings": est.warnings,
    });
    if let Some((e, d, n)) = expected {
        json["expected"] = e.into();
        if let Ok(cap) = semialg::bounds::loja_bound(d, n) {
            let below = BigInt::from_f64(est.exponent.ceil()).is_some_and(|v| v <= cap);
            json["loja_bound"] = cap.to_string().into();
            json["within_bound"] = below.into();
        }
    }
    Ok(Output { json, csv, table: None })
}

fn everything(n: usize) -> Formula {
    Formula::new(n, Node::And(vec![])).expect("empty conjunction")
}

fn estimate_errorbound(spec: &ProblemSpec) -> CliResult<Output> {
    let p = &spec.params;
    let n = spec
        .vars
        .as_ref()
        .map(Vec::len)
        .or(p.bbox.as_ref().map(Vec::len))
        .ok_or_else(|| CliError::Missing("vars or box".into()))?;
    let vars = spec.var_names(&strs(&default_var_names(n)));
    let psi: SemiAlgFn = semialg_fn(&need(&spec.f, "residual (--psi)")?, &vars, "/f")?;
    let dist: SemiAlgFn = semialg_fn(&need(&spec.g, "distance (--dist)")?, &vars, "/g")?;
    let domain = match &spec.formula {
        Some(fj) => formula(fj, "/formula")?,
        None => everything(vars.len()),
    };
    let bbox = p.bbox.clone().unwrap_or_else(|| vec![(-1.0, 1.0); vars.len()]);
    let s = sample_region(&domain, &bbox, p.count.unwrap_or(DEFAULT_COUNT), seed(spec)).map_err(|e| at("/params", e))?;
    let (pe, de) = (psi.compile(), dist.compile());
    let table = envelope(|x| pe.eval(x), |x| de.eval(x), &s, p.bins.unwrap_or(DEFAULT_BINS)).map_err(|e| at("", e))?;
    let est = estimate_error_exponent(&table).map_err(|e| at("", e))?;
    let e = &est.estimate;
    let mut json = json!({
        "rho": e.exponent,
        "gamma": est.gamma,
        "exponent": e.exponent,
        "intercept": e.intercept,
        "r_squared": e.r_squared,
        "sample_count": e.sample_count,
        "window": e.window,
        "seed": seed(spec),
        "acceptance": s.acceptance(),
        "rows": table.rows.len(),
        "warnings": e.warnings,
    });
    // Size of the point cloud standing in for M.
    if let SemiAlgFn::DistPoints(pts) = &dist {
        json["dist_cloud_points"] = json!(pts.len());
    }
    Ok(Output { json, csv: Some(table.to_csv()), table: None })
}

fn newton(spec: &ProblemSpec) -> CliResult<Output> {
    let (p, _) = single(spec, &["e", "y"])?;
    let gamma = newton_min_exponent(&p).map_err(|e| at("/polys/0", e))?;
    let hull = newton_hull(&p).map_err(|e| at("/polys/0", e))?;
    Ok(json!({
        "gamma": rational_string(&gamma),
        "approx": rational_to_f64(&gamma),
        "degree": p.total_degree().to_string(),
        "hull": hull,
    })
    .into())
}

fn sos(spec: &ProblemSpec) -> CliResult<Output> {
    let p = &spec.params;
    let v = sos_rate(
        p.c.unwrap_or(1.0),
        p.f_norm.unwrap_or(1.0),
        p.deg_f.unwrap_or(1),
        need(&p.n, "dimension (--n)")?,
        need(&p.rho, "exponent (--rho)")?,
        need(&p.t, "relaxation order (--t)")?,
    )
    .map_err(|e| at("/params", e))?;
    Ok(json!({"rate": v}).into())
}

fn descent(spec: &ProblemSpec) -> CliResult<Output> {
    let p = &spec.params;
    let v = descent_rate(need(&p.rho, "exponent (--rho)")?, need(&p.k, "iteration (--k)")?)
        .map_err(|e| at("/params", e))?;
    Ok(json!({"rate": v}).into())
}
