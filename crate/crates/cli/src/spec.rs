//! Problem files: everything a subcommand reads, as one JSON document.
//! Command-line flags are merged into it before a run, and `--dump-spec`
//! prints the merged result.

use std::path::Path;

use serde::{Deserialize, Serialize};

use semialg::estimate::SemiAlgFn;
use semialg::formulas::{Formula, FormulaJson, PointSet};
use semialg::scalar::parse_rational;
use semialg::{parse_poly, Error, Poly, Rational};

/// A semi-algebraic function given by polynomial texts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum FnSpec {
    AbsSum(Vec<String>),
    Norm(Vec<String>),
    Residual {
        #[serde(default)]
        ineqs: Vec<String>,
        #[serde(default)]
        eqs: Vec<String>,
    },
    DistPoints(Vec<Vec<String>>),
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_bar: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_bar: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_min: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_max: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decades: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples_per_decade: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub estimator: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_ceiling: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bins: Option<usize>,
    #[serde(default, rename = "box", skip_serializing_if = "Option::is_none")]
    pub bbox: Option<Vec<(f64, f64)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f_norm: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deg_f: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vars: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polys: Option<Vec<String>>,
    /// Region membership, growth selector, or the set whose distance is
    /// asked for, depending on the command.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub formula: Option<FormulaJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<FnSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<FnSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ineqs: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eqs: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub example_paper: Option<bool>,
    #[serde(default)]
    pub params: Params,
}

/// Problem-file failure with the JSON pointer of the offending value.
#[derive(Debug)]
pub struct SpecError {
    pub pointer: String,
    pub message: String,
}

impl std::fmt::Display for SpecError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.pointer.is_empty() {
            write!(f, "{}", self.message)
        } else {
            write!(f, "at {}: {}", self.pointer, self.message)
        }
    }
}

fn pointer_of(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        out.push('/');
        match seg {
            Segment::Seq { index } => out.push_str(&index.to_string()),
            Segment::Map { key } | Segment::Enum { variant: key } => out.push_str(&key.replace('~', "~0").replace('/', "~1")),
            Segment::Unknown => out.push('?'),
        }
    }
    out
}

impl ProblemSpec {
    pub fn from_json(text: &str) -> Result<Self, SpecError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de)
            .map_err(|e| SpecError { pointer: pointer_of(e.path()), message: e.inner().to_string() })
    }

    pub fn load(path: &Path) -> Result<Self, SpecError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| SpecError { pointer: String::new(), message: format!("{}: {e}", path.display()) })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    pub fn var_names(&self, default: &[&str]) -> Vec<String> {
        self.vars.clone().unwrap_or_else(|| default.iter().map(|s| s.to_string()).collect())
    }
}

/// Errors from interpreting a spec, tagged with where they came from.
pub fn at(pointer: &str, e: Error) -> CliError {
    CliError::Core { pointer: pointer.to_string(), error: e }
}

#[derive(Debug)]
pub enum CliError {
    Spec(SpecError),
    Core { pointer: String, error: Error },
    Missing(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core { error, .. } if error.is_numeric() => 2,
            _ => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Spec(e) => write!(f, "problem file {e}"),
            CliError::Core { pointer, error } if pointer.is_empty() => write!(f, "{error}"),
            CliError::Core { pointer, error } => write!(f, "at {pointer}: {error}"),
            CliError::Missing(what) => write!(f, "missing input: {what}"),
            CliError::Io(m) => write!(f, "{m}"),
        }
    }
}

impl From<SpecError> for CliError {
    fn from(e: SpecError) -> Self {
        CliError::Spec(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn polys(texts: &[String], vars: &[String], pointer: &str) -> CliResult<Vec<Poly>> {
    let v: Vec<&str> = vars.iter().map(String::as_str).collect();
    texts.iter().enumerate().map(|(i, t)| parse_poly(t, &v).map_err(|e| at(&format!("{pointer}/{i}"), e))).collect()
}

pub fn rational(text: &str, pointer: &str) -> CliResult<Rational> {
    parse_rational(text).ok_or_else(|| at(pointer, Error::InvalidInput(format!("not a rational number: {text:?}"))))
}

pub fn rationals(texts: &[String], pointer: &str) -> CliResult<Vec<Rational>> {
    texts.iter().enumerate().map(|(i, t)| rational(t, &format!("{pointer}/{i}"))).collect()
}

pub fn formula(json: &FormulaJson, pointer: &str) -> CliResult<Formula> {
    Formula::from_json(json).map_err(|e| at(pointer, e))
}

pub fn point_set(points: &[Vec<String>], pointer: &str) -> CliResult<PointSet> {
    let pts = points.iter().enumerate().map(|(i, p)| rationals(p, &format!("{pointer}/{i}"))).collect::<CliResult<_>>()?;
    PointSet::new(pts).map_err(|e| at(pointer, e))
}

pub fn semialg_fn(spec: &FnSpec, vars: &[String], pointer: &str) -> CliResult<SemiAlgFn> {
    Ok(match spec {
        FnSpec::AbsSum(ps) => SemiAlgFn::AbsSum(polys(ps, vars, &format!("{pointer}/abs_sum"))?),
        FnSpec::Norm(ps) => SemiAlgFn::Norm(polys(ps, vars, &format!("{pointer}/norm"))?),
        FnSpec::Residual { ineqs, eqs } => SemiAlgFn::Residual {
            g: polys(ineqs, vars, &format!("{pointer}/residual/ineqs"))?,
            h: polys(eqs, vars, &format!("{pointer}/residual/eqs"))?,
        },
        FnSpec::DistPoints(pts) => {
            let set = point_set(pts, &format!("{pointer}/dist_points"))?;
            if set.arity() != vars.len() {
                return Err(at(pointer, Error::ArityMismatch { expected: vars.len(), got: set.arity() }));
            }
            SemiAlgFn::DistPoints(
                set.points().iter().map(|p| p.iter().map(semialg::scalar::rational_to_f64).collect()).collect(),
            )
        }
    })
}

/// `"a,b;c,d"` into rows of rational texts.
pub fn split_rows(text: &str) -> Vec<Vec<String>> {
    text.split(';').map(|row| row.split(',').map(|s| s.trim().to_string()).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reports_json_pointer() {
        let err = ProblemSpec::from_json(r#"{"params": {"d": "two"}}"#).unwrap_err();
        assert_eq!(err.pointer, "/params/d");
        let err = ProblemSpec::from_json(r#"{"polys": ["x", 3]}"#).unwrap_err();
        assert_eq!(err.pointer, "/polys/1");
        let err = ProblemSpec::from_json(r#"{"bogus": 1}"#).unwrap_err();
        assert!(err.message.contains("bogus"));
    }

    #[test]
    fn round_trips() {
        let text = r#"{"vars": ["x"], "f": {"abs_sum": ["x^3"]}, "g": {"dist_points": [["0"]]},
                       "params": {"box": [[-1.0, 1.0]], "seed": 3}}"#;
        let spec = ProblemSpec::from_json(text).unwrap();
        assert_eq!(ProblemSpec::from_json(&spec.to_json()).unwrap(), spec);
        assert_eq!(spec.params.bbox, Some(vec![(-1.0, 1.0)]));
    }

    #[test]
    fn split_rows_parses_matrices() {
        assert_eq!(split_rows("1, 2;3,4"), vec![vec!["1", "2"], vec!["3", "4"]]);
    }
}
