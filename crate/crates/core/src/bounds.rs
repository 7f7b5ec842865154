//! Closed-form exponent bounds evaluated exactly, and the rate formulas
//! that consume them.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Pow};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::Rational;

fn big(v: u64) -> BigInt {
    BigInt::from(v)
}

fn pow(base: u64, exp: u64) -> BigInt {
    Pow::pow(big(base), exp as u32)
}

fn need(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidInput(what.into()))
    }
}

/// `(8d)^(2(n+7))`, the Lojasiewicz exponent bound for `d`-degree data in
/// `n` variables.
pub fn loja_bound(d: u32, n: u32) -> Result<BigInt> {
    need(d >= 2, "loja_bound needs d >= 2")?;
    need(n >= 1, "loja_bound needs n >= 1")?;
    Ok(pow(8 * d as u64, 2 * (n as u64 + 7)))
}

/// Degree bound `8 d^2 (2k(2d+2)+2)(2d+3)(2d+6)^2(2d+5)^(2k-2)` after
/// eliminating `k` blocks.
pub fn belim_degree_bound(d: u32, k: u32) -> Result<BigInt> {
    need(d >= 2, "belim_degree_bound needs d >= 2")?;
    need(k >= 1, "belim_degree_bound needs k >= 1")?;
    let (d, k) = (d as u64, k as u64);
    Ok(big(8 * d * d)
        * big(2 * k * (2 * d + 2) + 2)
        * big(2 * d + 3)
        * pow(2 * d + 6, 2)
        * pow(2 * d + 5, 2 * k - 2))
}

/// `(8d)^(2n+10)`.
pub fn prop264_bound(d: u32, n: u32) -> Result<BigInt> {
    need(d >= 2, "prop264_bound needs d >= 2")?;
    need(n >= 1, "prop264_bound needs n >= 1")?;
    Ok(pow(8 * d as u64, 2 * n as u64 + 10))
}

/// One entry of a [`BoundReport`].
#[derive(Clone, Debug, PartialEq)]
pub enum BoundValue {
    Integer(BigInt),
    /// Gradient exponents, in `(0, 1)`.
    Rational(Rational),
    /// Asymptotic bound whose constants are not known.
    Symbolic(String),
    /// Inputs fall outside the formula's domain.
    Omitted(String),
}

impl fmt::Display for BoundValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundValue::Integer(v) => write!(f, "{v}"),
            BoundValue::Rational(v) => write!(f, "{v}"),
            BoundValue::Symbolic(s) => write!(f, "{s}"),
            BoundValue::Omitted(why) => write!(f, "omitted: {why}"),
        }
    }
}

impl Serialize for BoundValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        #[serde(tag = "kind", rename_all = "lowercase")]
        enum Repr<'a> {
            Integer { value: String },
            Rational { value: String, approx: f64 },
            Symbolic { value: &'a str },
            Omitted { reason: &'a str },
        }
        match self {
            BoundValue::Integer(v) => Repr::Integer { value: v.to_string() },
            BoundValue::Rational(v) => {
                Repr::Rational { value: crate::scalar::rational_string(v), approx: crate::scalar::rational_to_f64(v) }
            }
            BoundValue::Symbolic(v) => Repr::Symbolic { value: v },
            BoundValue::Omitted(r) => Repr::Omitted { reason: r },
        }
        .serialize(s)
    }
}

/// Parameters shared by the comparator bounds. `d_bar` and `r_bar` are the
/// degree and inequality count of a minimal description of the set and
/// graph; `p` is the matrix size for semidefinite systems.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BoundInputs {
    pub d: u32,
    pub n: u32,
    pub r: u32,
    pub s: u32,
    pub d_bar: u32,
    pub r_bar: u32,
    pub p: Option<u32>,
}

impl BoundInputs {
    pub fn new(d: u32, n: u32) -> Self {
        BoundInputs { d, n, r: 1, s: 0, d_bar: d, r_bar: 1, p: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub inputs: BoundInputs,
    pub entries: BTreeMap<String, BoundValue>,
}

impl BoundReport {
    pub fn get(&self, name: &str) -> Option<&BoundValue> {
        self.entries.get(name)
    }

    pub fn integer(&self, name: &str) -> Option<&BigInt> {
        match self.entries.get(name)? {
            BoundValue::Integer(v) => Some(v),
            _ => None,
        }
    }

    pub fn rational(&self, name: &str) -> Option<&Rational> {
        match self.entries.get(name)? {
            BoundValue::Rational(v) => Some(v),
            _ => None,
        }
    }

    /// Aligned two-column text table.
    pub fn table(&self) -> String {
        let w = self.entries.keys().map(String::len).max().unwrap_or(0);
        self.entries.iter().map(|(k, v)| format!("{k:<w$}  {v}\n")).collect()
    }
}

fn one_minus_inv(v: BigInt) -> Rational {
    Rational::one() - Rational::new(BigInt::one(), v)
}

fn half_plus(v: BigInt) -> BigInt {
    (v + 1) / 2
}

/// Evaluates the exponent bounds and the literature comparators at the
/// given parameters. Entries outside a formula's domain are omitted with a
/// reason rather than failing the whole report.
pub fn comparator_bounds(inp: BoundInputs) -> Result<BoundReport> {
    let BoundInputs { d, n, r, s, d_bar, r_bar, p } = inp;
    need(d >= 1 && n >= 1 && d_bar >= 1, "d, n and d_bar must be at least 1")?;
    let (d64, n64, r64, s64, db, rb) = (d as u64, n as u64, r as u64, s as u64, d_bar as u64, r_bar as u64);
    let mut e = BTreeMap::new();
    let mut put = |name: &str, v: BoundValue| {
        e.insert(name.to_string(), v);
    };
    let omitted = |why: &str| BoundValue::Omitted(why.to_string());

    match (loja_bound(d, n), prop264_bound(d, n)) {
        (Ok(a), Ok(b)) => {
            put("loja", BoundValue::Integer(a));
            put("prop264", BoundValue::Integer(b));
        }
        _ => {
            put("loja", omitted("needs d >= 2"));
            put("prop264", omitted("needs d >= 2"));
        }
    }

    // Kurdyka-Spodzieja-Szlachcinska, general and isolated-zero forms.
    put("kurdyka", BoundValue::Integer(big(db) * pow(6 * db - 3, n64 + s64 + rb - 1)));
    put("kurdyka_isolated", BoundValue::Integer(half_plus(pow(2 * db - 1, n64 + s64 + rb))));

    // Best known error bound and its compact-set refinement.
    let a = big(d64 + 1) * pow(3 * d64, n64 + r64 + s64 - 1);
    let b = big(d64) * pow(6 * d64 - 3, n64 + r64 - 1);
    put("lmp15", BoundValue::Integer(a.min(b)));
    put("lmp15_compact", BoundValue::Integer(half_plus(pow(2 * d64 - 1, n64 + r64))));

    // Kollar: B(n-1) d^n with B(m) = C(m, floor(m/2)).
    put("kollar", BoundValue::Integer(binomial(big(n64 - 1), big((n64 - 1) / 2)) * pow(d64, n64)));

    // Convex semi-algebraic sets.
    let convex_a = half_plus(pow(2 * d64 - 1, n64));
    let convex_b = binomial(big(n64 - 1), big((n64 - 1) / 2)) * pow(d64, n64);
    put("convex", BoundValue::Integer(convex_a.min(convex_b)));

    // Gradient inequality exponents.
    if d >= 2 {
        put("gradient_isolated", BoundValue::Rational(one_minus_inv(pow(d64 - 1, n64) + 1)));
        if n >= 2 {
            let a = big(d64) * pow(3 * d64 - 4, n64 - 1);
            let b = big(2 * d64) * pow(3 * d64 - 3, n64 - 2);
            put("gradient_dacunto_kurdyka", BoundValue::Rational(one_minus_inv(a.max(b))));
        } else {
            put("gradient_dacunto_kurdyka", omitted("needs n >= 2"));
        }
    } else {
        put("gradient_isolated", omitted("needs d >= 2"));
        put("gradient_dacunto_kurdyka", omitted("needs d >= 2"));
    }
    put("gradient_nash", BoundValue::Rational(one_minus_inv(big(2) * pow(2 * d64 - 1, 3 * n64 + 1))));

    // Bounds known only up to unstated constants.
    let sym = |s: &str| BoundValue::Symbolic(s.to_string());
    put("error_bound_general", sym("d^O(n^2)"));
    put("error_bound_finite", sym("d^O(n)"));
    put("loja_constant", sym("2^(tau d^O(n^2))"));
    put("solerno", sym("D^(c1 n)"));
    match p {
        Some(p) if p >= 1 => put("error_bound_sdp", sym("max{d,p}^O(p^4)")),
        _ => put("error_bound_sdp", omitted("needs the matrix size p")),
    }
    Ok(BoundReport { inputs: inp, entries: e })
}

/// Gap bound `c ||f|| deg(f)^(7/5) t^(-1/(2.5 n rho))` of the order-`t`
/// sum-of-squares relaxation.
pub fn sos_rate(c: f64, f_norm: f64, deg_f: u32, n: u32, rho: u32, t: u32) -> Result<f64> {
    need(t >= 1, "relaxation order t must be positive")?;
    need(c > 0.0 && f_norm > 0.0 && deg_f >= 1 && n >= 1 && rho >= 1, "sos_rate inputs must be positive")?;
    Ok(c * f_norm * (deg_f as f64).powf(1.4) * (t as f64).powf(-1.0 / (2.5 * n as f64 * rho as f64)))
}

/// Sublinear rate `k^(1 - rho)` of feasible descent.
pub fn descent_rate(rho: u32, k: u64) -> Result<f64> {
    need(rho >= 1 && k >= 1, "descent_rate needs rho >= 1 and k >= 1")?;
    Ok((k as f64).powi(1 - rho as i32))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(s: &str) -> BigInt {
        s.parse().unwrap()
    }

    // Repeated multiplication, independent of `Pow`.
    fn naive_pow(b: u64, e: u64) -> BigInt {
        (0..e).fold(BigInt::one(), |acc, _| acc * b)
    }

    #[test]
    fn loja_examples() {
        assert_eq!(loja_bound(2, 1).unwrap(), bi("18446744073709551616"));
        assert_eq!(loja_bound(2, 2).unwrap(), naive_pow(16, 18));
        assert!(loja_bound(3, 1).unwrap() > loja_bound(2, 1).unwrap());
        assert!(loja_bound(1, 1).is_err());
        assert!(loja_bound(2, 0).is_err());
    }

    #[test]
    fn belim_examples() {
        assert_eq!(belim_degree_bound(2, 1).unwrap(), big(313_600));
        assert!(belim_degree_bound(2, 1).unwrap() < big(16_777_216));
        assert!(belim_degree_bound(3, 2).unwrap() < naive_pow(24, 8));
        // 8*9 * (4*8+2) * 9 * 12^2 * 11^2 by hand.
        assert_eq!(belim_degree_bound(3, 2).unwrap(), big(72 * 34 * 9 * 144 * 121));
        assert!(belim_degree_bound(2, 0).is_err());
    }

    #[test]
    fn prop264_examples() {
        assert_eq!(prop264_bound(2, 1).unwrap(), big(281_474_976_710_656));
        assert_eq!(prop264_bound(2, 2).unwrap(), naive_pow(16, 14));
        assert_eq!(prop264_bound(2, 3).unwrap(), loja_bound(2, 1).unwrap());
        assert!(prop264_bound(1, 3).is_err());
    }

    #[test]
    fn comparator_examples() {
        let inp = BoundInputs { d: 2, n: 1, r: 1, s: 1, d_bar: 2, r_bar: 1, p: None };
        assert_eq!(comparator_bounds(inp).unwrap().integer("kurdyka"), Some(&big(162)));
        let rep = comparator_bounds(BoundInputs { s: 0, ..inp }).unwrap();
        assert_eq!(rep.integer("lmp15"), Some(&big(18)));
        assert_eq!(rep.integer("lmp15_compact"), Some(&big(5)));
        let rep = comparator_bounds(BoundInputs::new(2, 3)).unwrap();
        assert_eq!(rep.integer("kollar"), Some(&big(16)));
        let rep = comparator_bounds(BoundInputs::new(3, 2)).unwrap();
        assert_eq!(rep.rational("gradient_dacunto_kurdyka"), Some(&Rational::new(14.into(), 15.into())));
    }

    #[test]
    fn comparator_domains_and_ranges() {
        let rep = comparator_bounds(BoundInputs::new(1, 1)).unwrap();
        assert!(matches!(rep.get("loja"), Some(BoundValue::Omitted(_))));
        assert!(matches!(rep.get("gradient_isolated"), Some(BoundValue::Omitted(_))));
        assert!(matches!(rep.get("error_bound_sdp"), Some(BoundValue::Omitted(_))));
        for d in 2..6 {
            for n in 1..5 {
                let rep = comparator_bounds(BoundInputs { p: Some(2), ..BoundInputs::new(d, n) }).unwrap();
                for (name, v) in &rep.entries {
                    match v {
                        BoundValue::Integer(x) => assert!(*x >= BigInt::one(), "{name}"),
                        BoundValue::Rational(x) => {
                            assert!(*x > Rational::from_integer(0.into()) && *x < Rational::one(), "{name}")
                        }
                        BoundValue::Symbolic(_) => {}
                        BoundValue::Omitted(why) => assert!(n == 1 && name.contains("dacunto"), "{name}: {why}"),
                    }
                }
            }
        }
    }

    #[test]
    fn report_serializes_big_values_as_strings() {
        let rep = comparator_bounds(BoundInputs::new(2, 1)).unwrap();
        let v = serde_json::to_value(&rep).unwrap();
        assert_eq!(v["entries"]["loja"]["value"], "18446744073709551616");
        assert_eq!(v["entries"]["gradient_nash"]["kind"], "rational");
        assert!(rep.table().lines().count() == rep.entries.len());
    }

    #[test]
    fn rate_examples() {
        assert!((sos_rate(1.0, 1.0, 1, 1, 1, 1024).unwrap() - 0.0625).abs() < 1e-12);
        let a = sos_rate(1.0, 1.0, 1, 1, 1, 500).unwrap();
        let b = sos_rate(1.0, 1.0, 1, 1, 2, 500).unwrap();
        assert!((b - a.sqrt()).abs() < 1e-12);
        assert!(sos_rate(1.0, 1.0, 1, 1, 1, u32::MAX).unwrap() < 2e-4);
        assert!(sos_rate(1.0, 1.0, 1, 1, 1, 501).unwrap() < a);
        assert!(sos_rate(1.0, 1.0, 1, 1, 1, 0).is_err());
        assert_eq!(descent_rate(1, 12345).unwrap(), 1.0);
        assert!((descent_rate(2, 100).unwrap() - 0.01).abs() < 1e-15);
        assert!((descent_rate(3, 10).unwrap() - 0.01).abs() < 1e-15);
    }
}
