//! JSON files for spaces and operators.
//!
//! ```json
//! {"kind":"polyhedral","mode":"exact","vertices":[["1","0"],["1/2","1"]]}
//! {"kind":"lp","n":3,"p":"inf"}
//! {"matrix":[[1,-1],[1,1]],"domain":{...},"codomain":{...}}
//! ```
//!
//! Exact mode writes rationals as `"p/q"` strings. Numbers in exact files
//! are read from their decimal text, so `0.1` means `1/10`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Map, Number, Value};

use crate::error::{Error, Result};
use crate::operators::Operator;
use crate::scalar::{Rational, Scalar};
use crate::space::{build_polyhedral, BuildOptions, Exponent, LpSpace, Mode, PolyhedralSpace, Space};

/// A space as read from disk. Exact polyhedral files keep their rational
/// data next to the float view used by most operations.
#[derive(Clone, Debug)]
pub struct LoadedSpace {
    pub space: Space,
    pub exact: Option<PolyhedralSpace<Rational>>,
}

impl LoadedSpace {
    pub fn mode(&self) -> Mode {
        if self.exact.is_some() {
            Mode::Exact
        } else {
            Mode::Float
        }
    }
}

impl From<Space> for LoadedSpace {
    fn from(space: Space) -> Self {
        LoadedSpace { space, exact: None }
    }
}

impl From<PolyhedralSpace<Rational>> for LoadedSpace {
    fn from(p: PolyhedralSpace<Rational>) -> Self {
        LoadedSpace {
            space: Space::Polyhedral(p.to_float()),
            exact: Some(p),
        }
    }
}

#[derive(Clone, Debug)]
pub struct LoadedOperator {
    pub op: Operator,
    pub exact: Option<Vec<Vec<Rational>>>,
    pub domain: LoadedSpace,
    pub codomain: LoadedSpace,
}

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

/// Reads `"p/q"`, an integer, or a decimal with optional exponent, exactly.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let bad = || parse_err(format!("not a rational number: '{t}'"));
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all: BigInt = format!("0{int}{frac}").parse().map_err(|_| bad())?;
    let shift = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut r = Rational::from_integer(all);
    if shift >= 0 {
        r *= Rational::from_integer(num_traits::pow(ten, shift as usize));
    } else {
        r /= Rational::from_integer(num_traits::pow(ten, (-shift) as usize));
    }
    Ok(if neg { -r } else { r })
}

pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn rational_of(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => parse_rational(&n.to_string()),
        other => Err(parse_err(format!("expected a number, found {other}"))),
    }
}

fn float_of(v: &Value) -> Result<f64> {
    match v {
        Value::Number(n) => n
            .to_string()
            .parse::<f64>()
            .map_err(|_| parse_err(format!("bad number {n}"))),
        Value::String(s) => match s.parse::<f64>() {
            Ok(x) => Ok(x),
            Err(_) => Ok(parse_rational(s)?.to_f64()),
        },
        other => Err(parse_err(format!("expected a number, found {other}"))),
    }
}

fn float_value(x: f64) -> Value {
    Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
}

fn rows_of<T>(v: &Value, what: &str, cell: impl Fn(&Value) -> Result<T>) -> Result<Vec<Vec<T>>> {
    let rows = v.as_array().ok_or_else(|| parse_err(format!("'{what}' must be an array of arrays")))?;
    rows.iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| parse_err(format!("'{what}' must be an array of arrays")))?
                .iter()
                .map(&cell)
                .collect()
        })
        .collect()
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| parse_err(format!("missing field '{key}'")))
}

/// `tol` overrides the float-mode tolerance; exact mode always uses 0.
pub fn space_from_value(v: &Value, tol: Option<f64>) -> Result<LoadedSpace> {
    let obj = v.as_object().ok_or_else(|| parse_err("space must be a JSON object"))?;
    let kind = field(obj, "kind")?.as_str().ok_or_else(|| parse_err("'kind' must be a string"))?;
    match kind {
        "polyhedral" => {
            let mode = match obj.get("mode").map(|m| m.as_str()) {
                None => "float",
                Some(Some(m)) => m,
                Some(None) => return Err(parse_err("'mode' must be a string")),
            };
            let verts = field(obj, "vertices")?;
            match mode {
                "exact" => {
                    let pts = rows_of(verts, "vertices", rational_of)?;
                    Ok(build_polyhedral(&pts, &BuildOptions::exact())?.into())
                }
                "float" => {
                    let pts = rows_of(verts, "vertices", float_of)?;
                    let mut opts = BuildOptions::float();
                    if let Some(t) = tol {
                        opts.tol = t;
                    }
                    Ok(Space::Polyhedral(build_polyhedral(&pts, &opts)?).into())
                }
                other => Err(parse_err(format!("unknown mode '{other}'"))),
            }
        }
        "lp" => {
            let n = field(obj, "n")?
                .as_u64()
                .ok_or_else(|| parse_err("'n' must be a positive integer"))? as usize;
            let p = match field(obj, "p")? {
                Value::String(s) if s == "inf" => f64::INFINITY,
                other => float_of(other)?,
            };
            let space = match tol {
                Some(t) => LpSpace::with_tol(n, Exponent::new(p)?, t)?,
                None => LpSpace::new(n, Exponent::new(p)?)?,
            };
            Ok(Space::Lp(space).into())
        }
        other => Err(parse_err(format!("unknown space kind '{other}'"))),
    }
}

pub fn space_from_json(text: &str, tol: Option<f64>) -> Result<LoadedSpace> {
    let v: Value = serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))?;
    space_from_value(&v, tol)
}

pub fn space_to_value(s: &LoadedSpace) -> Value {
    if let Some(p) = &s.exact {
        let verts: Vec<Vec<String>> = p
            .vertices()
            .iter()
            .map(|v| v.iter().map(format_rational).collect())
            .collect();
        return json!({"kind": "polyhedral", "mode": "exact", "vertices": verts});
    }
    match &s.space {
        Space::Polyhedral(p) => {
            let verts: Vec<Vec<Value>> = p
                .vertices()
                .iter()
                .map(|v| v.iter().map(|&c| float_value(c)).collect())
                .collect();
            json!({"kind": "polyhedral", "mode": "float", "vertices": verts})
        }
        Space::Lp(l) => {
            let p = match l.exponent() {
                Exponent::Infinity => json!("inf"),
                Exponent::Finite(p) => float_value(p),
            };
            json!({"kind": "lp", "n": l.dim(), "p": p})
        }
    }
}

pub fn space_to_json(s: &LoadedSpace) -> String {
    serde_json::to_string(&space_to_value(s)).expect("JSON values always serialize")
}

pub fn operator_from_value(v: &Value, tol: Option<f64>) -> Result<LoadedOperator> {
    let obj = v.as_object().ok_or_else(|| parse_err("operator must be a JSON object"))?;
    let domain = space_from_value(field(obj, "domain")?, tol)?;
    let codomain = space_from_value(field(obj, "codomain")?, tol)?;
    let m = field(obj, "matrix")?;
    let exact = if domain.exact.is_some() || codomain.exact.is_some() {
        Some(rows_of(m, "matrix", rational_of)?)
    } else {
        None
    };
    let rows = match &exact {
        Some(q) => q.iter().map(|r| r.iter().map(Scalar::to_f64).collect()).collect(),
        None => rows_of(m, "matrix", float_of)?,
    };
    let op = Operator::new(&rows, domain.space.clone(), codomain.space.clone())?;
    Ok(LoadedOperator {
        op,
        exact,
        domain,
        codomain,
    })
}

pub fn operator_from_json(text: &str, tol: Option<f64>) -> Result<LoadedOperator> {
    let v: Value = serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))?;
    operator_from_value(&v, tol)
}

pub fn operator_to_value(op: &LoadedOperator) -> Value {
    let matrix = match &op.exact {
        Some(q) => json!(q
            .iter()
            .map(|r| r.iter().map(format_rational).collect::<Vec<_>>())
            .collect::<Vec<_>>()),
        None => json!(op
            .op
            .rows()
            .iter()
            .map(|r| r.iter().map(|&c| float_value(c)).collect::<Vec<_>>())
            .collect::<Vec<_>>()),
    };
    json!({"matrix": matrix, "domain": space_to_value(&op.domain), "codomain": space_to_value(&op.codomain)})
}

/// Vector arguments on the command line: comma-separated numbers or `p/q`.
pub fn parse_vector(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|c| {
            let c = c.trim();
            c.parse::<f64>().or_else(|_| parse_rational(c).map(|r| r.to_f64()))
        })
        .collect::<Result<Vec<f64>>>()
        .map_err(|_| parse_err(format!("bad vector '{text}'")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(p), BigInt::from(d))
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("3/6").unwrap(), q(1, 2));
        assert_eq!(parse_rational("0.1").unwrap(), q(1, 10));
        assert_eq!(parse_rational("-1.25e-2").unwrap(), q(-1, 80));
        assert_eq!(parse_rational("12").unwrap(), q(12, 1));
        assert_eq!(parse_rational(".5").unwrap(), q(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert_eq!(format_rational(&q(-2, 4)), "-1/2");
        assert_eq!(format_rational(&q(4, 2)), "2");
    }

    #[test]
    fn exact_round_trip() {
        let text = r#"{"kind":"polyhedral","mode":"exact","vertices":[[1,0],["1/4",0.5],[-0.5,1]]}"#;
        let a = space_from_json(text, None).unwrap();
        assert_eq!(a.mode(), Mode::Exact);
        let out = space_to_json(&a);
        let b = space_from_json(&out, None).unwrap();
        assert_eq!(space_to_json(&b), out);
        assert_eq!(a.exact.unwrap().vertices(), b.exact.unwrap().vertices());
    }

    #[test]
    fn float_round_trip_is_bit_exact() {
        let third = 1.0f64 / 3.0;
        let text = format!(r#"{{"kind":"polyhedral","vertices":[[1,{third}],[{third},1],[-0.7,0.9]]}}"#);
        let a = space_from_json(&text, None).unwrap();
        let b = space_from_json(&space_to_json(&a), None).unwrap();
        let (pa, pb) = (a.space.as_polyhedral().unwrap(), b.space.as_polyhedral().unwrap());
        for (u, v) in pa.vertices().iter().zip(pb.vertices()) {
            for (x, y) in u.iter().zip(v.iter()) {
                assert_eq!(x.to_bits(), y.to_bits());
            }
        }
    }

    #[test]
    fn lp_and_operator() {
        let s = space_from_json(r#"{"kind":"lp","n":3,"p":"inf"}"#, None).unwrap();
        assert_eq!(space_to_json(&s), r#"{"kind":"lp","n":3,"p":"inf"}"#);
        let text = r#"{"matrix":[[1,-1],[1,1]],"domain":{"kind":"lp","n":2,"p":2.5},"codomain":{"kind":"lp","n":2,"p":"inf"}}"#;
        let op = operator_from_json(text, None).unwrap();
        assert_eq!(op.op.rows(), vec![vec![1.0, -1.0], vec![1.0, 1.0]]);
        let again = operator_from_value(&operator_to_value(&op), None).unwrap();
        assert_eq!(again.op.rows(), op.op.rows());
        assert!(operator_from_json(r#"{"matrix":[[1]],"domain":{"kind":"lp","n":2,"p":2},"codomain":{"kind":"lp","n":2,"p":2}}"#, None).is_err());
    }
}
