//! JSON encoding of bodies, matrices and reports.
//!
//! Bodies look like `{"dim":4,"rep":{"kind":"v-polytope","generators":[[1,0,0,0],...]}}`.
//! Float scalars are JSON numbers; exact scalars are `"num/den"` strings.
//! Non-finite floats are written as the strings `"inf"`, `"-inf"`, `"nan"`.

use anyhow::{anyhow, bail, Context, Result};
use serde_json::{json, Map, Value};
use tensorbody_core::bm_distance::DistanceReport;
use tensorbody_core::tensoriality::{SectionFamily, TensorialityReport, Violation};
use tensorbody_core::{Body, Matrix, Rational, Representation, Scalar, TensorMap};

pub trait JsonScalar: Scalar {
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self>;
}

/// A float as JSON, with non-finite values spelled out.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x.is_nan() {
        json!("nan")
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

fn parse_special(s: &str) -> Option<f64> {
    match s.trim() {
        "inf" | "+inf" | "infinity" => Some(f64::INFINITY),
        "-inf" | "-infinity" => Some(f64::NEG_INFINITY),
        "nan" => Some(f64::NAN),
        _ => None,
    }
}

/// Parse `a/b`, integers and decimals (with optional exponent) exactly.
pub fn parse_exact(s: &str) -> Option<Rational> {
    let s = s.trim();
    if s.contains('/') {
        return s.parse::<Rational>().ok();
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    let all: String = [int, frac].concat();
    if !all.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let numer: Rational = format!("{}/1", if all.is_empty() { "0" } else { &all }).parse().ok()?;
    let shift = exp - frac.len() as i32;
    let ten = Rational::from_ratio(10, 1);
    let mut r = numer;
    for _ in 0..shift.unsigned_abs() {
        r = if shift > 0 { r * ten.clone() } else { r / ten.clone() };
    }
    Some(if neg { -r } else { r })
}

impl JsonScalar for f64 {
    fn to_json(&self) -> Value {
        num(*self)
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Number(n) => n.as_f64().ok_or_else(|| anyhow!("number {n} out of range")),
            Value::String(s) => parse_special(s)
                .or_else(|| parse_exact(s).map(|r| Scalar::to_f64(&r)))
                .ok_or_else(|| anyhow!("cannot parse scalar {s:?}")),
            other => bail!("expected a scalar, found {other}"),
        }
    }
}

impl JsonScalar for Rational {
    fn to_json(&self) -> Value {
        json!(format!("{}/{}", self.numer(), self.denom()))
    }

    fn from_json(v: &Value) -> Result<Self> {
        let text = match v {
            Value::Number(n) => n.to_string(),
            Value::String(s) => s.clone(),
            other => bail!("expected a scalar, found {other}"),
        };
        parse_exact(&text).ok_or_else(|| anyhow!("cannot parse {text:?} as an exact rational"))
    }
}

pub fn vec_to_json<S: JsonScalar>(v: &[S]) -> Value {
    Value::Array(v.iter().map(JsonScalar::to_json).collect())
}

pub fn vecs_to_json<S: JsonScalar>(vs: &[Vec<S>]) -> Value {
    Value::Array(vs.iter().map(|v| vec_to_json(v)).collect())
}

pub fn vec_from_json<S: JsonScalar>(v: &Value) -> Result<Vec<S>> {
    v.as_array()
        .ok_or_else(|| anyhow!("expected an array of scalars"))?
        .iter()
        .map(S::from_json)
        .collect()
}

pub fn vecs_from_json<S: JsonScalar>(v: &Value) -> Result<Vec<Vec<S>>> {
    v.as_array()
        .ok_or_else(|| anyhow!("expected an array of vectors"))?
        .iter()
        .map(vec_from_json)
        .collect()
}

pub fn matrix_to_json<S: JsonScalar>(m: &Matrix<S>) -> Value {
    vecs_to_json(&m.to_rows())
}

/// Accepts nested rows, or a flat row-major array of square length.
pub fn matrix_from_json<S: JsonScalar>(v: &Value) -> Result<Matrix<S>> {
    let arr = v.as_array().ok_or_else(|| anyhow!("expected a matrix"))?;
    if arr.first().is_some_and(Value::is_array) {
        return Ok(Matrix::from_rows(&vecs_from_json::<S>(v)?)?);
    }
    let flat: Vec<S> = vec_from_json(v)?;
    let n = (flat.len() as f64).sqrt().round() as usize;
    if n * n != flat.len() {
        bail!("flat matrix of length {} is not square", flat.len());
    }
    Ok(Matrix::from_row_major(n, n, flat)?)
}

pub fn body_to_json<S: JsonScalar>(b: &Body<S>) -> Value {
    let rep = match b.rep() {
        Representation::VPolytope { generators } => json!({"kind": "v-polytope", "generators": vecs_to_json(generators)}),
        Representation::HPolytope { normals } => json!({"kind": "h-polytope", "normals": vecs_to_json(normals)}),
        Representation::Ellipsoid { matrix } => json!({"kind": "ellipsoid", "matrix": matrix_to_json(matrix)}),
        Representation::LpBall { p } => json!({"kind": "lp-ball", "p": num(*p)}),
    };
    json!({"dim": b.dim(), "rep": rep})
}

pub fn body_from_json<S: JsonScalar>(v: &Value) -> Result<Body<S>> {
    let dim = v.get("dim").and_then(Value::as_u64).context("body needs an integer \"dim\"")? as usize;
    let rep = v.get("rep").context("body needs a \"rep\" object")?;
    let kind = rep.get("kind").and_then(Value::as_str).context("\"rep\" needs a \"kind\"")?;
    let field = |name: &str| rep.get(name).with_context(|| format!("{kind} needs \"{name}\""));
    let body = match kind {
        "v-polytope" => Body::v_polytope(vecs_from_json(field("generators")?)?)?,
        "h-polytope" => Body::h_polytope(vecs_from_json(field("normals")?)?)?,
        "ellipsoid" => Body::ellipsoid(matrix_from_json(field("matrix")?)?)?,
        "lp-ball" => Body::lp_ball(dim, f64::from_json(field("p")?)?)?,
        other => bail!("unknown body kind {other:?}"),
    };
    if body.dim() != dim {
        bail!("\"dim\" is {dim} but the representation lives in dimension {}", body.dim());
    }
    Ok(body)
}

pub fn tensor_map_to_json<S: JsonScalar>(t: &TensorMap<S>) -> Value {
    json!({
        "shape": t.shape().dims(),
        "sigma": t.sigma(),
        "factors": t.factors().iter().map(matrix_to_json).collect::<Vec<_>>(),
    })
}

pub fn sections_to_json<S: JsonScalar>(f: &SectionFamily<S>) -> Value {
    json!({
        "anchor": vecs_to_json(&f.anchor.factors),
        "sections": f.sections.iter().map(body_to_json).collect::<Vec<_>>(),
    })
}

pub fn violation_to_json<S: JsonScalar>(v: &Violation<S>) -> Value {
    match v {
        Violation::ProductPointOutside { factors, gauge } => json!({
            "kind": "product-point-outside",
            "factors": vecs_to_json(factors),
            "gauge": gauge.to_json(),
        }),
        Violation::InjectiveConstraint { point, functional, value } => json!({
            "kind": "injective-constraint",
            "point": vec_to_json(point),
            "functional": vecs_to_json(functional),
            "value": value.to_json(),
        }),
    }
}

pub fn tensoriality_to_json<S: JsonScalar>(r: &TensorialityReport<S>) -> Value {
    json!({
        "verdict": r.verdict,
        "sections": sections_to_json(&r.sections),
        "violation": r.violation.as_ref().map(violation_to_json),
        "pi_inclusion": r.pi_inclusion.to_json(),
        "eps_inclusion": r.eps_inclusion.to_json(),
    })
}

pub fn distance_to_json<S: JsonScalar>(r: &DistanceReport<S>) -> Value {
    let mut m = Map::new();
    m.insert("upper".into(), r.upper.to_json());
    m.insert("upper_f64".into(), num(r.upper.to_f64()));
    m.insert("witness".into(), matrix_to_json(&r.witness));
    m.insert("witness_map".into(), r.witness_map.as_ref().map(tensor_map_to_json).unwrap_or(Value::Null));
    m.insert("product_bound".into(), r.product_bound.map(num).unwrap_or(Value::Null));
    m.insert("diameter_bound".into(), num(r.diameter_bound));
    m.insert("restarts_used".into(), json!(r.restarts_used));
    Value::Object(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_decimals() {
        assert_eq!(parse_exact("0.25"), Some(Rational::from_ratio(1, 4)));
        assert_eq!(parse_exact("-3/6"), Some(Rational::from_ratio(-1, 2)));
        assert_eq!(parse_exact("1e-2"), Some(Rational::from_ratio(1, 100)));
        assert_eq!(parse_exact("12"), Some(Rational::from_ratio(12, 1)));
        assert_eq!(parse_exact("abc"), None);
        assert_eq!(parse_exact("."), None);
    }

    #[test]
    fn body_round_trip() {
        let b = Body::<Rational>::standard_ball(3, 1.0, true).unwrap();
        let v = body_to_json(&b);
        assert_eq!(v["rep"]["generators"][0][0], json!("1/1"));
        assert_eq!(body_from_json::<Rational>(&v).unwrap(), b);
        let l = Body::<f64>::lp_ball(4, f64::INFINITY).unwrap();
        let v = body_to_json(&l);
        assert_eq!(v["rep"]["p"], json!("inf"));
        assert_eq!(body_from_json::<f64>(&v).unwrap(), l);
    }

    #[test]
    fn flat_matrices() {
        let v = json!({"dim": 2, "rep": {"kind": "ellipsoid", "matrix": [2, 0, 0, 1]}});
        let b = body_from_json::<f64>(&v).unwrap();
        assert_eq!(b.gauge_value(&[0.0, 3.0]).unwrap(), 3.0);
        let bad = json!({"dim": 3, "rep": {"kind": "ellipsoid", "matrix": [2, 0, 0, 1]}});
        assert!(body_from_json::<f64>(&bad).is_err());
    }
}
