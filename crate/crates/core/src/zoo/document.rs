//! JSON function-spec documents.
//!
//! ```json
//! {"kind": "logistic", "b": [3, 4], "name": "optional label"}
//! ```
//!
//! Fields: `kind`, `b`, `offset`, `c`, `pieces` (objects with `b` and
//! `alpha`), `Q`, `name`, and `dim` for kinds whose dimension cannot be read
//! off an array (`norm`, `constant`).

use nalgebra::DMatrix;
use serde_json::{json, Map, Value};

use super::{AffinePiece, FunctionKind, FunctionSpec};
use crate::error::{Error, Result};
use crate::geometry::Vector;

const PSD_TOLERANCE: f64 = 1e-8;

fn parse_err(path: &str, message: impl Into<String>) -> Error {
    Error::Parse { path: path.to_string(), message: message.into() }
}

fn invalid(path: &str, message: impl Into<String>) -> Error {
    Error::Validation { path: path.to_string(), message: message.into() }
}

pub fn parse_function_spec(text: &str) -> Result<FunctionSpec> {
    let value: Value = serde_json::from_str(text).map_err(|e| parse_err("$", e.to_string()))?;
    parse_function_value(&value)
}

pub fn parse_function_value(value: &Value) -> Result<FunctionSpec> {
    let obj = value.as_object().ok_or_else(|| parse_err("$", "expected an object"))?;
    let kind_tag = obj
        .get("kind")
        .ok_or_else(|| parse_err("kind", "missing field"))?
        .as_str()
        .ok_or_else(|| parse_err("kind", "expected a string"))?;

    let allowed: &[&str] = match kind_tag {
        "norm" => &["dim"],
        "linear" => &["b", "offset", "dim"],
        "constant" => &["c", "dim"],
        "logistic" => &["b", "dim"],
        "maxaffine" => &["pieces", "dim"],
        "quadratic" => &["Q", "c", "dim"],
        "reciprocal-abs" => &["dim"],
        other => return Err(parse_err("kind", format!("unknown kind `{other}`"))),
    };
    for key in obj.keys() {
        if key != "kind" && key != "name" && !allowed.contains(&key.as_str()) {
            return Err(parse_err(key, format!("field not allowed for kind `{kind_tag}`")));
        }
    }

    let name = match obj.get("name") {
        None => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(_) => return Err(parse_err("name", "expected a string")),
    };
    let declared_dim = match obj.get("dim") {
        None => None,
        Some(v) => Some(
            v.as_u64()
                .filter(|&d| d >= 1)
                .ok_or_else(|| parse_err("dim", "expected a positive integer"))? as usize,
        ),
    };

    let (kind, inferred) = match kind_tag {
        "norm" => (FunctionKind::EuclideanNorm, None),
        "linear" => {
            let b = vector(obj, "b")?;
            let offset = match obj.get("offset") {
                None => 0.0,
                Some(v) => number(v, "offset")?,
            };
            let d = b.dim();
            (FunctionKind::Linear { b, offset }, Some(d))
        }
        "constant" => (FunctionKind::Constant { c: number(required(obj, "c")?, "c")? }, None),
        "logistic" => {
            let b = vector(obj, "b")?;
            let d = b.dim();
            (FunctionKind::Logistic { b }, Some(d))
        }
        "maxaffine" => {
            let raw = required(obj, "pieces")?
                .as_array()
                .ok_or_else(|| parse_err("pieces", "expected an array"))?;
            let mut pieces = Vec::with_capacity(raw.len());
            for (i, p) in raw.iter().enumerate() {
                let path = format!("pieces[{i}]");
                let po = p.as_object().ok_or_else(|| parse_err(&path, "expected an object"))?;
                if let Some(k) = po.keys().find(|k| *k != "b" && *k != "alpha") {
                    return Err(parse_err(&format!("{path}.{k}"), "unknown field"));
                }
                let b = vector_at(
                    po.get("b").ok_or_else(|| parse_err(&format!("{path}.b"), "missing field"))?,
                    &format!("{path}.b"),
                )?;
                let alpha = match po.get("alpha") {
                    None => 0.0,
                    Some(v) => number(v, &format!("{path}.alpha"))?,
                };
                pieces.push(AffinePiece { b, alpha });
            }
            if pieces.is_empty() {
                return Err(invalid("pieces", "at least one piece is required"));
            }
            let d = pieces.first().map(|p| p.b.dim());
            (FunctionKind::MaxAffine { pieces }, d)
        }
        "quadratic" => {
            let rows = required(obj, "Q")?
                .as_array()
                .ok_or_else(|| parse_err("Q", "expected an array of rows"))?;
            let mut q = Vec::with_capacity(rows.len());
            for (i, row) in rows.iter().enumerate() {
                let path = format!("Q[{i}]");
                let entries = row.as_array().ok_or_else(|| parse_err(&path, "expected an array"))?;
                q.push(
                    entries
                        .iter()
                        .enumerate()
                        .map(|(j, e)| number(e, &format!("{path}[{j}]")))
                        .collect::<Result<Vec<f64>>>()?,
                );
            }
            let c = match obj.get("c") {
                Some(v) => vector_at(v, "c")?,
                None if !q.is_empty() => Vector::zeros(q.len()),
                None => return Err(invalid("Q", "matrix must be nonempty")),
            };
            let d = c.dim();
            (FunctionKind::Quadratic { q, c }, Some(d))
        }
        "reciprocal-abs" => (FunctionKind::ReciprocalAbs, Some(1)),
        _ => unreachable!("kind checked above"),
    };

    let dim = match (declared_dim, inferred) {
        (Some(d), Some(i)) if d != i => {
            return Err(invalid("dim", format!("declared {d} but parameters have dimension {i}")))
        }
        (Some(d), _) => d,
        (None, Some(i)) => i,
        (None, None) => return Err(parse_err("dim", format!("required for kind `{kind_tag}`"))),
    };
    validate(&kind, dim)?;
    Ok(FunctionSpec { name, kind, dim })
}

fn required<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| parse_err(key, "missing field"))
}

fn number(v: &Value, path: &str) -> Result<f64> {
    v.as_f64().ok_or_else(|| parse_err(path, "expected a number"))
}

fn vector(obj: &Map<String, Value>, key: &str) -> Result<Vector> {
    vector_at(required(obj, key)?, key)
}

fn vector_at(v: &Value, path: &str) -> Result<Vector> {
    let arr = v.as_array().ok_or_else(|| parse_err(path, "expected an array of numbers"))?;
    if arr.is_empty() {
        return Err(invalid(path, "vector must have at least one entry"));
    }
    let coords = arr
        .iter()
        .enumerate()
        .map(|(i, e)| number(e, &format!("{path}[{i}]")))
        .collect::<Result<Vec<f64>>>()?;
    Vector::new(coords).map_err(|e| invalid(path, e.to_string()))
}

/// Checks dimensional agreement, piece count, and Q ⪰ 0.
pub(super) fn validate(kind: &FunctionKind, dim: usize) -> Result<()> {
    if dim == 0 {
        return Err(invalid("dim", "must be at least 1"));
    }
    let check = |path: &str, v: &Vector| {
        if v.dim() == dim {
            Ok(())
        } else {
            Err(invalid(path, format!("expected dimension {dim}, got {}", v.dim())))
        }
    };
    match kind {
        FunctionKind::EuclideanNorm => {}
        FunctionKind::Constant { c } => {
            if !c.is_finite() {
                return Err(invalid("c", "must be finite"));
            }
        }
        FunctionKind::Linear { b, offset } => {
            check("b", b)?;
            if !offset.is_finite() {
                return Err(invalid("offset", "must be finite"));
            }
        }
        FunctionKind::Logistic { b } => check("b", b)?,
        FunctionKind::MaxAffine { pieces } => {
            if pieces.is_empty() {
                return Err(invalid("pieces", "at least one piece is required"));
            }
            for (i, p) in pieces.iter().enumerate() {
                check(&format!("pieces[{i}].b"), &p.b)?;
                if !p.alpha.is_finite() {
                    return Err(invalid(&format!("pieces[{i}].alpha"), "must be finite"));
                }
            }
        }
        FunctionKind::Quadratic { q, c } => {
            check("c", c)?;
            if q.len() != dim {
                return Err(invalid("Q", format!("expected {dim} rows, got {}", q.len())));
            }
            for (i, row) in q.iter().enumerate() {
                if row.len() != dim {
                    return Err(invalid(
                        &format!("Q[{i}]"),
                        format!("expected {dim} entries, got {}", row.len()),
                    ));
                }
                if row.iter().any(|v| !v.is_finite()) {
                    return Err(invalid(&format!("Q[{i}]"), "entries must be finite"));
                }
            }
            check_psd(q)?;
        }
        FunctionKind::ReciprocalAbs => {
            if dim != 1 {
                return Err(invalid("dim", "reciprocal-abs is defined in dimension 1 only"));
            }
        }
    }
    Ok(())
}

#[allow(clippy::needless_range_loop)]
fn check_psd(q: &[Vec<f64>]) -> Result<()> {
    let n = q.len();
    for i in 0..n {
        for j in (i + 1)..n {
            if (q[i][j] - q[j][i]).abs() > PSD_TOLERANCE {
                return Err(invalid(
                    &format!("Q[{i}][{j}]"),
                    format!("matrix is not symmetric ({} vs {})", q[i][j], q[j][i]),
                ));
            }
        }
    }
    let m = DMatrix::from_fn(n, n, |i, j| q[i][j]);
    let min_eig = m.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min);
    if min_eig < -PSD_TOLERANCE {
        return Err(invalid("Q", format!("matrix is not positive semidefinite (eigenvalue {min_eig})")));
    }
    Ok(())
}

pub(super) fn to_value(spec: &FunctionSpec) -> Value {
    let mut obj = Map::new();
    obj.insert("kind".into(), json!(spec.kind.tag()));
    if let Some(name) = &spec.name {
        obj.insert("name".into(), json!(name));
    }
    match &spec.kind {
        FunctionKind::EuclideanNorm => {
            obj.insert("dim".into(), json!(spec.dim));
        }
        FunctionKind::Linear { b, offset } => {
            obj.insert("b".into(), json!(b.coords()));
            obj.insert("offset".into(), json!(offset));
        }
        FunctionKind::Constant { c } => {
            obj.insert("c".into(), json!(c));
            obj.insert("dim".into(), json!(spec.dim));
        }
        FunctionKind::Logistic { b } => {
            obj.insert("b".into(), json!(b.coords()));
        }
        FunctionKind::MaxAffine { pieces } => {
            let ps: Vec<Value> =
                pieces.iter().map(|p| json!({"b": p.b.coords(), "alpha": p.alpha})).collect();
            obj.insert("pieces".into(), Value::Array(ps));
        }
        FunctionKind::Quadratic { q, c } => {
            obj.insert("Q".into(), json!(q));
            obj.insert("c".into(), json!(c.coords()));
        }
        FunctionKind::ReciprocalAbs => {}
    }
    Value::Object(obj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo::catalog;

    #[test]
    fn parses_logistic() {
        let spec = parse_function_spec(r#"{"kind":"logistic","b":[3,4]}"#).unwrap();
        assert_eq!(spec, FunctionSpec::logistic(Vector::new(vec![3.0, 4.0]).unwrap()));
        assert_eq!(spec.dim, 2);
    }

    #[test]
    fn parses_abs_as_maxaffine() {
        let spec = parse_function_spec(
            r#"{"kind":"maxaffine","pieces":[{"b":[1,0],"alpha":0},{"b":[-1,0],"alpha":0}]}"#,
        )
        .unwrap();
        assert_eq!(spec.evaluate(&Vector::new(vec![-3.0, 7.0]).unwrap()).unwrap(), 3.0);
    }

    #[test]
    fn rejects_indefinite_quadratic() {
        let err = parse_function_spec(r#"{"kind":"quadratic","Q":[[1,2],[2,1]],"c":[0,0]}"#)
            .unwrap_err();
        match err {
            Error::Validation { path, message } => {
                assert_eq!(path, "Q");
                assert!(message.contains("-1"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn error_paths() {
        let cases = [
            (r#"[1,2]"#, "$", true),
            (r#"{"b":[1]}"#, "kind", true),
            (r#"{"kind":"cubic"}"#, "kind", true),
            (r#"{"kind":"logistic","b":[1,"x"]}"#, "b[1]", true),
            (r#"{"kind":"logistic","b":[1],"Q":[[1]]}"#, "Q", true),
            (r#"{"kind":"norm"}"#, "dim", true),
            (r#"{"kind":"linear","b":[1,2],"dim":3}"#, "dim", false),
            (r#"{"kind":"maxaffine","pieces":[]}"#, "pieces", false),
            (r#"{"kind":"maxaffine","pieces":[{"b":[1,0]},{"b":[1]}]}"#, "pieces[1].b", false),
            (r#"{"kind":"maxaffine","pieces":[{"b":[1],"beta":2}]}"#, "pieces[0].beta", true),
            (r#"{"kind":"quadratic","Q":[[1,0],[0]],"c":[0,0]}"#, "Q[1]", false),
            (r#"{"kind":"quadratic","Q":[[1,0.5],[0,1]]}"#, "Q[0][1]", false),
            (r#"{"kind":"reciprocal-abs","dim":2}"#, "dim", false),
            (r#"{"kind":"logistic","b":[]}"#, "b", false),
        ];
        for (doc, want_path, is_parse) in cases {
            match parse_function_spec(doc) {
                Err(Error::Parse { path, .. }) if is_parse => assert_eq!(path, want_path, "{doc}"),
                Err(Error::Validation { path, .. }) if !is_parse => {
                    assert_eq!(path, want_path, "{doc}")
                }
                other => panic!("{doc}: unexpected {other:?}"),
            }
        }
    }

    #[test]
    fn accepts_round_tripped_psd() {
        // eigenvalue -1e-12 from rounding is tolerated
        let spec = parse_function_spec(r#"{"kind":"quadratic","Q":[[1,1],[1,0.999999999999]]}"#);
        assert!(spec.is_ok(), "{spec:?}");
    }

    #[test]
    fn catalog_round_trips() {
        for spec in catalog() {
            let back = parse_function_value(&spec.to_value()).unwrap();
            assert_eq!(back, spec);
            let text = serde_json::to_string(&spec).unwrap();
            assert_eq!(serde_json::from_str::<FunctionSpec>(&text).unwrap(), spec);
        }
    }

    #[test]
    fn constant_needs_dim() {
        let spec = parse_function_spec(r#"{"kind":"constant","c":7,"dim":3,"name":"seven"}"#).unwrap();
        assert_eq!(spec.dim, 3);
        assert_eq!(spec.name(), Some("seven"));
    }
}
