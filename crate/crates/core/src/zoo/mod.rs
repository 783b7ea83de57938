//! Catalog of test functions with known global Lipschitz moduli.
//!
//! | kind             | f(x)                   | global modulus ℓ |
//! |------------------|------------------------|------------------|
//! | `norm`           | ‖x‖                    | 1                |
//! | `linear`         | bᵀx + offset           | ‖b‖              |
//! | `constant`       | c                      | 0                |
//! | `logistic`       | ln(1 + e^{bᵀx})        | ‖b‖              |
//! | `maxaffine`      | maxᵢ (bᵢᵀx + αᵢ)       | maxᵢ ‖bᵢ‖        |
//! | `quadratic`      | xᵀQx + cᵀx, Q ⪰ 0      | ∞ unless Q = 0   |
//! | `reciprocal-abs` | 1/\|x\| (0 at 0), n=1  | n/a, non-convex  |

mod document;

use std::fmt;

use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

pub use document::{parse_function_spec, parse_function_value};

use crate::error::{Error, Result};
use crate::geometry::Vector;
use crate::objective::{checked, Convexity, Objective};

#[derive(Debug, Clone, PartialEq)]
pub struct AffinePiece {
    pub b: Vector,
    pub alpha: f64,
}

impl AffinePiece {
    fn at(&self, x: &Vector) -> f64 {
        self.b.dot(x) + self.alpha
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FunctionKind {
    EuclideanNorm,
    Linear { b: Vector, offset: f64 },
    Constant { c: f64 },
    Logistic { b: Vector },
    MaxAffine { pieces: Vec<AffinePiece> },
    /// `q` is row-major, symmetric positive semidefinite.
    Quadratic { q: Vec<Vec<f64>>, c: Vector },
    ReciprocalAbs,
}

impl FunctionKind {
    pub fn tag(&self) -> &'static str {
        match self {
            FunctionKind::EuclideanNorm => "norm",
            FunctionKind::Linear { .. } => "linear",
            FunctionKind::Constant { .. } => "constant",
            FunctionKind::Logistic { .. } => "logistic",
            FunctionKind::MaxAffine { .. } => "maxaffine",
            FunctionKind::Quadratic { .. } => "quadratic",
            FunctionKind::ReciprocalAbs => "reciprocal-abs",
        }
    }
}

/// Validated description of a zoo function. Construct through
/// [`parse_function_spec`] or the typed constructors below.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionSpec {
    name: Option<String>,
    kind: FunctionKind,
    dim: usize,
}

/// ℓ as a value that may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Modulus {
    Finite(f64),
    Infinite,
}

impl Modulus {
    pub fn finite(self) -> Option<f64> {
        match self {
            Modulus::Finite(v) => Some(v),
            Modulus::Infinite => None,
        }
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Modulus::Finite(v) => write!(f, "{v}"),
            Modulus::Infinite => f.write_str("infinite"),
        }
    }
}

impl Serialize for Modulus {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Modulus::Finite(v) => s.serialize_f64(*v),
            Modulus::Infinite => s.serialize_str("infinite"),
        }
    }
}

impl<'de> Deserialize<'de> for Modulus {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) if v >= 0.0 => Ok(Modulus::Finite(v)),
            Raw::Num(v) => Err(de::Error::custom(format!("negative modulus {v}"))),
            Raw::Text(t) if t == "infinite" => Ok(Modulus::Infinite),
            Raw::Text(t) => Err(de::Error::custom(format!("unknown modulus `{t}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalyticInfo {
    /// `None` when the function lies outside the convex theory (non-convex).
    pub global_modulus: Option<Modulus>,
    pub gradient_available: bool,
    /// Unit directions along which |f(Ru)|/R attains its limsup.
    pub direction_hints: Vec<Vector>,
}

impl FunctionSpec {
    pub fn new(kind: FunctionKind, dim: usize) -> Result<Self> {
        document::validate(&kind, dim)?;
        Ok(FunctionSpec { name: None, kind, dim })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn norm(dim: usize) -> Self {
        Self::new(FunctionKind::EuclideanNorm, dim).expect("dim ≥ 1")
    }

    pub fn constant(c: f64, dim: usize) -> Result<Self> {
        Self::new(FunctionKind::Constant { c }, dim)
    }

    pub fn linear(b: Vector, offset: f64) -> Result<Self> {
        let dim = b.dim();
        Self::new(FunctionKind::Linear { b, offset }, dim)
    }

    pub fn logistic(b: Vector) -> Self {
        let dim = b.dim();
        FunctionSpec { name: None, kind: FunctionKind::Logistic { b }, dim }
    }

    pub fn max_affine(pieces: Vec<AffinePiece>) -> Result<Self> {
        let dim = pieces.first().map(|p| p.b.dim()).ok_or_else(|| Error::Validation {
            path: "pieces".into(),
            message: "at least one piece is required".into(),
        })?;
        Self::new(FunctionKind::MaxAffine { pieces }, dim)
    }

    pub fn quadratic(q: Vec<Vec<f64>>, c: Vector) -> Result<Self> {
        let dim = c.dim();
        Self::new(FunctionKind::Quadratic { q, c }, dim)
    }

    pub fn reciprocal_abs() -> Self {
        FunctionSpec { name: None, kind: FunctionKind::ReciprocalAbs, dim: 1 }
    }

    pub fn kind(&self) -> &FunctionKind {
        &self.kind
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn is_convex(&self) -> bool {
        !matches!(self.kind, FunctionKind::ReciprocalAbs)
    }

    /// Continuously differentiable everywhere (the norm only away from 0).
    pub fn is_smooth(&self) -> bool {
        matches!(
            self.kind,
            FunctionKind::Linear { .. }
                | FunctionKind::Constant { .. }
                | FunctionKind::Logistic { .. }
                | FunctionKind::Quadratic { .. }
        )
    }

    pub fn evaluate(&self, x: &Vector) -> Result<f64> {
        x.ensure_dim(self.dim)?;
        let v = match &self.kind {
            FunctionKind::EuclideanNorm => x.norm(),
            FunctionKind::Linear { b, offset } => b.dot(x) + offset,
            FunctionKind::Constant { c } => *c,
            FunctionKind::Logistic { b } => softplus(b.dot(x)),
            FunctionKind::MaxAffine { pieces } => {
                pieces.iter().map(|p| p.at(x)).fold(f64::NEG_INFINITY, f64::max)
            }
            FunctionKind::Quadratic { q, c } => quadratic_form(q, x) + c.dot(x),
            FunctionKind::ReciprocalAbs => {
                let t = x[0];
                if t == 0.0 {
                    0.0
                } else {
                    1.0 / t.abs()
                }
            }
        };
        checked(x, v)
    }

    /// ∇f(x); for `maxaffine` the slope of the lowest-index active piece, for
    /// the norm at the origin the zero subgradient.
    pub fn gradient(&self, x: &Vector) -> Result<Vector> {
        x.ensure_dim(self.dim)?;
        let g = match &self.kind {
            FunctionKind::EuclideanNorm => x.normalized().unwrap_or_else(|| Vector::zeros(self.dim)),
            FunctionKind::Linear { b, .. } => b.clone(),
            FunctionKind::Constant { .. } => Vector::zeros(self.dim),
            FunctionKind::Logistic { b } => b.scale(sigmoid(b.dot(x))),
            FunctionKind::MaxAffine { pieces } => {
                let values: Vec<f64> = pieces.iter().map(|p| p.at(x)).collect();
                let i = crate::sampling::first_argmax(&values).ok_or_else(|| Error::NonFiniteValue {
                    point: x.coords().to_vec(),
                })?;
                pieces[i].b.clone()
            }
            FunctionKind::Quadratic { q, c } => {
                let n = self.dim;
                let coords = (0..n)
                    .map(|i| {
                        (0..n).map(|j| (q[i][j] + q[j][i]) * x[j]).sum::<f64>() + c[i]
                    })
                    .collect();
                Vector::from_raw(coords)
            }
            FunctionKind::ReciprocalAbs => {
                let t = x[0];
                if t == 0.0 {
                    return Err(Error::GradientUnavailable(
                        "reciprocal-abs is discontinuous at 0".into(),
                    ));
                }
                Vector::from_raw(vec![-t.signum() / (t * t)])
            }
        };
        if g.coords().iter().all(|c| c.is_finite()) {
            Ok(g)
        } else {
            Err(Error::NonFiniteValue { point: x.coords().to_vec() })
        }
    }

    pub fn analytic_global_modulus(&self) -> Option<Modulus> {
        match &self.kind {
            FunctionKind::EuclideanNorm => Some(Modulus::Finite(1.0)),
            FunctionKind::Linear { b, .. } | FunctionKind::Logistic { b } => {
                Some(Modulus::Finite(b.norm()))
            }
            FunctionKind::Constant { .. } => Some(Modulus::Finite(0.0)),
            FunctionKind::MaxAffine { pieces } => {
                Some(Modulus::Finite(pieces.iter().map(|p| p.b.norm()).fold(0.0, f64::max)))
            }
            FunctionKind::Quadratic { q, c } => {
                if q.iter().flatten().all(|&v| v == 0.0) {
                    Some(Modulus::Finite(c.norm()))
                } else {
                    Some(Modulus::Infinite)
                }
            }
            FunctionKind::ReciprocalAbs => None,
        }
    }

    pub fn direction_hints(&self) -> Vec<Vector> {
        match &self.kind {
            FunctionKind::Linear { b, .. } | FunctionKind::Logistic { b } => b
                .normalized()
                .map(|u| vec![u.clone(), u.scale(-1.0)])
                .unwrap_or_default(),
            FunctionKind::MaxAffine { pieces } => {
                pieces.iter().filter_map(|p| p.b.normalized()).collect()
            }
            _ => Vec::new(),
        }
    }

    pub fn analytic_info(&self) -> AnalyticInfo {
        AnalyticInfo {
            global_modulus: self.analytic_global_modulus(),
            gradient_available: true,
            direction_hints: self.direction_hints(),
        }
    }

    /// Canonical JSON document; parses back to an equal spec.
    pub fn to_value(&self) -> serde_json::Value {
        document::to_value(self)
    }
}

impl Objective for FunctionSpec {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, x: &Vector) -> Result<f64> {
        self.evaluate(x)
    }

    fn gradient(&self, x: &Vector) -> Result<Vector> {
        FunctionSpec::gradient(self, x)
    }

    fn convexity(&self) -> Convexity {
        if self.is_convex() {
            Convexity::Convex
        } else {
            Convexity::NonConvex
        }
    }

    fn id(&self) -> String {
        self.name.clone().unwrap_or_else(|| self.kind.tag().to_string())
    }
}

impl Serialize for FunctionSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_value().serialize(s)
    }
}

impl<'de> Deserialize<'de> for FunctionSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let value = serde_json::Value::deserialize(d)?;
        parse_function_value(&value).map_err(de::Error::custom)
    }
}

/// ln(1 + eᵗ) without overflow: max(t, 0) + ln(1 + e^{−|t|}).
pub fn softplus(t: f64) -> f64 {
    t.max(0.0) + (-t.abs()).exp().ln_1p()
}

pub fn sigmoid(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

fn quadratic_form(q: &[Vec<f64>], x: &Vector) -> f64 {
    q.iter()
        .enumerate()
        .map(|(i, row)| x[i] * row.iter().zip(x.coords()).map(|(a, b)| a * b).sum::<f64>())
        .sum()
}

/// One representative spec per kind, as listed by the `zoo` command.
pub fn catalog() -> Vec<FunctionSpec> {
    let v = |c: &[f64]| Vector::new(c.to_vec()).expect("finite literal");
    vec![
        FunctionSpec::norm(2).with_name("norm"),
        FunctionSpec::linear(v(&[3.0, 4.0]), 1.0).unwrap().with_name("linear"),
        FunctionSpec::constant(7.0, 2).unwrap().with_name("constant"),
        FunctionSpec::logistic(v(&[3.0, 4.0])).with_name("logistic"),
        FunctionSpec::max_affine(vec![
            AffinePiece { b: v(&[1.0, 0.0]), alpha: 0.0 },
            AffinePiece { b: v(&[0.0, -2.0]), alpha: 1.0 },
        ])
        .unwrap()
        .with_name("maxaffine"),
        FunctionSpec::quadratic(vec![vec![1.0, 0.0], vec![0.0, 1.0]], v(&[0.0, 0.0]))
            .unwrap()
            .with_name("quadratic"),
        FunctionSpec::reciprocal_abs().with_name("reciprocal-abs"),
    ]
}

/// Symbolic form of ℓ for each kind.
pub fn modulus_formula(kind: &FunctionKind) -> &'static str {
    match kind {
        FunctionKind::EuclideanNorm => "1",
        FunctionKind::Linear { .. } | FunctionKind::Logistic { .. } => "‖b‖",
        FunctionKind::Constant { .. } => "0",
        FunctionKind::MaxAffine { .. } => "maxᵢ‖bᵢ‖",
        FunctionKind::Quadratic { .. } => "∞ (Q ≠ 0)",
        FunctionKind::ReciprocalAbs => "n/a (non-convex)",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[f64]) -> Vector {
        Vector::new(c.to_vec()).unwrap()
    }

    fn abs_x1() -> FunctionSpec {
        FunctionSpec::max_affine(vec![
            AffinePiece { b: v(&[1.0, 0.0]), alpha: 0.0 },
            AffinePiece { b: v(&[-1.0, 0.0]), alpha: 0.0 },
        ])
        .unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let lg = FunctionSpec::logistic(v(&[2.0]));
        let got = lg.evaluate(&v(&[2.0])).unwrap();
        assert!((got - 4.0181499279178094).abs() < 1e-14);
        assert!((got - (1.0 + 4f64.exp()).ln()).abs() < 1e-14);
        assert_eq!(abs_x1().evaluate(&v(&[-3.0, 7.0])).unwrap(), 3.0);
        let rec = FunctionSpec::reciprocal_abs();
        assert_eq!(rec.evaluate(&v(&[0.0])).unwrap(), 0.0);
        assert_eq!(rec.evaluate(&v(&[-0.25])).unwrap(), 4.0);
    }

    #[test]
    fn evaluate_checks_dimension() {
        assert_eq!(
            FunctionSpec::norm(3).evaluate(&v(&[1.0, 2.0])).unwrap_err(),
            Error::DimensionMismatch { expected: 3, got: 2 }
        );
    }

    #[test]
    fn gradient_examples() {
        let lg = FunctionSpec::logistic(v(&[3.0, 4.0]));
        assert_eq!(lg.gradient(&v(&[0.0, 0.0])).unwrap(), v(&[1.5, 2.0]));
        let quad =
            FunctionSpec::quadratic(vec![vec![1.0, 0.0], vec![0.0, 1.0]], v(&[0.0, 0.0])).unwrap();
        assert_eq!(quad.gradient(&v(&[1.0, 2.0])).unwrap(), v(&[2.0, 4.0]));
        assert_eq!(abs_x1().gradient(&v(&[-3.0, 7.0])).unwrap(), v(&[-1.0, 0.0]));
        // tie at x₁ = 0 resolves to the first piece
        assert_eq!(abs_x1().gradient(&v(&[0.0, 1.0])).unwrap(), v(&[1.0, 0.0]));
        assert!(matches!(
            FunctionSpec::reciprocal_abs().gradient(&v(&[0.0])),
            Err(Error::GradientUnavailable(_))
        ));
    }

    #[test]
    fn moduli() {
        assert_eq!(
            FunctionSpec::logistic(v(&[3.0, 4.0])).analytic_global_modulus(),
            Some(Modulus::Finite(5.0))
        );
        let ma = FunctionSpec::max_affine(vec![
            AffinePiece { b: v(&[1.0, 0.0]), alpha: 0.0 },
            AffinePiece { b: v(&[0.0, -2.0]), alpha: 0.0 },
        ])
        .unwrap();
        assert_eq!(ma.analytic_global_modulus(), Some(Modulus::Finite(2.0)));
        assert_eq!(
            FunctionSpec::constant(7.0, 3).unwrap().analytic_global_modulus(),
            Some(Modulus::Finite(0.0))
        );
        assert_eq!(FunctionSpec::norm(4).analytic_global_modulus(), Some(Modulus::Finite(1.0)));
        let quad =
            FunctionSpec::quadratic(vec![vec![1.0, 0.0], vec![0.0, 0.0]], v(&[0.0, 0.0])).unwrap();
        assert_eq!(quad.analytic_global_modulus(), Some(Modulus::Infinite));
        assert_eq!(FunctionSpec::reciprocal_abs().analytic_global_modulus(), None);
    }

    #[test]
    fn logistic_is_stable_at_extremes() {
        let lg = FunctionSpec::logistic(v(&[1.0]));
        assert_eq!(lg.evaluate(&v(&[1e4])).unwrap(), 1e4);
        let low = lg.evaluate(&v(&[-1e4])).unwrap();
        assert!(low.is_finite() && low >= 0.0);
        assert!(lg.gradient(&v(&[1e4])).unwrap()[0] == 1.0);
        assert!(lg.gradient(&v(&[-1e4])).unwrap()[0] == 0.0);
    }

    #[test]
    fn hints_are_unit() {
        for spec in catalog() {
            for h in spec.direction_hints() {
                assert!((h.norm() - 1.0).abs() < 1e-15);
            }
        }
        assert_eq!(FunctionSpec::logistic(v(&[3.0, 4.0])).direction_hints().len(), 2);
    }

    #[test]
    fn catalog_lists_seven_kinds() {
        let tags: Vec<_> = catalog().iter().map(|s| s.kind().tag()).collect();
        assert_eq!(
            tags,
            ["norm", "linear", "constant", "logistic", "maxaffine", "quadratic", "reciprocal-abs"]
        );
    }

    #[test]
    fn modulus_serde() {
        assert_eq!(serde_json::to_string(&Modulus::Infinite).unwrap(), "\"infinite\"");
        assert_eq!(serde_json::from_str::<Modulus>("5.0").unwrap(), Modulus::Finite(5.0));
        assert!(serde_json::from_str::<Modulus>("-1").is_err());
    }
}
