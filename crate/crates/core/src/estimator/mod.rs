//! Certified ball constants, parameter tuning, radial growth profiles and
//! their classification, certificate asymptotics, and subgradient lower bounds.

mod certificate;
mod profile;

pub(crate) use certificate::evaluate_all;

use serde::{Deserialize, Serialize};

pub use certificate::{
    ball_lipschitz_constant, tune_parameters, EstimatorParams, LipschitzCertificate, TuneResult,
    DEFAULT_ALPHA_GRID, DEFAULT_DELTA, SHELL_SLACK,
};
pub use profile::{
    classify_global_lipschitz, decade_radii, probe_directions, radial_growth_profile,
    RadialProfile, Verdict, DEFAULT_GROWTH_THRESHOLD, DEFAULT_PLATEAU_TOL,
};

use crate::error::Result;
use crate::geometry::{Ball, CoverKind, Vector};
use crate::objective::{Convexity, Objective};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceEntry {
    pub r: f64,
    #[serde(rename = "L")]
    pub constant: f64,
    pub eval_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateSequence {
    pub center: Vector,
    pub params: EstimatorParams,
    pub delta: f64,
    pub entries: Vec<SequenceEntry>,
    /// α/(λ(α−1))·ℓ for the supplied ℓ, the limit bound on L(r) as r grows.
    pub reference_bound: Option<f64>,
}

/// L(λ(α), α, r) over a radius schedule using shell covers with slack 1.
pub fn certificate_sequence<F: Objective + ?Sized>(
    f: &F,
    center: &Vector,
    alpha: f64,
    delta: f64,
    radii: &[f64],
    reference_modulus: Option<f64>,
) -> Result<CertificateSequence> {
    let params = EstimatorParams::for_alpha(alpha, delta)?;
    let entries = radii
        .iter()
        .map(|&r| {
            let ball = Ball::new(center.clone(), r)?;
            let cert = ball_lipschitz_constant(f, &ball, &params, CoverKind::Shell)?;
            Ok(SequenceEntry { r, constant: cert.constant, eval_count: cert.eval_count })
        })
        .collect::<Result<Vec<_>>>()?;
    let reference_bound =
        reference_modulus.map(|ell| alpha / (params.lambda() * (alpha - 1.0)) * ell);
    Ok(CertificateSequence { center: center.clone(), params, delta, entries, reference_bound })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubgradientBound {
    /// max over samples of ‖∇f(y)‖.
    pub value: f64,
    pub witness: Vector,
    /// True only when f is known to be convex; then `value` ≤ ℓ.
    pub is_lower_bound: bool,
}

/// Largest (sub)gradient norm over the sample points.
pub fn subgradient_lower_bound<F: Objective + ?Sized>(
    f: &F,
    sample_points: &[Vector],
) -> Result<SubgradientBound> {
    let first = sample_points
        .first()
        .ok_or_else(|| crate::Error::InvalidParams("need at least one sample point".into()))?;
    let mut best = (f64::NEG_INFINITY, first.clone());
    for y in sample_points {
        let g = f.gradient(y)?.norm();
        if g > best.0 {
            best = (g, y.clone());
        }
    }
    Ok(SubgradientBound {
        value: best.0,
        witness: best.1,
        is_lower_bound: f.convexity() == Convexity::Convex,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo::{AffinePiece, FunctionSpec};
    use crate::Error;

    fn v(c: &[f64]) -> Vector {
        Vector::new(c.to_vec()).unwrap()
    }

    #[test]
    fn norm_sequence_tends_to_alpha_over_lambda_alpha_minus_one() {
        let radii = [1.0, 10.0, 100.0, 1000.0];
        let seq = certificate_sequence(&FunctionSpec::norm(2), &v(&[0.0, 0.0]), 10.0, 1e-3, &radii, Some(1.0))
            .unwrap();
        let lambda = 0.999 * 10.0 / 11.0;
        let limit = 10.0 / (lambda * 9.0);
        assert!((seq.reference_bound.unwrap() - 1.2234456678901122).abs() < 1e-12);
        for e in &seq.entries {
            let closed = (10.0 * e.r + 1.0) / (e.r * lambda * 9.0);
            assert!((e.constant - closed).abs() <= 1e-12 * closed, "{} vs {closed}", e.constant);
        }
        let last = seq.entries.last().unwrap().constant;
        assert!((last - limit).abs() / limit < 2e-4);
    }

    #[test]
    fn constant_sequence_is_zero() {
        let f = FunctionSpec::constant(-3.0, 2).unwrap();
        let seq = certificate_sequence(&f, &v(&[1.0, 1.0]), 10.0, 1e-3, &[1.0, 10.0], None).unwrap();
        assert!(seq.entries.iter().all(|e| e.constant == 0.0));
        assert!(seq.reference_bound.is_none());
    }

    #[test]
    fn sequence_propagates_cover_errors() {
        assert_eq!(
            certificate_sequence(&FunctionSpec::norm(5), &Vector::zeros(5), 10.0, 1e-3, &[1.0], None)
                .unwrap_err(),
            Error::DimensionUnsupported(5)
        );
    }

    #[test]
    fn subgradient_logistic_along_b() {
        let f = FunctionSpec::logistic(v(&[3.0, 4.0]));
        let samples: Vec<_> = (0..=10).map(|t| v(&[3.0 * t as f64, 4.0 * t as f64])).collect();
        let bound = subgradient_lower_bound(&f, &samples).unwrap();
        assert!(bound.is_lower_bound);
        assert!(bound.value <= 5.0 && bound.value > 5.0 - 1e-9);
    }

    #[test]
    fn subgradient_simple_cases() {
        let c = FunctionSpec::constant(1.0, 2).unwrap();
        assert_eq!(subgradient_lower_bound(&c, &[v(&[1.0, 2.0])]).unwrap().value, 0.0);
        let abs = FunctionSpec::max_affine(vec![
            AffinePiece { b: v(&[1.0, 0.0]), alpha: 0.0 },
            AffinePiece { b: v(&[-1.0, 0.0]), alpha: 0.0 },
        ])
        .unwrap();
        let b = subgradient_lower_bound(&abs, &[v(&[1.0, 0.0]), v(&[-1.0, 0.0])]).unwrap();
        assert_eq!(b.value, 1.0);
        let rec = FunctionSpec::reciprocal_abs();
        let b = subgradient_lower_bound(&rec, &[v(&[0.5])]).unwrap();
        assert!(!b.is_lower_bound);
        assert!(matches!(subgradient_lower_bound(&rec, &[v(&[0.0])]), Err(Error::GradientUnavailable(_))));
    }
}
