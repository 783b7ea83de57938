//! Sampling oracles that try to falsify what the estimator claims.
//!
//! None of these prove anything: a pass is evidence, a failure comes with a
//! concrete witness that can be re-evaluated.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimator::LipschitzCertificate;
use crate::geometry::{Ball, Vector};
use crate::objective::Objective;
use crate::sampling::{self, first_argmax};

/// Relative slack applied wherever a float comparison backs a mathematical inequality.
pub const REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RatioReport {
    pub max_ratio: f64,
    pub witness_pair: (Vector, Vector),
    pub pairs_tested: usize,
    pub seed: u64,
}

/// |f(x) − f(y)| / ‖x − y‖, or `None` for coincident points.
pub fn difference_quotient<F: Objective + ?Sized>(f: &F, x: &Vector, y: &Vector) -> Result<Option<f64>> {
    let d = x.distance(y);
    if d == 0.0 {
        return Ok(None);
    }
    Ok(Some((f.value(x)? - f.value(y)?).abs() / d))
}

/// Radial position in [0.99, 1) of the radius, for near-boundary pairs.
fn near_boundary<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    1.0 - 0.01 * (1.0 - rng.random::<f64>())
}

/// Seeded pair stream: cycles through uniform interior pairs, diameters
/// through the centre (hinted directions first), and short radial chords near
/// the boundary.
pub fn sample_pairs(ball: &Ball, num_pairs: usize, hints: &[Vector], seed: u64) -> Vec<(Vector, Vector)> {
    let mut rng = sampling::seeded_rng(seed);
    let n = ball.dim();
    let (x0, r) = (ball.center(), ball.radius());
    let mut hint_iter = hints.iter().filter(|h| h.dim() == n);
    (0..num_pairs)
        .map(|k| match k % 4 {
            0 | 1 => (
                sampling::uniform_in_ball(&mut rng, ball),
                sampling::uniform_in_ball(&mut rng, ball),
            ),
            2 => {
                let u = hint_iter.next().cloned().unwrap_or_else(|| sampling::unit_vector(&mut rng, n));
                let t = near_boundary(&mut rng) * r;
                (x0.offset(t, &u), x0.offset(-t, &u))
            }
            _ => {
                let u = sampling::unit_vector(&mut rng, n);
                let t1 = near_boundary(&mut rng) * r;
                let t2 = near_boundary(&mut rng) * r;
                (x0.offset(t1, &u), x0.offset(t2, &u))
            }
        })
        .collect()
}

/// Largest sampled difference quotient in the ball: a lower bound on the ball modulus.
pub fn empirical_lipschitz_ratio<F: Objective + ?Sized>(
    f: &F,
    ball: &Ball,
    num_pairs: usize,
    hints: &[Vector],
    seed: u64,
) -> Result<RatioReport> {
    if num_pairs == 0 {
        return Err(Error::InvalidParams("num_pairs must be at least 1".into()));
    }
    ball.center().ensure_dim(f.dim())?;
    let pairs = sample_pairs(ball, num_pairs, hints, seed);
    let ratios: Vec<f64> = pairs
        .par_iter()
        .map(|(x, y)| Ok(difference_quotient(f, x, y)?.unwrap_or(f64::NEG_INFINITY)))
        .collect::<Result<_>>()?;
    let best = first_argmax(&ratios).unwrap_or(0);
    Ok(RatioReport {
        max_ratio: ratios[best].max(0.0),
        witness_pair: pairs[best].clone(),
        pairs_tested: num_pairs,
        seed,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ConvexityReport {
    Ok { triples_tested: usize },
    Counterexample { x: Vector, y: Vector, lambda: f64, violation: f64 },
}

/// Amount by which f(λx + (1−λ)y) exceeds λf(x) + (1−λ)f(y) beyond the tolerance.
pub fn convexity_violation<F: Objective + ?Sized>(f: &F, x: &Vector, y: &Vector, lambda: f64) -> Result<f64> {
    let fx = f.value(x)?;
    let fy = f.value(y)?;
    let mid = x.scale(lambda).offset(1.0 - lambda, y);
    let lhs = f.value(&mid)?;
    let rhs = lambda * fx + (1.0 - lambda) * fy;
    Ok(lhs - rhs - REL_TOL * (1.0 + fx.abs() + fy.abs()))
}

/// Sampled convexity test on a ball; reports the worst violating triple.
pub fn convexity_check<F: Objective + ?Sized>(
    f: &F,
    region: &Ball,
    num_triples: usize,
    seed: u64,
) -> Result<ConvexityReport> {
    if num_triples == 0 {
        return Err(Error::InvalidParams("num_triples must be at least 1".into()));
    }
    region.center().ensure_dim(f.dim())?;
    let mut rng = sampling::seeded_rng(seed);
    let triples: Vec<(Vector, Vector, f64)> = (0..num_triples)
        .map(|_| {
            let x = sampling::uniform_in_ball(&mut rng, region);
            let y = sampling::uniform_in_ball(&mut rng, region);
            (x, y, rng.random::<f64>())
        })
        .collect();
    let violations: Vec<f64> = triples
        .par_iter()
        .map(|(x, y, l)| convexity_violation(f, x, y, *l))
        .collect::<Result<_>>()?;
    match first_argmax(&violations) {
        Some(i) if violations[i] > 0.0 => {
            let (x, y, lambda) = triples[i].clone();
            Ok(ConvexityReport::Counterexample { x, y, lambda, violation: violations[i] })
        }
        _ => Ok(ConvexityReport::Ok { triples_tested: num_triples }),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SoundnessOutcome {
    Pass {
        max_ratio: f64,
        #[serde(rename = "L")]
        constant: f64,
        pairs_tested: usize,
    },
    Violation {
        ratio: f64,
        #[serde(rename = "L")]
        constant: f64,
        witness_pair: (Vector, Vector),
    },
}

impl SoundnessOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, SoundnessOutcome::Pass { .. })
    }
}

/// Checks the certificate against sampled difference quotients on its ball.
pub fn certificate_soundness_suite<F: Objective + ?Sized>(
    f: &F,
    certificate: &LipschitzCertificate,
    num_pairs: usize,
    hints: &[Vector],
    seed: u64,
) -> Result<SoundnessOutcome> {
    let report = empirical_lipschitz_ratio(f, &certificate.ball, num_pairs, hints, seed)?;
    let limit = certificate.constant * (1.0 + REL_TOL);
    Ok(if report.max_ratio <= limit {
        SoundnessOutcome::Pass {
            max_ratio: report.max_ratio,
            constant: certificate.constant,
            pairs_tested: report.pairs_tested,
        }
    } else {
        SoundnessOutcome::Violation {
            ratio: report.max_ratio,
            constant: certificate.constant,
            witness_pair: report.witness_pair,
        }
    })
}

/// Outcome of probing whether a convex function is bounded above.
/// `ConsistentWithConstant` is sampled evidence, never a proof of constancy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ConstancyVerdict {
    ConsistentWithConstant,
    /// The running maximum was still rising at the largest probe radius.
    UnboundedAbove { witness: Vector, value: f64 },
    /// Non-constant yet no growth seen; impossible for a convex function.
    BoundedWitnessed { bound: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstancyReport {
    pub verdict: ConstancyVerdict,
    pub f_at_origin: f64,
    pub radii: Vec<f64>,
    /// max of f over the probe directions at each radius.
    pub max_per_radius: Vec<f64>,
    pub directions: usize,
    pub seed: u64,
}

/// Probes f on spheres about the origin to separate constant functions from
/// unbounded ones.
pub fn corollary_constancy_check<F: Objective + ?Sized>(
    f: &F,
    probe_radii: &[f64],
    directions: usize,
    seed: u64,
) -> Result<ConstancyReport> {
    if probe_radii.is_empty() || probe_radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParams("probe radii must be nonempty and increasing".into()));
    }
    let dim = f.dim();
    let dirs = crate::estimator::probe_directions(dim, &[], directions, seed)?;
    let f0 = f.value(&Vector::zeros(dim))?;
    let tol = REL_TOL * (1.0 + f0.abs());

    let (mut lo, mut hi) = (f0, f0);
    let mut max_per_radius = Vec::with_capacity(probe_radii.len());
    let mut argmax_points = Vec::with_capacity(probe_radii.len());
    for &r in probe_radii {
        let points: Vec<Vector> = dirs.iter().map(|u| u.scale(r)).collect();
        let values = crate::estimator::evaluate_all(f, &points)?;
        let best = first_argmax(&values).expect("at least 2n directions");
        for &v in &values {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        max_per_radius.push(values[best]);
        argmax_points.push(points[best].clone());
    }

    let verdict = if hi - lo <= tol {
        ConstancyVerdict::ConsistentWithConstant
    } else {
        let k = max_per_radius.len();
        let before = max_per_radius[..k - 1].iter().copied().fold(f0, f64::max);
        if max_per_radius[k - 1] > before + tol {
            ConstancyVerdict::UnboundedAbove {
                witness: argmax_points[k - 1].clone(),
                value: max_per_radius[k - 1],
            }
        } else {
            ConstancyVerdict::BoundedWitnessed { bound: hi }
        }
    };
    Ok(ConstancyReport {
        verdict,
        f_at_origin: f0,
        radii: probe_radii.to_vec(),
        max_per_radius,
        directions: dirs.len(),
        seed,
    })
}
