use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Vector, UNIT_TOLERANCE};
use crate::objective::Objective;
use crate::sampling;

pub const DEFAULT_GROWTH_THRESHOLD: f64 = 10.0;
pub const DEFAULT_PLATEAU_TOL: f64 = 0.01;

/// Sampled sup of |f(Ru)|/R and f(Ru)/R over unit directions u, per radius R.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadialProfile {
    pub center: Vector,
    pub radii: Vec<f64>,
    pub ratios: Vec<f64>,
    pub signed_ratios: Vec<f64>,
    pub directions_used: usize,
    pub seed: u64,
}

/// Decade-spaced radii `start·10^k` up to and including `stop` (within rounding).
pub fn decade_radii(start: f64, stop: f64) -> Result<Vec<f64>> {
    if !(start > 0.0 && start.is_finite() && stop >= start && stop.is_finite()) {
        return Err(Error::InvalidParams(format!(
            "radius schedule needs 0 < start <= stop, got {start} and {stop}"
        )));
    }
    let decades = (stop / start).log10();
    let count = (decades + 1e-9).floor() as i32;
    Ok((0..=count).map(|k| start * 10f64.powi(k)).collect())
}

fn check_schedule(radii: &[f64]) -> Result<()> {
    if radii.is_empty() {
        return Err(Error::InvalidParams("radius schedule is empty".into()));
    }
    if radii.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
        return Err(Error::InvalidParams("radii must be positive and finite".into()));
    }
    if radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParams("radii must be strictly increasing".into()));
    }
    Ok(())
}

/// Directions {±eᵢ} ∪ hints ∪ `num_random` seeded uniform unit vectors.
pub fn probe_directions(dim: usize, hints: &[Vector], num_random: usize, seed: u64) -> Result<Vec<Vector>> {
    let mut dirs = Vec::with_capacity(2 * dim + hints.len() + num_random);
    for i in 0..dim {
        dirs.push(Vector::basis(dim, i));
        dirs.push(Vector::basis(dim, i).scale(-1.0));
    }
    for h in hints {
        h.ensure_dim(dim)?;
        let norm = h.norm();
        if (norm - 1.0).abs() > UNIT_TOLERANCE {
            return Err(Error::NonUnitDirection { norm });
        }
        dirs.push(h.clone());
    }
    dirs.extend(sampling::unit_vectors(seed, dim, num_random));
    Ok(dirs)
}

/// Radial growth profile about the origin.
pub fn radial_growth_profile<F: Objective + ?Sized>(
    f: &F,
    radii: &[f64],
    num_random_directions: usize,
    hints: &[Vector],
    seed: u64,
) -> Result<RadialProfile> {
    check_schedule(radii)?;
    let dim = f.dim();
    let dirs = probe_directions(dim, hints, num_random_directions, seed)?;
    let mut ratios = Vec::with_capacity(radii.len());
    let mut signed_ratios = Vec::with_capacity(radii.len());
    for &r in radii {
        let values: Vec<f64> = dirs
            .par_iter()
            .map(|u| f.value(&u.scale(r)))
            .collect::<Result<_>>()?;
        ratios.push(values.iter().map(|v| v.abs() / r).fold(0.0, f64::max));
        signed_ratios.push(values.iter().map(|v| v / r).fold(f64::NEG_INFINITY, f64::max));
    }
    Ok(RadialProfile {
        center: Vector::zeros(dim),
        radii: radii.to_vec(),
        ratios,
        signed_ratios,
        directions_used: dirs.len(),
        seed,
    })
}

/// Finite-data reading of the global-Lipschitz dichotomy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Verdict {
    /// `modulus_estimate` is a sampled lower approximation of ℓ, not a certified bound.
    GloballyLipschitz { modulus_estimate: f64 },
    Diverging,
    Inconclusive { reason: String },
}

/// Classifies a profile spanning at least three decades with four or more radii.
///
/// Tail steps are measured as |Δratio| per decade relative to the largest
/// ratio of the whole profile, so tails decaying towards ℓ = 0 read as flat.
pub fn classify_global_lipschitz(
    profile: &RadialProfile,
    growth_factor_threshold: f64,
    plateau_rel_tol: f64,
) -> Result<Verdict> {
    let radii = &profile.radii;
    let ratios = &profile.ratios;
    if radii.len() < 4 || ratios.len() != radii.len() {
        return Err(Error::InsufficientProfile(format!(
            "need at least 4 radii with matching ratios, got {} radii and {} ratios",
            radii.len(),
            ratios.len()
        )));
    }
    check_schedule(radii).map_err(|e| Error::InsufficientProfile(e.to_string()))?;
    let span = (radii[radii.len() - 1] / radii[0]).log10();
    if span < 3.0 - 1e-9 {
        return Err(Error::InsufficientProfile(format!(
            "radii span {span:.3} decades, need at least 3"
        )));
    }
    if ratios.iter().any(|r| !(r.is_finite() && *r >= 0.0)) {
        return Err(Error::InsufficientProfile("ratios must be finite and nonnegative".into()));
    }

    let scale = ratios.iter().copied().fold(0.0, f64::max);
    let k = ratios.len();
    let tail = k - 3..k;
    if scale == 0.0 {
        return Ok(Verdict::GloballyLipschitz { modulus_estimate: 0.0 });
    }

    // signed step per decade between consecutive tail radii, relative to `scale`
    let steps: Vec<f64> = (tail.start..k - 1)
        .map(|i| {
            let decades = (radii[i + 1] / radii[i]).log10();
            (ratios[i + 1] - ratios[i]) / (scale * decades)
        })
        .collect();

    let growth = ratios[k - 1] / ratios[0];
    let still_rising = steps.last().is_some_and(|&s| s > plateau_rel_tol);
    if growth > growth_factor_threshold && still_rising {
        return Ok(Verdict::Diverging);
    }
    if steps.iter().all(|s| s.abs() <= plateau_rel_tol) {
        // the ratio at the largest radius is closest to the limit
        return Ok(Verdict::GloballyLipschitz { modulus_estimate: ratios[k - 1] });
    }
    let worst = steps.iter().copied().fold(0.0f64, |a, s| a.max(s.abs()));
    Ok(Verdict::Inconclusive {
        reason: format!(
            "tail varies by {worst:.3e} per decade (tolerance {plateau_rel_tol:.3e}); growth factor {growth:.3e} (threshold {growth_factor_threshold:.3e})"
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo::FunctionSpec;

    fn v(c: &[f64]) -> Vector {
        Vector::new(c.to_vec()).unwrap()
    }

    fn decades() -> Vec<f64> {
        decade_radii(10.0, 1e6).unwrap()
    }

    #[test]
    fn decade_schedule() {
        assert_eq!(decade_radii(10.0, 1e6).unwrap().len(), 6);
        assert_eq!(decade_radii(1.0, 1000.0).unwrap(), vec![1.0, 10.0, 100.0, 1000.0]);
        assert!(decade_radii(0.0, 10.0).is_err());
        assert!(decade_radii(10.0, 1.0).is_err());
    }

    #[test]
    fn norm_profile_is_flat_one() {
        let p = radial_growth_profile(&FunctionSpec::norm(3), &decades(), 64, &[], 1).unwrap();
        for r in &p.ratios {
            assert!((r - 1.0).abs() < 1e-15);
        }
        assert_eq!(p.directions_used, 6 + 64);
    }

    #[test]
    fn quadratic_profile_equals_radii() {
        let f = FunctionSpec::quadratic(vec![vec![1.0, 0.0], vec![0.0, 1.0]], v(&[0.0, 0.0])).unwrap();
        let p = radial_growth_profile(&f, &decades(), 64, &[], 2).unwrap();
        for (ratio, r) in p.ratios.iter().zip(&p.radii) {
            assert!((ratio - r).abs() <= 1e-12 * r);
        }
        assert_eq!(classify_global_lipschitz(&p, 10.0, 0.01).unwrap(), Verdict::Diverging);
    }

    #[test]
    fn logistic_profile_plateaus_at_norm_b() {
        let f = FunctionSpec::logistic(v(&[3.0, 4.0]));
        let p = radial_growth_profile(&f, &decades(), 512, &f.direction_hints(), 42).unwrap();
        match classify_global_lipschitz(&p, 10.0, 0.01).unwrap() {
            Verdict::GloballyLipschitz { modulus_estimate } => {
                assert!((modulus_estimate - 5.0).abs() < 0.05, "{modulus_estimate}")
            }
            other => panic!("{other:?}"),
        }
        for (a, s) in p.ratios.iter().zip(&p.signed_ratios) {
            assert!(a >= s);
        }
    }

    #[test]
    fn constant_profile_reads_zero() {
        let f = FunctionSpec::constant(7.0, 2).unwrap();
        let p = radial_growth_profile(&f, &decades(), 16, &[], 3).unwrap();
        match classify_global_lipschitz(&p, 10.0, 0.01).unwrap() {
            Verdict::GloballyLipschitz { modulus_estimate } => assert!(modulus_estimate < 1e-5),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn slow_growth_is_inconclusive() {
        // ratio log10(R): rises but less than a factor 10 over the profile
        let radii = decades();
        let profile = RadialProfile {
            center: Vector::zeros(1),
            ratios: radii.iter().map(|r| r.log10()).collect(),
            signed_ratios: radii.iter().map(|r| r.log10()).collect(),
            radii,
            directions_used: 2,
            seed: 0,
        };
        assert!(matches!(
            classify_global_lipschitz(&profile, 10.0, 0.01).unwrap(),
            Verdict::Inconclusive { .. }
        ));
    }

    #[test]
    fn short_profiles_are_rejected() {
        let f = FunctionSpec::norm(1);
        let p = radial_growth_profile(&f, &[1.0, 10.0, 100.0], 4, &[], 0).unwrap();
        assert!(matches!(classify_global_lipschitz(&p, 10.0, 0.01), Err(Error::InsufficientProfile(_))));
        let p = radial_growth_profile(&f, &[1.0, 2.0, 3.0, 4.0, 5.0], 4, &[], 0).unwrap();
        assert!(matches!(classify_global_lipschitz(&p, 10.0, 0.01), Err(Error::InsufficientProfile(_))));
    }

    #[test]
    fn rejects_bad_schedules_and_hints() {
        let f = FunctionSpec::norm(2);
        assert!(radial_growth_profile(&f, &[10.0, 1.0], 4, &[], 0).is_err());
        assert!(radial_growth_profile(&f, &[], 4, &[], 0).is_err());
        assert!(matches!(
            radial_growth_profile(&f, &[1.0], 4, &[v(&[1.0, 1.0])], 0),
            Err(Error::NonUnitDirection { .. })
        ));
    }

    #[test]
    fn verdict_json_shape() {
        let text = serde_json::to_string(&Verdict::GloballyLipschitz { modulus_estimate: 5.0 }).unwrap();
        assert_eq!(text, r#"{"verdict":"globally-lipschitz","modulus_estimate":5.0}"#);
        assert_eq!(serde_json::to_string(&Verdict::Diverging).unwrap(), r#"{"verdict":"diverging"}"#);
    }
}
