use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{build_cover, Ball, CoverKind, Vector};
use crate::objective::Objective;
use crate::sampling::first_argmax;

/// Slack ε of shell covers used by the estimator: S ⊂ B(x₀, αr + 1) \ B(x₀, αr).
pub const SHELL_SLACK: f64 = 1.0;

pub const DEFAULT_DELTA: f64 = 1e-3;
pub const DEFAULT_ALPHA_GRID: [f64; 5] = [2.0, 5.0, 10.0, 50.0, 100.0];

/// λ ∈ (0,1) and α > max{1, λ/(1−λ)}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct EstimatorParams {
    lambda: f64,
    alpha: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParams {
    lambda: f64,
    alpha: f64,
}

impl TryFrom<RawParams> for EstimatorParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        EstimatorParams::new(raw.lambda, raw.alpha)
    }
}

impl EstimatorParams {
    pub fn new(lambda: f64, alpha: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda < 1.0) {
            return Err(Error::InvalidParams(format!("lambda must lie in (0,1), got {lambda}")));
        }
        if !(alpha.is_finite() && alpha > 1.0) {
            return Err(Error::InvalidParams(format!("alpha must exceed 1, got {alpha}")));
        }
        let bound = lambda / (1.0 - lambda);
        if alpha <= bound {
            return Err(Error::InvalidParams(format!(
                "alpha must exceed lambda/(1-lambda) = {bound}, got {alpha}"
            )));
        }
        Ok(EstimatorParams { lambda, alpha })
    }

    /// λ(α) = (1 − δ)·α/(α + 1), the largest feasible λ up to the margin δ.
    pub fn for_alpha(alpha: f64, delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::InvalidParams(format!("delta must lie in (0,1), got {delta}")));
        }
        Self::new((1.0 - delta) * alpha / (alpha + 1.0), alpha)
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// A certified Lipschitz constant on a ball and everything needed to recompute it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LipschitzCertificate {
    #[serde(rename = "L")]
    pub constant: f64,
    pub ball: Ball,
    pub params: EstimatorParams,
    pub cover_kind: CoverKind,
    /// max of f over the cover points.
    #[serde(rename = "M")]
    pub cover_max: f64,
    pub f_at_center: f64,
    /// Cover point attaining `cover_max` (lowest index on ties).
    pub maximizer: Vector,
    /// Function evaluations spent: the centre plus every cover point.
    pub eval_count: usize,
    pub function_id: String,
}

impl LipschitzCertificate {
    /// (M − f(x₀)) / (r·λ·(α − 1)).
    pub fn formula(cover_max: f64, f_at_center: f64, radius: f64, params: &EstimatorParams) -> f64 {
        (cover_max - f_at_center) / (radius * params.lambda * (params.alpha - 1.0))
    }
}

/// Evaluates `f` at every point in order; the first failure wins.
pub(crate) fn evaluate_all<F: Objective + ?Sized>(f: &F, points: &[Vector]) -> Result<Vec<f64>> {
    points.par_iter().map(|p| f.value(p)).collect()
}

/// Lipschitz constant of a convex `f` on `ball` from its values on a cover of
/// B(x₀, αr). For non-convex input the number is still computed but carries no guarantee.
pub fn ball_lipschitz_constant<F: Objective + ?Sized>(
    f: &F,
    ball: &Ball,
    params: &EstimatorParams,
    cover_kind: CoverKind,
) -> Result<LipschitzCertificate> {
    ball.center().ensure_dim(f.dim())?;
    let enlarged = ball.scaled(params.alpha)?;
    let cover = build_cover(cover_kind, &enlarged, SHELL_SLACK)?;
    let f_at_center = f.value(ball.center())?;
    let values = evaluate_all(f, cover.points())?;
    let best = first_argmax(&values).expect("covers are nonempty");
    let cover_max = values[best];
    Ok(LipschitzCertificate {
        constant: LipschitzCertificate::formula(cover_max, f_at_center, ball.radius(), params),
        ball: ball.clone(),
        params: *params,
        cover_kind,
        cover_max,
        f_at_center,
        maximizer: cover.points()[best].clone(),
        eval_count: 1 + cover.len(),
        function_id: f.id(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TuneResult {
    pub best: LipschitzCertificate,
    pub delta: f64,
    /// One certificate per grid α, in grid order.
    pub grid: Vec<LipschitzCertificate>,
}

/// Grid search over α with λ(α) = (1 − δ)α/(α + 1). Picks the smallest L;
/// ties go to the smaller α, then the smaller evaluation count.
pub fn tune_parameters<F: Objective + ?Sized>(
    f: &F,
    ball: &Ball,
    alpha_grid: &[f64],
    delta: f64,
    cover_kind: CoverKind,
) -> Result<TuneResult> {
    if alpha_grid.is_empty() {
        return Err(Error::InvalidParams("alpha grid must be nonempty".into()));
    }
    let grid = alpha_grid
        .iter()
        .map(|&alpha| {
            let params = EstimatorParams::for_alpha(alpha, delta)?;
            ball_lipschitz_constant(f, ball, &params, cover_kind)
        })
        .collect::<Result<Vec<_>>>()?;
    let best = grid
        .iter()
        .min_by(|a, b| {
            a.constant
                .total_cmp(&b.constant)
                .then(a.params.alpha.total_cmp(&b.params.alpha))
                .then(a.eval_count.cmp(&b.eval_count))
        })
        .cloned()
        .expect("grid is nonempty");
    Ok(TuneResult { best, delta, grid })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo::FunctionSpec;

    fn v(c: &[f64]) -> Vector {
        Vector::new(c.to_vec()).unwrap()
    }

    #[test]
    fn params_name_the_violated_inequality() {
        let msg = |r: Result<EstimatorParams>| r.unwrap_err().to_string();
        assert!(msg(EstimatorParams::new(0.0, 2.0)).contains("lambda must lie in (0,1)"));
        assert!(msg(EstimatorParams::new(1.0, 2.0)).contains("lambda must lie in (0,1)"));
        assert!(msg(EstimatorParams::new(0.5, 1.0)).contains("alpha must exceed 1"));
        assert!(msg(EstimatorParams::new(0.9, 5.0)).contains("alpha must exceed lambda/(1-lambda)"));
        assert!(EstimatorParams::new(0.9, 9.5).is_ok());
        assert!(msg(EstimatorParams::for_alpha(2.0, 0.0)).contains("delta"));
    }

    #[test]
    fn norm_cross_polytope_example() {
        let ball = Ball::new(v(&[0.0, 0.0]), 1.0).unwrap();
        let params = EstimatorParams::new(0.5, 2.0).unwrap();
        let cert =
            ball_lipschitz_constant(&FunctionSpec::norm(2), &ball, &params, CoverKind::CrossPolytope)
                .unwrap();
        assert_eq!(cert.cover_max, 4.0);
        assert_eq!(cert.f_at_center, 0.0);
        assert_eq!(cert.constant, 8.0);
        assert_eq!(cert.eval_count, 5);
        assert_eq!(cert.maximizer, v(&[4.0, 0.0]));
    }

    #[test]
    fn constant_gives_zero() {
        let f = FunctionSpec::constant(7.0, 3).unwrap();
        let ball = Ball::new(v(&[1.0, -2.0, 0.5]), 3.0).unwrap();
        let params = EstimatorParams::new(0.3, 4.0).unwrap();
        for kind in [CoverKind::CrossPolytope, CoverKind::Simplex, CoverKind::Shell] {
            let cert = ball_lipschitz_constant(&f, &ball, &params, kind).unwrap();
            assert_eq!(cert.constant, 0.0);
            assert_eq!(cert.cover_max, 7.0);
        }
    }

    #[test]
    fn logistic_line_example() {
        let f = FunctionSpec::logistic(v(&[2.0]));
        let ball = Ball::new(v(&[0.0]), 1.0).unwrap();
        let params = EstimatorParams::new(0.5, 2.0).unwrap();
        let cert = ball_lipschitz_constant(&f, &ball, &params, CoverKind::CrossPolytope).unwrap();
        assert!((cert.cover_max - 4.0181499279178094).abs() < 1e-14);
        assert!((cert.f_at_center - std::f64::consts::LN_2).abs() < 1e-15);
        assert!((cert.constant - 6.650005494715728).abs() < 1e-12);
    }

    #[test]
    fn tune_norm_grid() {
        let ball = Ball::new(v(&[0.0, 0.0]), 1.0).unwrap();
        let res = tune_parameters(
            &FunctionSpec::norm(2),
            &ball,
            &[2.0, 10.0, 100.0],
            1e-3,
            CoverKind::CrossPolytope,
        )
        .unwrap();
        let expected = [6.006006006006006, 2.4468913357802244, 2.042446486890931];
        for (cert, want) in res.grid.iter().zip(expected) {
            assert!((cert.constant - want).abs() < 1e-12 * want, "{} vs {want}", cert.constant);
        }
        assert_eq!(res.best.params.alpha(), 100.0);
    }

    #[test]
    fn tune_constant_ties_pick_smallest_alpha() {
        let ball = Ball::new(v(&[0.0, 0.0]), 1.0).unwrap();
        let f = FunctionSpec::constant(3.0, 2).unwrap();
        let res = tune_parameters(&f, &ball, &[10.0, 2.0, 5.0], 1e-3, CoverKind::Simplex).unwrap();
        assert!(res.grid.iter().all(|c| c.constant == 0.0));
        assert_eq!(res.best.params.alpha(), 2.0);
    }

    #[test]
    fn tune_rejects_zero_delta_and_empty_grid() {
        let ball = Ball::new(v(&[0.0]), 1.0).unwrap();
        let f = FunctionSpec::norm(1);
        assert!(matches!(
            tune_parameters(&f, &ball, &[2.0], 0.0, CoverKind::CrossPolytope),
            Err(Error::InvalidParams(_))
        ));
        assert!(matches!(
            tune_parameters(&f, &ball, &[], 1e-3, CoverKind::CrossPolytope),
            Err(Error::InvalidParams(_))
        ));
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let ball = Ball::new(v(&[0.0, 0.0]), 1.0).unwrap();
        let params = EstimatorParams::new(0.5, 2.0).unwrap();
        assert!(matches!(
            ball_lipschitz_constant(&FunctionSpec::norm(3), &ball, &params, CoverKind::Simplex),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn certificate_json_round_trip() {
        let ball = Ball::new(v(&[0.5, 0.25]), 2.0).unwrap();
        let params = EstimatorParams::new(0.5, 3.0).unwrap();
        let cert = ball_lipschitz_constant(
            &FunctionSpec::logistic(v(&[1.0, -2.0])),
            &ball,
            &params,
            CoverKind::Simplex,
        )
        .unwrap();
        let text = serde_json::to_string(&cert).unwrap();
        assert!(text.contains("\"L\":"));
        let back: LipschitzCertificate = serde_json::from_str(&text).unwrap();
        assert_eq!(back, cert);
    }
}
