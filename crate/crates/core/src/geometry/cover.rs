use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::shell::{sphere_covering, ShellConfig};
use super::{Ball, Vector};
use crate::error::{Error, Result};
use crate::sampling;

/// Inputs to `support_function` must have unit norm within this tolerance.
pub const UNIT_TOLERANCE: f64 = 1e-12;

/// Largest polygon produced for a planar shell cover.
const MAX_POLYGON_VERTICES: usize = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoverKind {
    CrossPolytope,
    Simplex,
    Shell,
    /// User-supplied point set without a containment proof.
    Custom,
}

impl CoverKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CoverKind::CrossPolytope => "cross",
            CoverKind::Simplex => "simplex",
            CoverKind::Shell => "shell",
            CoverKind::Custom => "custom",
        }
    }
}

impl fmt::Display for CoverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CoverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cross" | "cross-polytope" => Ok(CoverKind::CrossPolytope),
            "simplex" => Ok(CoverKind::Simplex),
            "shell" => Ok(CoverKind::Shell),
            other => Err(Error::InvalidParams(format!(
                "unknown cover kind `{other}` (expected cross, simplex or shell)"
            ))),
        }
    }
}

/// A finite point set S together with the ball its convex hull is meant to contain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cover {
    kind: CoverKind,
    points: Vec<Vector>,
    target: Ball,
    outer_radius: f64,
}

impl Cover {
    fn assemble(kind: CoverKind, points: Vec<Vector>, target: Ball) -> Cover {
        let outer_radius = points
            .iter()
            .map(|p| p.distance(target.center()))
            .fold(0.0, f64::max);
        Cover { kind, points, target, outer_radius }
    }

    /// Wraps an arbitrary point set. Containment is not guaranteed; use
    /// [`cover_containment_check`] to probe it.
    pub fn custom(points: Vec<Vector>, target: Ball) -> Result<Cover> {
        if points.is_empty() {
            return Err(Error::EmptyPointSet);
        }
        for p in &points {
            p.ensure_dim(target.dim())?;
        }
        Ok(Cover::assemble(CoverKind::Custom, points, target))
    }

    pub fn kind(&self) -> CoverKind {
        self.kind
    }

    pub fn points(&self) -> &[Vector] {
        &self.points
    }

    pub fn target(&self) -> &Ball {
        &self.target
    }

    /// Max distance from the target center to any point of S.
    pub fn outer_radius(&self) -> f64 {
        self.outer_radius
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Builds a cover of the requested kind. Shell covers use `shell_slack` as ε.
pub fn build_cover(kind: CoverKind, ball: &Ball, shell_slack: f64) -> Result<Cover> {
    match kind {
        CoverKind::CrossPolytope => Ok(build_cross_polytope_cover(ball)),
        CoverKind::Simplex => Ok(build_simplex_cover(ball)),
        CoverKind::Shell => build_shell_cover(ball, shell_slack),
        CoverKind::Custom => Err(Error::InvalidParams(
            "custom covers are built from explicit point sets".into(),
        )),
    }
}

/// The 2n points x₀ ± nR·eᵢ, ordered +e₁, −e₁, +e₂, −e₂, ….
///
/// Any u in the unit ball has |uᵢ| ≤ 1, so x₀ + Ru is the average over i of
/// points on the segments [x₀ − nR·eᵢ, x₀ + nR·eᵢ].
pub fn build_cross_polytope_cover(ball: &Ball) -> Cover {
    let n = ball.dim();
    let reach = n as f64 * ball.radius();
    let x0 = ball.center();
    let mut points = Vec::with_capacity(2 * n);
    for i in 0..n {
        for sign in [1.0, -1.0] {
            let mut c = x0.coords().to_vec();
            c[i] += sign * reach;
            points.push(Vector::from_raw(c));
        }
    }
    Cover::assemble(CoverKind::CrossPolytope, points, ball.clone())
}

/// Unit directions of the canonical regular n-simplex.
///
/// Vertices e₁, …, eₙ and a·(1, …, 1) with a = (1 − √(n+1))/n are pairwise
/// √2 apart; they are recentred on their centroid and normalized.
pub fn regular_simplex_frame(n: usize) -> Vec<Vector> {
    assert!(n >= 1);
    let nf = n as f64;
    let a = (1.0 - (nf + 1.0).sqrt()) / nf;
    let centroid = (1.0 + a) / (nf + 1.0);
    let mut raw: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 } - centroid).collect())
        .collect();
    raw.push(vec![a - centroid; n]);
    raw.into_iter()
        .map(|c| Vector::from_raw(c).normalized().expect("simplex vertex is nonzero"))
        .collect()
}

/// n+1 vertices of a regular simplex centred at x₀ with circumradius nR.
/// Its inradius is R, so the target ball is inscribed.
pub fn build_simplex_cover(ball: &Ball) -> Cover {
    let n = ball.dim();
    let circumradius = n as f64 * ball.radius();
    let points = regular_simplex_frame(n)
        .iter()
        .map(|u| ball.center().offset(circumradius, u))
        .collect();
    Cover::assemble(CoverKind::Simplex, points, ball.clone())
}

/// Points at radius R + ε whose directions form an angular δ-covering of the
/// sphere with (R+ε)·cos δ ≥ R. Dimensions 2 to 4.
pub fn build_shell_cover(ball: &Ball, slack: f64) -> Result<Cover> {
    build_shell_cover_with(ball, slack, &ShellConfig::default())
}

pub fn build_shell_cover_with(ball: &Ball, slack: f64, config: &ShellConfig) -> Result<Cover> {
    let n = ball.dim();
    if !(2..=4).contains(&n) {
        return Err(Error::DimensionUnsupported(n));
    }
    if !(slack.is_finite() && slack > 0.0) {
        return Err(Error::InvalidParams(format!("shell slack must be positive, got {slack}")));
    }
    let r = ball.radius();
    let rho = r + slack;
    let directions = if n == 2 {
        let m = polygon_vertex_count(r, rho)?;
        (0..m)
            .map(|k| {
                let theta = 2.0 * PI * k as f64 / m as f64;
                Vector::from_raw(vec![theta.cos(), theta.sin()])
            })
            .collect()
    } else {
        // Shrink δ slightly so rounding in the covering test cannot eat the margin.
        let delta = (r / rho).acos() * (1.0 - 1e-9);
        sphere_covering(n, delta, config)?
    };
    let points = directions.iter().map(|u| ball.center().offset(rho, u)).collect();
    Ok(Cover::assemble(CoverKind::Shell, points, ball.clone()))
}

/// Smallest m ≥ 3 with ρ·cos(π/m) ≥ R.
pub fn polygon_vertex_count(r: f64, rho: f64) -> Result<usize> {
    // cos(π/m) ≥ R/ρ  ⟺  m ≥ π / acos(R/ρ)
    let estimate = (PI / (r / rho).acos()).floor();
    if !estimate.is_finite() || estimate > MAX_POLYGON_VERTICES as f64 {
        return Err(Error::CoverConstructionFailed(format!(
            "planar shell would need more than {MAX_POLYGON_VERTICES} vertices"
        )));
    }
    let mut m = (estimate as usize).saturating_sub(1).max(3);
    while rho * (PI / m as f64).cos() < r {
        m += 1;
    }
    Ok(m)
}

/// h_S(u) = max over p ∈ S of ⟨p − base, u⟩.
pub fn support_function(points: &[Vector], base: &Vector, direction: &Vector) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    direction.ensure_dim(base.dim())?;
    let norm = direction.norm();
    if (norm - 1.0).abs() > UNIT_TOLERANCE {
        return Err(Error::NonUnitDirection { norm });
    }
    let mut best = f64::NEG_INFINITY;
    for p in points {
        p.ensure_dim(base.dim())?;
        best = best.max(support_term(p, base, direction));
    }
    Ok(best)
}

fn support_term(p: &Vector, base: &Vector, u: &Vector) -> f64 {
    p.coords()
        .iter()
        .zip(base.coords())
        .zip(u.coords())
        .map(|((pi, bi), ui)| (pi - bi) * ui)
        .sum()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContainmentReport {
    /// min over sampled u of h_S(u) − target radius.
    pub min_margin: f64,
    pub worst_direction: Vector,
    pub directions_tested: usize,
    pub seed: u64,
}

/// Sampled support-function margin of a cover against its target ball.
///
/// A negative margin refutes containment; a nonnegative one is evidence only.
pub fn cover_containment_check(cover: &Cover, num_directions: usize, seed: u64) -> ContainmentReport {
    let n = cover.target().dim();
    let base = cover.target().center();
    let radius = cover.target().radius();
    let mut directions = Vec::with_capacity(2 * n + num_directions);
    for i in 0..n {
        directions.push(Vector::basis(n, i));
        directions.push(Vector::basis(n, i).scale(-1.0));
    }
    directions.extend(sampling::unit_vectors(seed, n, num_directions));

    let margins: Vec<f64> = directions
        .par_iter()
        .map(|u| {
            cover
                .points()
                .iter()
                .map(|p| support_term(p, base, u))
                .fold(f64::NEG_INFINITY, f64::max)
                - radius
        })
        .collect();
    let worst = margins
        .iter()
        .enumerate()
        .fold(0, |best, (i, &m)| if m < margins[best] { i } else { best });
    ContainmentReport {
        min_margin: margins[worst],
        worst_direction: directions[worst].clone(),
        directions_tested: directions.len(),
        seed,
    }
}
