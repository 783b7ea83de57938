//! Certified Lipschitz constants for convex functions on Euclidean balls,
//! computed from finitely many function values, plus sampled estimation and
//! classification of the global Lipschitz modulus.
//!
//! For convex f, a finite set S with B(x₀, αr) ⊆ conv(S), λ ∈ (0,1) and
//! α > max{1, λ/(1−λ)}, the constant
//!
//! ```text
//! L = (max_{z∈S} f(z) − f(x₀)) / (r·λ·(α − 1))
//! ```
//!
//! bounds |f(x) − f(y)| / ‖x − y‖ on B(x₀, r). [`geometry`] builds the sets S,
//! [`estimator`] evaluates L and studies its behaviour as r → ∞, and
//! [`verification`] attacks every claim with seeded sampling.
//!
//! ```
//! use lipcert::estimator::{ball_lipschitz_constant, EstimatorParams};
//! use lipcert::geometry::{Ball, CoverKind, Vector};
//! use lipcert::zoo::FunctionSpec;
//!
//! let ball = Ball::new(Vector::zeros(2), 1.0).unwrap();
//! let params = EstimatorParams::new(0.5, 2.0).unwrap();
//! let cert = ball_lipschitz_constant(&FunctionSpec::norm(2), &ball, &params, CoverKind::CrossPolytope).unwrap();
//! assert_eq!(cert.constant, 8.0);
//! ```

pub mod error;
pub mod estimator;
pub mod geometry;
pub mod objective;
pub mod sampling;
pub mod verification;
pub mod zoo;

pub use error::{Error, Result};
pub use objective::{Convexity, FnObjective, Objective};
