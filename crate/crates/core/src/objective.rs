//! The evaluation interface every analysed function implements.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Vector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convexity {
    Convex,
    NonConvex,
    Unknown,
}

/// A black-box real function on ℝⁿ. Implementations must be safe to call
/// from several threads at once.
pub trait Objective: Sync {
    fn dim(&self) -> usize;

    fn value(&self, x: &Vector) -> Result<f64>;

    /// Gradient, or a subgradient where the function is convex but not smooth.
    fn gradient(&self, _x: &Vector) -> Result<Vector> {
        Err(Error::GradientUnavailable("no gradient supplied".into()))
    }

    fn convexity(&self) -> Convexity {
        Convexity::Unknown
    }

    /// Label recorded in certificates.
    fn id(&self) -> String {
        "anonymous".into()
    }
}

pub(crate) fn checked(x: &Vector, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFiniteValue { point: x.coords().to_vec() })
    }
}

/// Adapts a closure `Fn(&[f64]) -> f64` to [`Objective`].
pub struct FnObjective<F> {
    dim: usize,
    f: F,
    convexity: Convexity,
    id: String,
}

impl<F> FnObjective<F>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    pub fn new(dim: usize, f: F) -> Self {
        FnObjective { dim, f, convexity: Convexity::Unknown, id: "closure".into() }
    }

    pub fn with_convexity(mut self, convexity: Convexity) -> Self {
        self.convexity = convexity;
        self
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = id.into();
        self
    }
}

impl<F> Objective for FnObjective<F>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, x: &Vector) -> Result<f64> {
        x.ensure_dim(self.dim)?;
        checked(x, (self.f)(x.coords()))
    }

    fn convexity(&self) -> Convexity {
        self.convexity
    }

    fn id(&self) -> String {
        self.id.clone()
    }
}

impl<T: Objective + ?Sized> Objective for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn value(&self, x: &Vector) -> Result<f64> {
        (**self).value(x)
    }

    fn gradient(&self, x: &Vector) -> Result<Vector> {
        (**self).gradient(x)
    }

    fn convexity(&self) -> Convexity {
        (**self).convexity()
    }

    fn id(&self) -> String {
        (**self).id()
    }
}
