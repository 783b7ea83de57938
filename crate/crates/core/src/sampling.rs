//! Seeded sampling primitives shared by the estimator and the verification oracles.
//!
//! Every random stream is a `ChaCha8Rng` seeded from a `u64`. Samples are
//! drawn serially in index order, so downstream parallel evaluation cannot
//! change which points are produced.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::geometry::{Ball, Vector};

pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform direction on the unit sphere S^{n-1} (normalized Gaussian).
pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vector {
    loop {
        let g: Vec<f64> = (0..dim).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        if let Some(u) = Vector::from_raw(g).normalized() {
            return u;
        }
    }
}

/// `count` seeded unit directions.
pub fn unit_vectors(seed: u64, dim: usize, count: usize) -> Vec<Vector> {
    let mut rng = seeded_rng(seed);
    (0..count).map(|_| unit_vector(&mut rng, dim)).collect()
}

/// Uniform point in the ball: Gaussian direction times radius·U^{1/n}.
pub fn uniform_in_ball<R: Rng + ?Sized>(rng: &mut R, ball: &Ball) -> Vector {
    let u = unit_vector(rng, ball.dim());
    let t = rng.random::<f64>().powf(1.0 / ball.dim() as f64);
    ball.center().offset(ball.radius() * t, &u)
}

/// Uniform in [lo, hi).
pub fn uniform_in<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

/// Index of the first maximum; NaN entries never win.
pub fn first_argmax(values: &[f64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, &v) in values.iter().enumerate() {
        match best {
            Some(_) | None if v.is_nan() => {}
            Some(b) if v <= values[b] => {}
            _ => best = Some(i),
        }
    }
    best
}
