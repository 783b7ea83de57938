//! Angular δ-coverings of S² and S³ for shell covers.
//!
//! Candidates are a lattice on the surface of the cube [−1, 1]ⁿ with spacing
//! h, projected onto the sphere. Every point of the sphere projects to a cube
//! facet point within (h/2)·√(n−1) of a lattice node, and that segment stays at
//! distance ≥ 1 from the origin, so its angular size is at most
//! η = 2·atan(h·√(n−1)/4). Greedily choosing centres until every candidate lies
//! within δ − η of a centre therefore covers the whole sphere at angle δ.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::geometry::Vector;

#[derive(Debug, Clone, PartialEq)]
pub struct ShellConfig {
    /// Fraction of δ spent on the candidate grid's own covering radius η.
    pub grid_fraction: f64,
    /// Upper bound on the number of candidate directions.
    pub max_grid_points: usize,
}

impl Default for ShellConfig {
    fn default() -> Self {
        ShellConfig { grid_fraction: 0.25, max_grid_points: 4_000_000 }
    }
}

type CellKey = [i64; 4];

struct CentreIndex {
    cell: f64,
    dim: usize,
    buckets: HashMap<CellKey, Vec<usize>>,
    centres: Vec<Vec<f64>>,
}

impl CentreIndex {
    fn new(dim: usize, cell: f64) -> Self {
        CentreIndex { cell, dim, buckets: HashMap::new(), centres: Vec::new() }
    }

    fn key(&self, p: &[f64]) -> CellKey {
        let mut k = [0i64; 4];
        for (slot, c) in k.iter_mut().zip(p) {
            *slot = (c / self.cell).floor() as i64;
        }
        k
    }

    fn insert(&mut self, p: Vec<f64>) {
        let k = self.key(&p);
        self.buckets.entry(k).or_default().push(self.centres.len());
        self.centres.push(p);
    }

    /// Smallest squared chord from `p` to a centre in the neighbouring cells.
    fn nearest_sq(&self, p: &[f64]) -> f64 {
        let base = self.key(p);
        let mut best = f64::INFINITY;
        let neighbours = 3usize.pow(self.dim as u32);
        for code in 0..neighbours {
            let mut k = base;
            let mut rest = code;
            for slot in k.iter_mut().take(self.dim) {
                *slot += (rest % 3) as i64 - 1;
                rest /= 3;
            }
            if let Some(ids) = self.buckets.get(&k) {
                for &id in ids {
                    let d: f64 = self.centres[id]
                        .iter()
                        .zip(p)
                        .map(|(a, b)| (a - b) * (a - b))
                        .sum();
                    best = best.min(d);
                }
            }
        }
        best
    }
}

fn candidate_grid(dim: usize, k: usize) -> Vec<Vec<f64>> {
    let h = 2.0 / k as f64;
    let per_facet = (k + 1).pow(dim as u32 - 1);
    let mut out = Vec::with_capacity(2 * dim * per_facet);
    for axis in 0..dim {
        for sign in [1.0, -1.0] {
            for code in 0..per_facet {
                let mut rest = code;
                let mut p = vec![0.0; dim];
                for (j, slot) in p.iter_mut().enumerate() {
                    if j == axis {
                        *slot = sign;
                    } else {
                        *slot = -1.0 + h * (rest % (k + 1)) as f64;
                        rest /= k + 1;
                    }
                }
                let norm = p.iter().map(|c| c * c).sum::<f64>().sqrt();
                out.push(p.into_iter().map(|c| c / norm).collect());
            }
        }
    }
    out
}

/// Unit directions such that every unit vector lies within angle `delta` of one of them.
pub fn sphere_covering(dim: usize, delta: f64, config: &ShellConfig) -> Result<Vec<Vector>> {
    if !(3..=4).contains(&dim) {
        return Err(Error::DimensionUnsupported(dim));
    }
    if !(delta > 0.0 && delta < std::f64::consts::FRAC_PI_2) {
        return Err(Error::CoverConstructionFailed(format!("covering angle {delta} outside (0, π/2)")));
    }
    let eta_target = delta * config.grid_fraction;
    let spread = ((dim - 1) as f64).sqrt();
    let k = (2.0 * spread / (4.0 * (eta_target / 2.0).tan())).ceil().max(1.0);
    let grid_size = 2.0 * dim as f64 * (k + 1.0).powi(dim as i32 - 1);
    if !grid_size.is_finite() || grid_size > config.max_grid_points as f64 {
        return Err(Error::CoverConstructionFailed(format!(
            "covering angle {delta:.3e} needs about {grid_size:.3e} candidates (limit {})",
            config.max_grid_points
        )));
    }
    let k = k as usize;
    let h = 2.0 / k as f64;
    let eta = 2.0 * (h * spread / 4.0).atan();
    let inner = delta - eta;
    if inner <= 0.0 {
        return Err(Error::CoverConstructionFailed("grid too coarse for requested angle".into()));
    }
    let chord = 2.0 * (inner / 2.0).sin();
    let chord_sq = chord * chord;

    let candidates = candidate_grid(dim, k);
    let mut index = CentreIndex::new(dim, chord);
    for c in &candidates {
        if index.nearest_sq(c) > chord_sq {
            index.insert(c.clone());
        }
    }

    // Verification pass on a fresh index built from the selected centres.
    let mut check = CentreIndex::new(dim, chord);
    for c in &index.centres {
        check.insert(c.clone());
    }
    if let Some(bad) = candidates.iter().position(|c| check.nearest_sq(c) > chord_sq) {
        return Err(Error::CoverConstructionFailed(format!(
            "candidate {bad} not covered after greedy selection"
        )));
    }
    Ok(index.centres.into_iter().map(Vector::from_raw).collect())
}
