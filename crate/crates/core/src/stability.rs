//! Stability of the restricted-bundle inequality: slab-flattened point
//! clouds and an empirical `δ(ε)` table.
//!
//! The existence of `δ(ε)` is non-constructive, so it is calibrated from
//! observations `(width_i, excess_i)`: `δ(ε)` is the largest observed excess
//! strictly below every excess of an instance wider than `ε`. On the
//! calibration data, excess `≤ δ(ε)` then implies width `≤ ε`, and the table
//! is nondecreasing in `ε` by construction.

use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;
use rand_distr::{Distribution, Uniform};
use serde::{Deserialize, Serialize};

use crate::convex::{bundle_measure, width, NormalSelector, PointCloud};
use crate::mc::{McEstimate, McPlan};
use crate::sphere::{cap_measure, Direction};
use crate::{Error, Result};

/// `k` points of the disk of radius `radius` in `{x_N = 0}` lifted to heights
/// `t·s_i`, `s_i ∈ [0, 1]`. The first `N` points have `s = 0` and the next
/// `N` have `s = 1`, so the extent along `e_N` is exactly `t`. The planar
/// positions and `s_i` depend only on `(dim, k, radius, seed)`.
pub fn slab_cloud(dim: usize, k: usize, t: f64, radius: f64, seed: u64) -> Result<PointCloud> {
    if dim < 2 {
        return Err(Error::InvalidDimension(dim));
    }
    if k < 2 * dim {
        return Err(Error::InvalidParameter(format!("slab cloud needs at least {} points", 2 * dim)));
    }
    if !(t >= 0.0 && radius > 0.0) {
        return Err(Error::InvalidParameter("slab height and radius".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = Uniform::new(0.0f64, 1.0).expect("range");
    let dirs = crate::mc::directions(dim - 1, k as u64, seed ^ 0x51ab);
    let mut pts = Vec::with_capacity(k);
    for (i, d) in dirs.iter().enumerate() {
        let rho = radius * u.sample(&mut rng).powf(1.0 / (dim - 1) as f64);
        let s = match i {
            _ if i < dim => 0.0,
            _ if i < 2 * dim => 1.0,
            _ => u.sample(&mut rng),
        };
        let mut p: Vec<f64> = d.iter().map(|v| rho * v).collect();
        p.push(t * s);
        pts.push(p);
    }
    PointCloud::from_points(dim, pts)
}

/// Bundle measure of one instance against the cap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BundleExcess {
    /// Slab height (`0` for instances outside a family).
    pub t: f64,
    pub bundle: McEstimate,
    pub cap: f64,
    /// `bundle − cap`.
    pub excess: f64,
    pub width: f64,
    pub width_exact: bool,
}

/// Excess of `N^{σ,θ}X` over `S_θ` together with `width(X)`.
pub fn bundle_excess(x: &PointCloud, sigma: &NormalSelector, theta: f64, plan: &McPlan) -> Result<BundleExcess> {
    let bundle = bundle_measure(x, sigma, theta, plan)?;
    let cap = cap_measure(x.dim, theta)?;
    let w = width(x, 16, 1e-12);
    Ok(BundleExcess { t: 0.0, bundle, cap, excess: bundle.value - cap, width: w.value, width_exact: w.exact })
}

/// The slab family over `heights` with `σ` the cone direction closest to
/// `e_N`; all members share planar positions and Monte Carlo samples.
pub fn slab_family(
    dim: usize,
    k: usize,
    radius: f64,
    heights: &[f64],
    theta: f64,
    plan: &McPlan,
    seed: u64,
) -> Result<Vec<BundleExcess>> {
    let up = Direction::axis(dim, dim - 1);
    heights
        .iter()
        .map(|&t| {
            let x = slab_cloud(dim, k, t, radius, seed)?;
            let sigma = NormalSelector::toward(&x, &up)?;
            Ok(BundleExcess { t, ..bundle_excess(&x, &sigma, theta, plan)? })
        })
        .collect()
}

/// Whether each excess is at most the previous one plus `k` combined
/// standard errors.
pub fn excess_nonincreasing(rows: &[BundleExcess], k: f64) -> bool {
    rows.windows(2).all(|w| {
        let se = w[0].bundle.stderr.hypot(w[1].bundle.stderr);
        w[1].excess <= w[0].excess + k * se
    })
}

/// Calibrated `δ(ε)` rows, sorted by `ε`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaTable {
    pub rows: Vec<DeltaRow>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaRow {
    pub epsilon: f64,
    pub delta: f64,
    /// Observations with `excess ≤ δ`.
    pub supported_by: usize,
}

impl DeltaTable {
    pub fn is_monotone(&self) -> bool {
        self.rows.windows(2).all(|w| w[0].delta <= w[1].delta)
    }

    /// `δ(ε)` for the largest tabulated `ε' ≤ ε`; `0` below the table.
    pub fn delta(&self, epsilon: f64) -> f64 {
        self.rows.iter().rev().find(|r| r.epsilon <= epsilon).map_or(0.0, |r| r.delta)
    }

    /// Observations with `excess ≤ δ(ε)` and `width > ε`, over all rows.
    pub fn violations(&self, obs: &[(f64, f64)]) -> usize {
        self.rows
            .iter()
            .map(|r| obs.iter().filter(|(w, e)| *e <= r.delta && *w > r.epsilon).count())
            .sum()
    }
}

/// Builds the table from `(width, excess)` observations. `δ(0) = 0`: zero
/// width is never certified by a finite sample.
pub fn calibrate_delta(obs: &[(f64, f64)], epsilons: &[f64]) -> DeltaTable {
    let mut eps: Vec<f64> = epsilons.iter().copied().filter(|e| e.is_finite() && *e >= 0.0).collect();
    eps.sort_by(f64::total_cmp);
    eps.dedup();
    let rows = eps
        .into_iter()
        .map(|epsilon| {
            if epsilon == 0.0 {
                return DeltaRow { epsilon, delta: 0.0, supported_by: 0 };
            }
            let wall = obs
                .iter()
                .filter(|(w, _)| *w > epsilon)
                .map(|(_, e)| *e)
                .fold(f64::INFINITY, f64::min);
            let below: Vec<f64> = obs.iter().map(|(_, e)| *e).filter(|e| *e < wall).collect();
            let delta = below.iter().copied().fold(0.0f64, f64::max);
            DeltaRow { epsilon, delta, supported_by: below.iter().filter(|e| **e <= delta).count() }
        })
        .collect();
    DeltaTable { rows }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slab_extent_is_exact() {
        for dim in [2, 3] {
            let x = slab_cloud(dim, 20, 0.05, 1.0, 4).unwrap();
            let e = crate::convex::extent(&x.points, Direction::axis(dim, dim - 1).as_slice());
            assert_eq!(e, 0.05);
            assert!(width(&x, 4, 1e-12).value <= 0.05);
        }
    }

    #[test]
    fn calibration_is_monotone_and_consistent() {
        let obs = [(0.01, 0.02), (0.1, 0.3), (0.05, 0.1), (0.2, 0.25), (0.3, 0.9)];
        let t = calibrate_delta(&obs, &[0.0, 0.02, 0.06, 0.15, 0.5]);
        assert!(t.is_monotone());
        assert_eq!(t.violations(&obs), 0);
        assert_eq!(t.delta(0.06), 0.1);
        assert_eq!(t.delta(0.15), 0.1);
        assert_eq!(t.delta(0.5), 0.9);
    }
}
