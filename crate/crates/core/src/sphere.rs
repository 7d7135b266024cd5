//! Measures on the unit sphere `S^{N-1}`: exact caps, Monte Carlo measures of
//! intersections of caps, and the spherical-convexity inequality.

use serde::{Deserialize, Serialize};

use crate::linalg::{dot, norm};
use crate::mc::{self, McEstimate, McPlan, Tally};
use crate::quadrature;
use crate::{Error, Result};

/// Absolute tolerance of the cap quadrature.
pub const CAP_QUAD_TOL: f64 = 1e-13;

/// Unit-norm tolerance for [`Direction`].
pub const UNIT_TOL: f64 = 1e-12;

/// A unit vector of `R^N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Direction(Vec<f64>);

impl Direction {
    /// Accepts `v` if `||v| − 1| ≤ 1e-12`.
    pub fn new(v: Vec<f64>) -> Result<Self> {
        let n = norm(&v);
        if v.is_empty() {
            return Err(Error::InvalidDimension(0));
        }
        if !n.is_finite() || (n - 1.0).abs() > UNIT_TOL {
            return Err(Error::NotUnit(n));
        }
        Ok(Self(v))
    }

    /// Normalises `v`; rejects the zero vector.
    pub fn normalize(v: &[f64]) -> Result<Self> {
        let n = norm(v);
        if v.is_empty() {
            return Err(Error::InvalidDimension(0));
        }
        if !(n > 1e-300) || !n.is_finite() {
            return Err(Error::NotUnit(n));
        }
        Ok(Self(v.iter().map(|x| x / n).collect()))
    }

    /// The `k`-th standard basis vector of `R^dim`.
    pub fn axis(dim: usize, k: usize) -> Self {
        let mut v = vec![0.0; dim];
        v[k] = 1.0;
        Self(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn neg(&self) -> Self {
        Self(self.0.iter().map(|x| -x).collect())
    }
}

impl TryFrom<Vec<f64>> for Direction {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Direction::new(v)
    }
}

impl From<Direction> for Vec<f64> {
    fn from(d: Direction) -> Self {
        d.0
    }
}

impl AsRef<[f64]> for Direction {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// Volume `ω_N` of the unit ball of `R^N`, via `ω_N = 2π/N · ω_{N-2}`.
pub fn unit_ball_volume(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidDimension(0));
    }
    let (mut w, mut k) = if n % 2 == 1 { (2.0, 1) } else { (std::f64::consts::PI, 2) };
    while k < n {
        k += 2;
        w *= 2.0 * std::f64::consts::PI / k as f64;
    }
    Ok(w)
}

/// `H^{N-1}(S^{N-1}) = N ω_N`.
pub fn sphere_measure(n: usize) -> Result<f64> {
    Ok(n as f64 * unit_ball_volume(n)?)
}

/// `H^{N-1}` of a geodesic cap of angular radius `theta`,
/// `(N−1) ω_{N−1} ∫_0^θ sin^{N−2}`, by adaptive quadrature.
pub fn cap_measure(n: usize, theta: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidDimension(n));
    }
    if !(0.0..=std::f64::consts::PI).contains(&theta) {
        return Err(Error::InvalidAngle(theta));
    }
    let pre = (n - 1) as f64 * unit_ball_volume(n - 1)?;
    let p = (n - 2) as i32;
    let integral = quadrature::integrate(|s: f64| s.sin().powi(p), 0.0, theta, CAP_QUAD_TOL);
    Ok(pre * integral)
}

/// `count` i.i.d. uniform directions; depends only on `(dim, count, seed)`.
pub fn sample_uniform(n: usize, count: usize, seed: u64) -> Result<Vec<Direction>> {
    if n < 2 {
        return Err(Error::InvalidDimension(n));
    }
    if count == 0 {
        return Err(Error::Empty("sample count"));
    }
    Ok(mc::directions(n, count as u64, seed)
        .into_iter()
        .map(Direction)
        .collect())
}

/// The cap `S_{θ,x} = {y : x·y ≥ cos θ}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapSpec {
    pub dim: usize,
    pub axis: Direction,
    pub angle: f64,
}

impl CapSpec {
    pub fn new(axis: Direction, angle: f64) -> Result<Self> {
        let dim = axis.dim();
        if dim < 2 {
            return Err(Error::InvalidDimension(dim));
        }
        if !(angle > 0.0 && angle <= std::f64::consts::PI) {
            return Err(Error::InvalidAngle(angle));
        }
        Ok(Self { dim, axis, angle })
    }

    pub fn contains(&self, y: &[f64]) -> bool {
        dot(self.axis.as_slice(), y) >= self.angle.cos()
    }

    pub fn measure(&self) -> f64 {
        cap_measure(self.dim, self.angle).expect("validated cap")
    }

    /// The cap as a one-constraint spherical polytope.
    pub fn to_polytope(&self) -> SphericalPolytope {
        SphericalPolytope {
            dim: self.dim,
            constraints: vec![(self.axis.clone(), self.angle.cos())],
        }
    }
}

/// `{y ∈ S^{N-1} : a_i·y ≥ c_i for all i}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphericalPolytope {
    pub dim: usize,
    pub constraints: Vec<(Direction, f64)>,
}

impl SphericalPolytope {
    pub fn new(dim: usize, constraints: Vec<(Direction, f64)>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidDimension(dim));
        }
        for (a, c) in &constraints {
            if a.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: a.dim() });
            }
            if !c.is_finite() {
                return Err(Error::InvalidParameter(format!("constraint bound {c}")));
            }
        }
        Ok(Self { dim, constraints })
    }

    pub fn contains(&self, y: &[f64]) -> bool {
        self.constraints.iter().all(|(a, c)| dot(a.as_slice(), y) >= *c)
    }

    /// First constraint violated by `y` beyond `tol`.
    pub fn violated(&self, y: &[f64], tol: f64) -> Option<usize> {
        self.constraints
            .iter()
            .position(|(a, c)| dot(a.as_slice(), y) < c - tol)
    }

    /// Intersection of caps each contained in a closed hemisphere, with at
    /// least one constraint. This is the class on which the spherical
    /// convexity inequality is checked.
    pub fn is_spherically_convex(&self) -> bool {
        !self.constraints.is_empty() && self.constraints.iter().all(|(_, c)| *c >= 0.0)
    }
}

/// Monte Carlo `H^{N-1}` of a spherical polytope. With no constraints every
/// sample hits and the result is `N ω_N` with zero error.
pub fn polytope_measure(p: &SphericalPolytope, plan: &McPlan) -> McEstimate {
    let total = sphere_measure(p.dim).expect("validated dimension");
    let hits = mc::count_hits(plan, p.dim, |y| p.contains(y));
    McEstimate::from_hits(hits, plan.samples, plan.seed, total)
}

#[derive(Default)]
struct PairTally {
    in_x: u64,
    in_both: u64,
}

impl Tally for PairTally {
    fn merge(&mut self, o: Self) {
        self.in_x += o.in_x;
        self.in_both += o.in_both;
    }
}

/// Both sides of `H(X ∩ S_{θ,x}) ≥ H(S_θ)/(Nω_N) · H(X)`, estimated on one
/// shared sample stream.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphecoReport {
    pub lhs: McEstimate,
    pub rhs: f64,
    pub rhs_stderr: f64,
    pub measure_x: McEstimate,
    /// `lhs − rhs`.
    pub margin: f64,
    /// Standard error of the paired difference `1_{X∩S} − q·1_X`.
    pub margin_stderr: f64,
    pub ratio: f64,
}

impl SphecoReport {
    /// `margin ≥ −k·margin_stderr`.
    pub fn holds(&self, k: f64) -> bool {
        self.margin >= -k * self.margin_stderr - 1e-12
    }
}

/// Checks the spherical-convexity inequality for `X` based at `x`.
pub fn spheco_check(
    x_region: &SphericalPolytope,
    x: &Direction,
    theta: f64,
    plan: &McPlan,
) -> Result<SphecoReport> {
    let n = x_region.dim;
    if x.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: x.dim() });
    }
    if !x_region.is_spherically_convex() {
        return Err(Error::NotSphericallyConvex(
            "need at least one constraint and all bounds c_i >= 0",
        ));
    }
    if let Some(i) = x_region.violated(x.as_slice(), 1e-12) {
        return Err(Error::NotInRegion { constraint: i });
    }
    let total = sphere_measure(n)?;
    let q = cap_measure(n, theta)? / total;
    let cos_t = theta.cos();
    let tally = mc::accumulate::<PairTally, _>(plan, n, |t, y| {
        if x_region.contains(y) {
            t.in_x += 1;
            if dot(x.as_slice(), y) >= cos_t {
                t.in_both += 1;
            }
        }
    });
    if tally.in_x == 0 {
        return Err(Error::Empty("no samples fell in X"));
    }
    let s = plan.samples as f64;
    let lhs = McEstimate::from_hits(tally.in_both, plan.samples, plan.seed, total);
    let measure_x = McEstimate::from_hits(tally.in_x, plan.samples, plan.seed, total);
    let rhs = q * measure_x.value;
    let pa = tally.in_both as f64 / s;
    let px = tally.in_x as f64 / s;
    let mean = pa - q * px;
    let second = pa * (1.0 - 2.0 * q) + q * q * px;
    let var = (second - mean * mean).max(0.0);
    Ok(SphecoReport {
        lhs,
        rhs,
        rhs_stderr: q * measure_x.stderr,
        measure_x,
        margin: lhs.value - rhs,
        margin_stderr: (var / s).sqrt() * total,
        ratio: q,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn ball_volumes() {
        assert_eq!(unit_ball_volume(1).unwrap(), 2.0);
        assert!((unit_ball_volume(2).unwrap() - PI).abs() < 1e-15);
        assert!((unit_ball_volume(3).unwrap() - 4.0 * PI / 3.0).abs() < 1e-15);
        assert!((unit_ball_volume(4).unwrap() - PI * PI / 2.0).abs() < 1e-14);
        assert!(unit_ball_volume(0).is_err());
    }

    #[test]
    fn cap_closed_forms() {
        for k in 1..=20 {
            let t = PI * k as f64 / 20.0;
            assert!((cap_measure(2, t).unwrap() - 2.0 * t).abs() < 1e-12 * 2.0 * t);
            let c3 = 2.0 * PI * (1.0 - t.cos());
            assert!((cap_measure(3, t).unwrap() - c3).abs() < 1e-12 * c3);
        }
        assert!(cap_measure(3, -0.1).is_err());
        assert!(cap_measure(3, 3.2).is_err());
        assert!(cap_measure(1, 1.0).is_err());
    }

    #[test]
    fn direction_validation() {
        assert!(Direction::new(vec![1.0, 1.0]).is_err());
        assert!(Direction::normalize(&[0.0, 0.0]).is_err());
        let d: Direction = serde_json::from_str("[0.6, 0.8]").unwrap();
        assert_eq!(d.dim(), 2);
        assert!(serde_json::from_str::<Direction>("[0.6, 0.9]").is_err());
    }

    #[test]
    fn empty_polytope_region_measures_zero() {
        let e = Direction::axis(3, 2);
        let p = SphericalPolytope::new(3, vec![(e.clone(), 0.5), (e.neg(), 0.5)]).unwrap();
        let est = polytope_measure(&p, &McPlan::new(5000, 1));
        assert_eq!(est.value, 0.0);
        assert_eq!(est.stderr, 0.0);
    }

    #[test]
    fn spheco_rejects_base_point_outside() {
        let p = CapSpec::new(Direction::axis(3, 2), 0.3).unwrap().to_polytope();
        let r = spheco_check(&p, &Direction::axis(3, 0), 1.0, &McPlan::new(100, 0));
        assert_eq!(r.unwrap_err(), Error::NotInRegion { constraint: 0 });
        let whole = SphericalPolytope::new(3, vec![]).unwrap();
        assert!(spheco_check(&whole, &Direction::axis(3, 0), 1.0, &McPlan::new(100, 0)).is_err());
    }
}
