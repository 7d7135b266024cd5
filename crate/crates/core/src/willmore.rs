//! The energy `∫_{Σ∖C} |H|^{N-1}` on hypersurfaces of revolution with
//! closed-form profiles, and the sharp lower bound `(N−1)^{N−1} H^{N-1}(S_θ0)`.
//!
//! A chart is `(t, φ) ↦ c + λ (r(t) ω(φ), z(t))` with `ω` on the unit sphere
//! of the first `N−1` coordinates. The outer normal is `(−z′ ω, r′)/|γ′|`;
//! the principal curvatures are the meridian curvature
//! `κ_m = −(r′z″ − r″z′)/|γ′|³` and the parallel curvature `κ_p = −z′/(r|γ′|)`
//! with multiplicity `N−2`.
//!
//! In `N = 3` the obstacle mask is evaluated on the full `(t, φ)` grid. For
//! `N > 3` it is evaluated on the meridian `ω = e_1` and the `S^{N-2}` factor
//! is integrated exactly, which is correct for obstacles symmetric about the
//! chart's axis.

use serde::{Deserialize, Serialize};

use crate::convex::ConvexObstacle;
use crate::curvature::GateReport;
use crate::linalg::dot;
use crate::quadrature::composite_gauss;
use crate::sphere::{cap_measure, sphere_measure};
use crate::{Error, Result};

/// Unit-scale meridian profiles `t ↦ (r(t), z(t))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum Profile {
    /// `r = sin t`, `z = cos t`, `t ∈ [0, π]`.
    Sphere,
    /// `r = s sin t`, `z = cos t`: equatorial stretch `s`.
    Spheroid { stretch: f64 },
    /// `r = 1`, `z = −t`, `|t| ≤ height/2`.
    Cylinder { height: f64 },
    /// `r = a cosh(t/a)`, `z = −t`, `|t| ≤ height/2`.
    Catenoid { neck: f64, height: f64 },
}

/// `(r, z, r′, z′, r″, z″)`.
type Jet = [f64; 6];

impl Profile {
    fn domain(&self) -> (f64, f64) {
        match *self {
            Self::Sphere | Self::Spheroid { .. } => (0.0, std::f64::consts::PI),
            Self::Cylinder { height } | Self::Catenoid { height, .. } => (-0.5 * height, 0.5 * height),
        }
    }

    fn jet(&self, t: f64) -> Jet {
        match *self {
            Self::Sphere => {
                let (s, c) = t.sin_cos();
                [s, c, c, -s, -s, -c]
            }
            Self::Spheroid { stretch: a } => {
                let (s, c) = t.sin_cos();
                [a * s, c, a * c, -s, -a * s, -c]
            }
            Self::Cylinder { .. } => [1.0, -t, 0.0, -1.0, 0.0, 0.0],
            Self::Catenoid { neck: a, .. } => {
                let u = t / a;
                [a * u.cosh(), -t, u.sinh(), -1.0, u.cosh() / a, 0.0]
            }
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            Self::Sphere => true,
            Self::Spheroid { stretch } => stretch > 0.0 && stretch.is_finite(),
            Self::Cylinder { height } => height > 0.0 && height.is_finite(),
            Self::Catenoid { neck, height } => {
                neck > 0.0 && height > 0.0 && (0.5 * height / neck) < 300.0
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("profile {self:?}")))
        }
    }
}

/// Tensor grid resolution: `panels` Gauss–Legendre panels of `order` nodes
/// per trimmed `t`-interval, `phi_nodes` periodic nodes in `φ` (`N = 3`), and
/// `scan` sign samples per `φ`-line for locating the obstacle boundary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureSpec {
    pub panels: usize,
    pub order: usize,
    pub phi_nodes: usize,
    pub scan: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { panels: 8, order: 16, phi_nodes: 64, scan: 128 }
    }
}

impl QuadratureSpec {
    /// Twice the panels and `φ` nodes.
    pub fn doubled(&self) -> Self {
        Self { panels: 2 * self.panels, phi_nodes: 2 * self.phi_nodes, ..*self }
    }
}

/// A hypersurface of revolution `c + λ·(profile)` with axis `e_N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamSurface {
    pub dim: usize,
    pub profile: Profile,
    pub scale: f64,
    pub center: Vec<f64>,
    #[serde(default)]
    pub quadrature: QuadratureSpec,
}

/// Curvature data at one chart node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureSample {
    pub point: Vec<f64>,
    pub normal: Vec<f64>,
    /// Meridian curvature followed by the parallel curvature `N−2` times.
    pub principal: Vec<f64>,
    /// Mean curvature, the sum of the principal curvatures.
    pub h: f64,
    /// Gauss–Kronecker curvature, their product.
    pub k: f64,
    /// Area density with respect to `dt dφ` (`N = 3`) or `dt` (`N > 3`,
    /// the `S^{N-2}` factor included).
    pub area_weight: f64,
}

/// The halfspace `{x_N ≤ 0}` on which the caps rest.
pub fn supporting_halfspace(dim: usize) -> ConvexObstacle {
    let mut n = vec![0.0; dim];
    n[dim - 1] = 1.0;
    ConvexObstacle::polytope(vec![n], vec![0.0]).expect("halfspace")
}

fn axis_point(dim: usize, z: f64) -> Vec<f64> {
    let mut c = vec![0.0; dim];
    c[dim - 1] = z;
    c
}

impl ParamSurface {
    pub fn new(dim: usize, profile: Profile, scale: f64, center: Vec<f64>) -> Result<Self> {
        let s = Self { dim, profile, scale, center, quadrature: QuadratureSpec::default() };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim < 3 {
            return Err(Error::InvalidDimension(self.dim));
        }
        if self.center.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: self.center.len() });
        }
        if !(self.scale > 0.0 && self.scale.is_finite()) {
            return Err(Error::InvalidParameter(format!("scale {}", self.scale)));
        }
        let q = &self.quadrature;
        if q.panels == 0 || q.order == 0 || q.phi_nodes == 0 || q.scan < 2 {
            return Err(Error::InvalidParameter("quadrature resolution".into()));
        }
        self.profile.validate()
    }

    pub fn sphere(dim: usize, center: Vec<f64>, radius: f64) -> Result<Self> {
        Self::new(dim, Profile::Sphere, radius, center)
    }

    /// Sphere of radius `R` centred at `−R cos θ0 e_N`; its part above
    /// [`supporting_halfspace`] is the `θ0`-cap.
    pub fn cap(dim: usize, theta0: f64, radius: f64) -> Result<Self> {
        if !(theta0 > 0.0 && theta0 < std::f64::consts::PI) {
            return Err(Error::InvalidAngle(theta0));
        }
        Self::sphere(dim, axis_point(dim, -radius * theta0.cos()), radius)
    }

    /// The cap with its equator stretched by `stretch`; the rim stays on
    /// `{x_N = 0}`.
    pub fn perturbed_cap(dim: usize, theta0: f64, radius: f64, stretch: f64) -> Result<Self> {
        let mut s = Self::cap(dim, theta0, radius)?;
        s.profile = Profile::Spheroid { stretch };
        s.validate()?;
        Ok(s)
    }

    pub fn catenoid_band(dim: usize, neck: f64, height: f64) -> Result<Self> {
        Self::new(dim, Profile::Catenoid { neck, height }, 1.0, vec![0.0; dim])
    }

    pub fn cylinder(dim: usize, radius: f64, height: f64) -> Result<Self> {
        Self::new(dim, Profile::Cylinder { height: height / radius }, radius, vec![0.0; dim])
    }

    pub fn with_quadrature(mut self, q: QuadratureSpec) -> Self {
        self.quadrature = q;
        self
    }

    /// The image under `x ↦ λx`.
    pub fn scaled(&self, lambda: f64) -> Self {
        Self {
            scale: self.scale * lambda,
            center: self.center.iter().map(|c| c * lambda).collect(),
            ..self.clone()
        }
    }

    pub fn translated(&self, t: &[f64]) -> Self {
        Self { center: self.center.iter().zip(t).map(|(a, b)| a + b).collect(), ..self.clone() }
    }

    /// Parameter rectangle `[t0, t1] × [0, 2π]`.
    pub fn domain(&self) -> ((f64, f64), (f64, f64)) {
        (self.profile.domain(), (0.0, std::f64::consts::TAU))
    }

    fn omega(&self, v: f64) -> Vec<f64> {
        let (s, c) = v.sin_cos();
        let mut w = vec![0.0; self.dim];
        w[0] = c;
        w[1] = s;
        w
    }

    fn point(&self, u: f64, v: f64) -> Vec<f64> {
        let [r, z, ..] = self.profile.jet(u);
        let mut p = self.omega(v);
        for (k, pk) in p.iter_mut().enumerate() {
            *pk = self.center[k] + self.scale * r * *pk;
        }
        p[self.dim - 1] = self.center[self.dim - 1] + self.scale * z;
        p
    }
}

/// Curvature sample at chart coordinates `(u, v) = (t, φ)`.
pub fn mean_curvature(s: &ParamSurface, u: f64, v: f64) -> Result<CurvatureSample> {
    let ((t0, t1), (v0, v1)) = s.domain();
    if !(u >= t0 && u <= t1 && v >= v0 && v <= v1) {
        return Err(Error::OutsideDomain { u, v });
    }
    sample_at(s, u, v)
}

fn sample_at(s: &ParamSurface, u: f64, v: f64) -> Result<CurvatureSample> {
    let n = s.dim;
    let [r, _, dr, dz, ddr, ddz] = s.profile.jet(u);
    let speed = dr.hypot(dz);
    if !(r > 1e-12 && speed > 1e-12) {
        return Err(Error::DegenerateMetric { u, v });
    }
    let lam = s.scale;
    let km = -(dr * ddz - ddr * dz) / speed.powi(3) / lam;
    let kp = -dz / (r * speed) / lam;
    let mut principal = vec![km];
    principal.extend(std::iter::repeat_n(kp, n - 2));
    let h = km + (n - 2) as f64 * kp;
    let k = km * kp.powi(n as i32 - 2);
    let omega_factor = if n == 3 { 1.0 } else { sphere_measure(n - 1)? };
    let area_weight = lam.powi(n as i32 - 1) * speed * r.powi(n as i32 - 2) * omega_factor;
    let mut normal = s.omega(v);
    for x in normal.iter_mut() {
        *x *= -dz / speed;
    }
    normal[n - 1] = dr / speed;
    Ok(CurvatureSample { point: s.point(u, v), normal, principal, h, k, area_weight })
}

/// Maximal subintervals of `[a, b]` where `g > 0`, with interior endpoints
/// located by bisection; the flag marks endpoints on `{g = 0}`.
fn positive_intervals(g: impl Fn(f64) -> f64, a: f64, b: f64, scan: usize) -> Vec<(f64, f64, bool, bool)> {
    let ts: Vec<f64> = (0..=scan).map(|k| a + (b - a) * k as f64 / scan as f64).collect();
    let pos: Vec<bool> = ts.iter().map(|&t| g(t) > 0.0).collect();
    let root = |mut lo: f64, mut hi: f64| {
        // g(lo) > 0 ≥ g(hi) or the reverse; keep the positive end at `lo`.
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid == lo || mid == hi {
                break;
            }
            if g(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    };
    let mut out = Vec::new();
    let mut start: Option<(f64, bool)> = if pos[0] { Some((a, false)) } else { None };
    for k in 1..ts.len() {
        match (pos[k - 1], pos[k], start) {
            (false, true, _) => start = Some((root(ts[k], ts[k - 1]), true)),
            (true, false, Some((s0, f0))) => {
                out.push((s0, root(ts[k - 1], ts[k]), f0, true));
                start = None;
            }
            _ => {}
        }
    }
    if let Some((s0, f0)) = start {
        out.push((s0, b, f0, false));
    }
    out
}

#[derive(Default)]
struct Pass {
    energy: f64,
    area: f64,
    umbilic_defect: f64,
    h_min: f64,
    h_max: f64,
    /// Points of `∂C ∩ Σ` found by trimming, with the surface normal.
    rim: Vec<(Vec<f64>, Vec<f64>)>,
    nodes: usize,
}

fn integrate(parts: &[ParamSurface], c: &ConvexObstacle, refine: bool) -> Result<Pass> {
    let mut out = Pass { h_min: f64::INFINITY, h_max: f64::NEG_INFINITY, ..Pass::default() };
    for s in parts {
        s.validate()?;
        if c.dim() != s.dim {
            return Err(Error::DimensionMismatch { expected: s.dim, got: c.dim() });
        }
        let q = if refine { s.quadrature.doubled() } else { s.quadrature };
        let n = s.dim;
        let (t0, t1) = s.profile.domain();
        let (phis, wphi): (Vec<f64>, f64) = if n == 3 {
            let m = q.phi_nodes;
            ((0..m).map(|j| std::f64::consts::TAU * j as f64 / m as f64).collect(), std::f64::consts::TAU / m as f64)
        } else {
            (vec![0.0], 1.0)
        };
        let p = (n - 1) as i32;
        let cst = ((n - 1) as f64).powi(p);
        for &phi in &phis {
            let g = |t: f64| c.signed_distance(&s.point(t, phi));
            for (a, b, ra, rb) in positive_intervals(g, t0, t1, q.scan) {
                for (t, on_rim) in [(a, ra), (b, rb)] {
                    if on_rim {
                        let smp = sample_at(s, t, phi)?;
                        out.rim.push((smp.point, smp.normal));
                    }
                }
                let (ts, ws) = composite_gauss(a, b, q.panels, q.order);
                for (&t, &w) in ts.iter().zip(&ws) {
                    let smp = sample_at(s, t, phi)?;
                    let da = smp.area_weight * w * wphi;
                    let hp = smp.h.abs().powi(p);
                    out.energy += hp * da;
                    out.area += da;
                    out.nodes += 1;
                    out.h_min = out.h_min.min(smp.h);
                    out.h_max = out.h_max.max(smp.h);
                    if hp > 0.0 {
                        out.umbilic_defect = out.umbilic_defect.max((cst * smp.k - smp.h.powi(p)).abs() / hp);
                    } else if smp.k != 0.0 {
                        out.umbilic_defect = f64::INFINITY;
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Energy at the chart's resolution and at doubled resolution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub energy: f64,
    pub refined: f64,
    /// `|refined − energy| / |refined|`.
    pub rel_change: f64,
    /// `H^{N-1}(Σ ∖ C)`.
    pub area: f64,
    pub nodes: usize,
}

/// `∫_{Σ∖C} |H|^{N-1}` for `Σ` given as a disjoint union of charts.
pub fn willmore_energy(parts: &[ParamSurface], c: &ConvexObstacle) -> Result<EnergyReport> {
    if parts.is_empty() {
        return Err(Error::Empty("surface charts"));
    }
    let base = integrate(parts, c, false)?;
    let fine = integrate(parts, c, true)?;
    let rel_change = if fine.energy != 0.0 {
        (fine.energy - base.energy).abs() / fine.energy.abs()
    } else {
        (fine.energy - base.energy).abs()
    };
    Ok(EnergyReport { energy: base.energy, refined: fine.energy, rel_change, area: base.area, nodes: base.nodes })
}

/// Tolerance of the umbilicity and constant-`H` diagnoses.
pub const UMBILIC_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WillmoreCheck {
    pub energy: EnergyReport,
    /// `(N−1)^{N−1} H^{N-1}(S_θ0)`.
    pub bound: f64,
    /// `energy − bound`.
    pub margin: f64,
    pub gate: GateReport,
    /// `max |(N−1)^{N−1}K − H^{N−1}| / |H|^{N−1}` over the nodes.
    pub umbilic_defect: f64,
    /// `(max H − min H) / max |H|` over the nodes.
    pub mean_curvature_spread: f64,
    pub umbilical: bool,
    pub constant_mean_curvature: bool,
}

/// Contact-angle gate on the trimmed rim: `max ν_Σ·ν_C − cos θ0` over rim
/// points and the obstacle's normal generators there.
pub fn rim_gate(parts: &[ParamSurface], c: &ConvexObstacle, theta0: f64) -> Result<GateReport> {
    let pass = integrate(parts, c, false)?;
    let cos0 = theta0.cos();
    let mut margin = f64::NEG_INFINITY;
    for (x, nu) in &pass.rim {
        let tol = 1e-8 * (1.0 + crate::linalg::norm(x));
        let q = c.boundary_point(x);
        for g in c.normal_generators(&q, tol)? {
            margin = margin.max(dot(nu, g.as_slice()) - cos0);
        }
    }
    Ok(GateReport { has_contact: !pass.rim.is_empty(), margin, worst_vertex: None, sampled_margin: margin })
}

/// The sharp bound check after the rim gate `margin ≤ gate_tol`.
pub fn willmore_check(
    parts: &[ParamSurface],
    c: &ConvexObstacle,
    theta0: f64,
    gate_tol: f64,
) -> Result<WillmoreCheck> {
    let gate = rim_gate(parts, c, theta0)?;
    if !gate.passes(gate_tol) {
        return Err(Error::GateFailed { margin: gate.margin, tolerance: gate_tol });
    }
    let n = parts[0].dim;
    let energy = willmore_energy(parts, c)?;
    let bound = ((n - 1) as f64).powi(n as i32 - 1) * cap_measure(n, theta0)?;
    let pass = integrate(parts, c, false)?;
    let hmax = pass.h_min.abs().max(pass.h_max.abs());
    let spread = if hmax > 0.0 { (pass.h_max - pass.h_min) / hmax } else { 0.0 };
    Ok(WillmoreCheck {
        energy,
        bound,
        margin: energy.energy - bound,
        gate,
        umbilic_defect: pass.umbilic_defect,
        mean_curvature_spread: spread,
        umbilical: pass.umbilic_defect <= UMBILIC_TOL,
        constant_mean_curvature: spread <= UMBILIC_TOL,
    })
}
