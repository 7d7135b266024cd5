//! Scenario configs: one params document per kind, parsed strictly with the
//! failing field path and source line in every error.

use std::f64::consts::{FRAC_PI_2, PI};
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use kplus::convex::io::PointCloudDoc;
use kplus::convex::ConvexObstacle;
use kplus::curvature::scenes::{self, Scene};
use kplus::curvature::SurfaceDoc;
use kplus::isoprofile::SolverOptions;
use kplus::willmore::ParamSurface;

use crate::CliError;

/// Parses `text` as `T`, reporting `origin:line:column` and the field path.
pub fn parse<T: DeserializeOwned>(text: &str, origin: &str) -> Result<T, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.inner();
        CliError::Config(format!("{origin}:{}:{}: at `{path}`: {inner}", inner.line(), inner.column()))
    })
}

pub fn load<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    parse(&text, &path.display().to_string())
}

/// `Scenario.kind`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    CapMeasure,
    Bundle,
    Kplus,
    CgrCheck,
    CgrStability,
    Willmore,
    Profile,
    VerifyAll,
    Calibrate,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Self::CapMeasure => "cap-measure",
            Self::Bundle => "bundle",
            Self::Kplus => "kplus",
            Self::CgrCheck => "cgr-check",
            Self::CgrStability => "cgr-stability",
            Self::Willmore => "willmore",
            Self::Profile => "profile",
            Self::VerifyAll => "verify-all",
            Self::Calibrate => "calibrate",
        }
    }
}

/// A complete scenario file: `{"name", "kind", "params", "seed", "out"}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub kind: Kind,
    #[serde(default)]
    pub params: serde_json::Value,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CapMeasureParams {
    pub dims: Vec<usize>,
    pub thetas: Vec<f64>,
}

impl Default for CapMeasureParams {
    fn default() -> Self {
        Self { dims: (2..=6).collect(), thetas: (0..=24).map(|k| PI * k as f64 / 24.0).collect() }
    }
}

/// How `σ` is chosen when the cloud document carries none.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SigmaRule {
    /// Normalised mean of each cone's extreme rays.
    ConeCenters { fallback: Vec<f64> },
    /// Cone direction nearest to the given one.
    Toward { direction: Vec<f64> },
    Constant { direction: Vec<f64> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BundleParams {
    pub cloud: PointCloudDoc,
    pub sigma_rule: SigmaRule,
    pub thetas: Vec<f64>,
    pub samples: u64,
}

impl Default for BundleParams {
    fn default() -> Self {
        let points = (0..8).map(|i| (0..3).map(|b| if i >> b & 1 == 1 { 0.5 } else { -0.5 }).collect()).collect();
        Self {
            cloud: PointCloudDoc { dim: 3, points, sigma: None, radius_bound: None },
            sigma_rule: SigmaRule::ConeCenters { fallback: vec![0.0, 0.0, 1.0] },
            thetas: vec![PI / 6.0, PI / 4.0, PI / 3.0, FRAC_PI_2],
            samples: 200_000,
        }
    }
}

/// Named surfaces resting on obstacles, or a surface document.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "scene", rename_all = "snake_case", deny_unknown_fields)]
pub enum SurfaceSpec {
    HalfSphere { rings: usize },
    Cap { theta0: f64, rings: usize },
    Tilted { angle: f64, rings: usize },
    SphereAbove { level: usize },
    TwoCaps { rings: usize },
    Flattened { t: f64, rings: usize },
    DilatedCube { eta: f64, rho: f64, level: usize },
    Random { seed: u64 },
    Mesh { doc: SurfaceDoc, theta0: f64 },
}

impl Default for SurfaceSpec {
    fn default() -> Self {
        Self::HalfSphere { rings: 24 }
    }
}

impl SurfaceSpec {
    pub fn build(&self) -> Result<Scene, CliError> {
        let s = match self {
            Self::HalfSphere { rings } => scenes::half_sphere_on_cube(checked_rings(*rings)?)?,
            Self::Cap { theta0, rings } => scenes::cap_on_cube(*theta0, checked_rings(*rings)?)?,
            Self::Tilted { angle, rings } => scenes::tilted_cap(*angle, checked_rings(*rings)?)?,
            Self::SphereAbove { level } => scenes::sphere_above(*level)?,
            Self::TwoCaps { rings } => scenes::two_caps(checked_rings(*rings)?)?,
            Self::Flattened { t, rings } => scenes::flattened_cap(*t, checked_rings(*rings)?)?,
            Self::DilatedCube { eta, rho, level } => scenes::dilated_cube_cap(*eta, *rho, *level)?,
            Self::Random { seed } => scenes::random_cap_scene(*seed)?,
            Self::Mesh { doc, theta0 } => {
                let surface = doc.clone().build()?;
                let mesh = surface.mesh();
                Scene { name: "mesh".into(), h: mesh.max_edge(), surface, theta0: *theta0 }
            }
        };
        Ok(s)
    }
}

fn checked_rings(rings: usize) -> Result<usize, CliError> {
    if (2..=400).contains(&rings) {
        Ok(rings)
    } else {
        Err(CliError::Config(format!("rings must lie in 2..=400, got {rings}")))
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct KplusParams {
    pub surface: SurfaceSpec,
    /// Reference cap angle for the paired estimate; the scene's `θ0` by
    /// default.
    pub theta0: Option<f64>,
    pub samples: Option<u64>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CgrCheckParams {
    pub surface: SurfaceSpec,
    pub theta0: Option<f64>,
    /// Gate tolerance; the mesh size `h` by default.
    pub gate_tol: Option<f64>,
    pub samples: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CgrStabilityParams {
    pub surface: SurfaceSpec,
    pub theta0: Option<f64>,
    pub epsilon: f64,
    /// Explicit `δ`; otherwise looked up in `delta_table`.
    pub delta: Option<f64>,
    /// A table written by `calibrate`; `<out>/calibrate.json` by default.
    pub delta_table: Option<PathBuf>,
    pub samples: Option<u64>,
}

impl Default for CgrStabilityParams {
    fn default() -> Self {
        Self {
            surface: SurfaceSpec::Flattened { t: 0.05, rings: 16 },
            theta0: None,
            epsilon: 0.1,
            delta: None,
            delta_table: None,
            samples: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WillmoreParams {
    pub parts: Vec<ParamSurface>,
    /// `{x_N ≤ 0}` by default.
    pub obstacle: Option<ConvexObstacle>,
    pub theta0: f64,
    pub gate_tol: f64,
}

impl Default for WillmoreParams {
    fn default() -> Self {
        Self {
            parts: vec![ParamSurface::perturbed_cap(3, FRAC_PI_2, 1.0, 1.2).expect("valid chart")],
            obstacle: None,
            theta0: FRAC_PI_2,
            gate_tol: 1e-6,
        }
    }
}

/// `{"obstacle", "masses", "solver"}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProfileParams {
    pub obstacle: ConvexObstacle,
    pub masses: Vec<f64>,
    pub solver: SolverOptions,
}

impl Default for ProfileParams {
    fn default() -> Self {
        Self {
            obstacle: crate::verify::square(),
            masses: crate::verify::mass_grid(),
            solver: SolverOptions::default(),
        }
    }
}

/// Calibration of `δ(ε)` on the slab-cloud family of radius `r`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CalibrateParams {
    pub epsilons: Vec<f64>,
    pub radius: f64,
    pub theta0: f64,
    pub dim: usize,
    pub points: usize,
    pub heights: Vec<f64>,
    pub clouds_per_height: usize,
    /// Total direction samples across the sweep.
    pub budget: u64,
}

impl Default for CalibrateParams {
    fn default() -> Self {
        Self {
            epsilons: vec![0.0, 0.025, 0.05, 0.1, 0.2, 0.4],
            radius: 2.0,
            theta0: FRAC_PI_2,
            dim: 3,
            points: 30,
            heights: vec![0.8, 0.4, 0.2, 0.1, 0.05, 0.025, 0.0125],
            clouds_per_height: 4,
            budget: 8_000_000,
        }
    }
}

/// Least samples per instance for a calibration sweep to be meaningful.
pub const MIN_CALIBRATION_SAMPLES: u64 = 20_000;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn errors_carry_path_and_line() {
        let text = "{\n  \"dims\": [2, 3],\n  \"thetas\": [0.1, \"x\"]\n}";
        let err = parse::<CapMeasureParams>(text, "cfg.json").unwrap_err().to_string();
        assert!(err.starts_with("cfg.json:3:"), "{err}");
        assert!(err.contains("thetas[1]"), "{err}");
        let err = parse::<CapMeasureParams>("{\"dim\": 2}", "c").unwrap_err().to_string();
        assert!(err.contains("unknown field"), "{err}");
    }

    #[test]
    fn scene_specs_parse() {
        let s: SurfaceSpec = parse(r#"{"scene": "cap", "theta0": 0.5, "rings": 8}"#, "s").unwrap();
        assert_eq!(s.build().unwrap().theta0, 0.5);
        assert!(parse::<SurfaceSpec>(r#"{"scene": "cap", "rings": 8}"#, "s").is_err());
        assert!(SurfaceSpec::HalfSphere { rings: 1 }.build().is_err());
    }
}
