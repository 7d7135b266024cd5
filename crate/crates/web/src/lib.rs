//! Browser bindings. Every export returns a JSON string; errors surface as
//! thrown JS strings.

use std::f64::consts::PI;

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use kplus::convex::{bundle_measure, hull::hull2, width, ConvexObstacle, NormalSelector, PointCloud};
use kplus::curvature::{cgr_inequality_check, scenes};
use kplus::isoprofile::{candidate_profile, half_space_profile, solve_profile_2d, SolverOptions};
use kplus::sphere::{cap_measure, Direction};
use kplus::McPlan;

fn out(r: kplus::Result<Value>) -> Result<String, JsValue> {
    r.map(|v| v.to_string()).map_err(|e| JsValue::from_str(&e.to_string()))
}

/// `"square"` is `[-1, 1]²`, `"disk"` the unit disk.
fn obstacle(name: &str) -> kplus::Result<ConvexObstacle> {
    match name {
        "disk" => ConvexObstacle::ball(vec![0.0, 0.0], 1.0),
        _ => ConvexObstacle::cube(&[0.0, 0.0], 1.0),
    }
}

/// Relative isoperimetric profile at mass `m` outside the named obstacle.
#[wasm_bindgen]
pub fn solve_profile(name: &str, m: f64, resolution: usize, restarts: usize) -> Result<String, JsValue> {
    out((|| {
        let c = obstacle(name)?;
        let opts = SolverOptions { resolution: resolution.clamp(16, 256), restarts: restarts.min(8), ..SolverOptions::default() };
        let p = solve_profile_2d(&c, m, &opts)?;
        Ok(json!({
            "mass": p.mass,
            "value": p.value,
            "half_space": half_space_profile(2, m)?,
            "candidate": candidate_profile(&c, m)?.value,
            "family": p.family,
            "method": p.method,
            "wet_length": p.minimizer.wet_length,
            "boundary": p.minimizer.boundary,
            "free_chain": p.minimizer.free_chain,
        }))
    })())
}

/// Hull, width and restricted normal bundle of a planar cloud given as
/// `[x0, y0, x1, y1, …]`, with `σ` the centre of each normal cone.
#[wasm_bindgen]
pub fn cloud_bundle(coords: &[f64], theta: f64, samples: u32, seed: u32) -> Result<String, JsValue> {
    out((|| {
        let pts: Vec<Vec<f64>> = coords.chunks_exact(2).map(|c| c.to_vec()).collect();
        let hull = hull2(&pts);
        let cloud = PointCloud::from_points(2, pts)?;
        let sigma = NormalSelector::cone_centers(&cloud, &Direction::normalize(&[0.0, 1.0])?)?;
        let e = bundle_measure(&cloud, &sigma, theta, &McPlan::new(samples.max(1) as u64, seed as u64))?;
        let w = width(&cloud, 8, 1e-12);
        let sig: Vec<&[f64]> = sigma.as_slice().iter().map(|d| d.as_slice()).collect();
        Ok(json!({
            "hull": hull,
            "width": w.value,
            "width_direction": w.direction.as_slice(),
            "sigma": sig,
            "bundle": e.value,
            "stderr": e.stderr,
            "cap": cap_measure(2, theta)?,
            "circle": 2.0 * PI,
        }))
    })())
}

/// A spherical cap with contact angle `contact` on a flat table, checked
/// against the bound at `theta0`.
#[wasm_bindgen]
pub fn cap_check(contact: f64, theta0: f64, rings: usize, samples: u32, seed: u32) -> Result<String, JsValue> {
    out((|| {
        let scene = scenes::cap_on_cube(contact, rings.clamp(4, 48))?;
        let plan = McPlan::new(samples.max(1) as u64, seed as u64);
        match cgr_inequality_check(&scene.surface, theta0, scene.h, &plan) {
            Ok(r) => Ok(json!({
                "gate": true,
                "gate_margin": r.gate.margin,
                "kplus": r.kplus.value,
                "stderr": r.kplus.stderr,
                "bound": r.bound,
                "margin": r.margin,
                "h": scene.h,
            })),
            Err(kplus::Error::GateFailed { margin, .. }) => Ok(json!({ "gate": false, "gate_margin": margin, "h": scene.h })),
            Err(e) => Err(e),
        }
    })())
}
