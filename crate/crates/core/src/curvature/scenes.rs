//! Named surface/obstacle scenes used by the checks and the CLI.

use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;
use rand_distr::{Distribution, Uniform};

use super::mesh::{cap_on_plane, icosphere, rotation, Mesh};
use super::{contact_angle_margin, Surface};
use crate::convex::ConvexObstacle;
use crate::linalg::{cross3, dot, normalized};
use crate::Result;

/// A surface resting on an obstacle together with its design angle and
/// mesh size (longest edge).
#[derive(Debug, Clone)]
pub struct Scene {
    pub name: String,
    pub surface: Surface,
    pub theta0: f64,
    pub h: f64,
}

fn scene(name: String, mesh: Mesh, obstacle: ConvexObstacle, theta0: f64) -> Result<Scene> {
    let h = mesh.max_edge();
    Ok(Scene { name, surface: Surface::from_mesh(mesh, obstacle)?, theta0, h })
}

/// Cube of half-side 2 whose top facet is the plane `z = 0`.
pub fn table() -> ConvexObstacle {
    ConvexObstacle::cube(&[0.0, 0.0, -2.0], 2.0).expect("cube")
}

/// Unit-radius `θ0`-cap resting on the top facet of [`table`]; it meets the
/// facet at contact angle `θ0`.
pub fn cap_on_cube(theta0: f64, rings: usize) -> Result<Scene> {
    let (mesh, _) = cap_on_plane(theta0, 1.0, rings);
    scene(format!("cap-{theta0:.6}-r{rings}"), mesh, table(), theta0)
}

/// Unit half-ball on the facet (`θ0 = π/2`).
pub fn half_sphere_on_cube(rings: usize) -> Result<Scene> {
    cap_on_cube(std::f64::consts::FRAC_PI_2, rings)
}

/// The closed half-ball (dome and base) rotated by `angle` about the
/// `x`-axis and lowered until one rim vertex touches the facet. `rings` is
/// rounded up to an even count so that the lowest rim point is a vertex.
pub fn tilted_cap(angle: f64, rings: usize) -> Result<Scene> {
    let rings = rings + rings % 2;
    let (mesh, _) = cap_on_plane(std::f64::consts::FRAC_PI_2, 1.0, rings);
    let rot = mesh.rotated(&rotation([1.0, 0.0, 0.0], angle));
    let zmin = rot.vertices.iter().map(|v| v[2]).fold(f64::INFINITY, f64::min);
    let mesh = rot.translated(&[0.0, 0.0, -zmin]);
    scene(format!("tilted-{angle:.6}-r{rings}"), mesh, table(), std::f64::consts::FRAC_PI_2)
}

/// A sphere of radius 1 at height 1 above the facet: no contact.
pub fn sphere_above(level: usize) -> Result<Scene> {
    scene(
        format!("sphere-l{level}"),
        icosphere(&[0.0, 0.0, 2.0], 1.0, level),
        table(),
        std::f64::consts::FRAC_PI_2,
    )
}

/// Two half-balls of radius 0.8 on the top and `+x` facets of the cube
/// `[-2, 2]^3` (a disconnected `Ω`).
pub fn two_caps(rings: usize) -> Result<Scene> {
    let cube = ConvexObstacle::cube(&[0.0; 3], 2.0)?;
    let (hemi, _) = cap_on_plane(std::f64::consts::FRAC_PI_2, 0.8, rings);
    let top = hemi.translated(&[0.0, 0.0, 2.0]);
    let side = hemi
        .map_vertices(|v| vec![v[2], v[1], -v[0]])
        .translated(&[2.0, 0.0, 0.0]);
    scene(format!("two-caps-r{rings}"), top.union(&side), cube, std::f64::consts::FRAC_PI_2)
}

/// Half-ball on the roof `{z ≤ −t|x|}`: the dome is sheared by
/// `z ↦ z − t|x|(1 − z)` so that its rim lies on the roof. The contact set
/// spans a slab of height `t` orthogonal to `e_z`.
pub fn flattened_cap(t: f64, rings: usize) -> Result<Scene> {
    let rings = rings + rings % 2;
    let roof = ConvexObstacle::polytope(vec![vec![t, 0.0, 1.0], vec![-t, 0.0, 1.0]], vec![0.0, 0.0])?;
    let (hemi, _) = cap_on_plane(std::f64::consts::FRAC_PI_2, 1.0, rings);
    let mesh = hemi.map_vertices(|v| {
        let ax = if v[0].abs() < 1e-15 { 0.0 } else { v[0].abs() };
        vec![v[0], v[1], v[2] - t * ax * (1.0 - v[2])]
    });
    scene(format!("flattened-{t:.6}-r{rings}"), mesh, roof, std::f64::consts::FRAC_PI_2)
}

/// A sphere of radius `rho` centred on the rounded edge of the dilated cube
/// `[-1, 1]^3 + B_η`, with the part inside the obstacle pushed to `∂C_η`.
pub fn dilated_cube_cap(eta: f64, rho: f64, level: usize) -> Result<Scene> {
    let base = ConvexObstacle::cube(&[0.0; 3], 1.0)?;
    let c = ConvexObstacle::dilation(base, eta)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let center = [1.0 + eta * s, 0.0, 1.0 + eta * s];
    let mesh = icosphere(&center, rho, level).map_vertices(|v| {
        if c.signed_distance(v) < 0.0 {
            c.boundary_point(v)
        } else {
            v.to_vec()
        }
    });
    scene(format!("dilated-{eta:.6}-{rho:.6}-l{level}"), mesh, c, std::f64::consts::FRAC_PI_2)
}

/// Orthonormal frame `(u, v, n)` completing the unit vector `n`.
fn frame(n: &[f64]) -> [[f64; 3]; 3] {
    let a = if n[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let u = normalized(&cross3(n, &a)).expect("independent");
    let v = cross3(n, &u);
    [[u[0], u[1], u[2]], v, [n[0], n[1], n[2]]]
}

/// A random admissible scene: a random polytope with a facet through the
/// origin, a random cap of angle `θc` on that facet, and the largest design
/// angle `θ0 ≤ θc` for which the discrete contact-angle gate holds exactly.
pub fn random_cap_scene(seed: u64) -> Result<Scene> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let unif = |a: f64, b: f64, rng: &mut ChaCha8Rng| Uniform::new(a, b).expect("range").sample(rng);
    let dirs = crate::mc::directions(3, 8, seed ^ 0x5ce1e);
    let n = dirs[0].clone();
    let theta_c = unif(std::f64::consts::PI / 6.0, 2.0 * std::f64::consts::PI / 3.0, &mut rng);
    let radius = unif(0.4, 1.2, &mut rng);
    let rings = 4 + (unif(0.0, 8.0, &mut rng) as usize);
    let mut normals = vec![n.clone()];
    let mut offsets = vec![0.0];
    for d in &dirs[1..] {
        normals.push(d.clone());
        offsets.push(radius + unif(0.2, 1.5, &mut rng));
    }
    let obstacle = ConvexObstacle::polytope(normals, offsets)?;
    let spin = unif(0.0, std::f64::consts::TAU, &mut rng);
    let (local, _) = cap_on_plane(theta_c, radius, rings);
    let local = local.rotated(&rotation([0.0, 0.0, 1.0], spin));
    // Map e_z to the outward facet normal n.
    let [u, v, w] = frame(&n);
    let mesh = local.map_vertices(|p| (0..3).map(|k| p[0] * u[k] + p[1] * v[k] + p[2] * w[k]).collect());
    let probe = scene(format!("random-{seed}"), mesh.clone(), obstacle.clone(), theta_c)?;
    let gate = contact_angle_margin(&probe.surface, theta_c, 0, 0);
    let cos0 = (theta_c.cos() + gate.margin.max(0.0) + 1e-12).min(1.0);
    let theta0 = cos0.acos();
    debug_assert!(dot(&n, &n) > 0.5);
    Ok(Scene { theta0, ..probe })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scene_contact_sets() {
        let s = half_sphere_on_cube(6).unwrap();
        assert_eq!(s.surface.contact_indices().len(), 1 + 3 * 6 * 7);
        let t = tilted_cap(10f64.to_radians(), 6).unwrap();
        assert_eq!(t.surface.contact_indices().len(), 1);
        let f = flattened_cap(0.1, 6).unwrap();
        assert_eq!(f.surface.contact_indices().len(), 1 + 3 * 6 * 7);
        assert!(!sphere_above(1).unwrap().surface.has_contact());
    }
}
