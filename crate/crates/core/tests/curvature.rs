use std::f64::consts::{FRAC_PI_2, PI};

use kplus::curvature::mesh::icosphere;
use kplus::curvature::scenes::*;
use kplus::curvature::*;
use kplus::mc::McPlan;
use kplus::sphere::{cap_measure, sphere_measure};

#[test]
fn no_contact_covers_the_whole_sphere() {
    let s = sphere_above(2).unwrap();
    let e = total_positive_curvature(&s.surface, &McPlan::new(100_000, 1));
    assert_eq!(e.value, sphere_measure(3).unwrap());
    assert_eq!(e.stderr, 0.0);
}

#[test]
fn kplus_is_scale_invariant() {
    let s = half_sphere_on_cube(8).unwrap();
    let plan = McPlan::new(200_000, 5);
    let base = total_positive_curvature(&s.surface, &plan);
    for lambda in [0.5, 2.0] {
        let e = total_positive_curvature(&s.surface.scaled(lambda).unwrap(), &plan);
        assert!((e.value - base.value).abs() <= 1e-12 * base.value, "λ = {lambda}");
    }
}

#[test]
fn caps_match_the_cap_measure() {
    // The dome's facet normals reach polar angles just below θ0, so the
    // discrete value sits slightly under the smooth one.
    for theta0 in [PI / 6.0, PI / 3.0, FRAC_PI_2, 2.0 * PI / 3.0] {
        let s = cap_on_cube(theta0, 24).unwrap();
        let e = total_positive_curvature(&s.surface, &McPlan::new(400_000, 2));
        let cap = cap_measure(3, theta0).unwrap();
        assert!((e.value - cap).abs() <= 3.0 * e.stderr + 4.0 * s.h, "θ0 = {theta0}: {} vs {cap}", e.value);
    }
}

#[test]
fn gate_examples() {
    let s = half_sphere_on_cube(12).unwrap();
    // Rim facets tilt inward by about half a ring: a positive O(h) bias.
    let g = contact_angle_margin(&s.surface, FRAC_PI_2, 4, 0);
    assert!(g.has_contact && g.margin > 0.0 && g.margin <= s.h, "{}", g.margin);
    assert!(g.sampled_margin <= g.margin + 1e-15);

    // A π/3 cap is too steep for θ0 = π/2: ν·ν_C reaches cos(π/3).
    let s = cap_on_cube(PI / 3.0, 16).unwrap();
    let g = contact_angle_margin(&s.surface, FRAC_PI_2, 0, 0);
    assert!((g.margin - 0.5).abs() < 0.05, "{}", g.margin);
    assert!(matches!(
        cgr_inequality_check(&s.surface, FRAC_PI_2, 1e-9, &McPlan::new(1000, 0)),
        Err(kplus::Error::GateFailed { .. })
    ));

    let none = sphere_above(1).unwrap();
    let g = contact_angle_margin(&none.surface, FRAC_PI_2, 0, 0);
    assert!(!g.has_contact && g.margin == f64::NEG_INFINITY && g.passes(0.0));
}

#[test]
fn inequality_on_scenes() {
    let plan = McPlan::new(200_000, 3);
    for scene in [half_sphere_on_cube(12).unwrap(), two_caps(10).unwrap(), sphere_above(2).unwrap()] {
        let r = cgr_inequality_check(&scene.surface, scene.theta0, scene.h, &plan).unwrap();
        // Meshes lose an O(h) band of dome directions next to the rim.
        assert!(r.margin >= -3.0 * r.kplus.stderr - 4.0 * scene.h, "{}: margin {}", scene.name, r.margin);
    }
    // The second half-ball adds directions beyond one hemisphere.
    let s = two_caps(10).unwrap();
    let r = cgr_inequality_check(&s.surface, FRAC_PI_2, s.h, &plan).unwrap();
    assert!(r.kplus.value > 2.0 * PI + 5.0 * r.kplus.stderr, "{}", r.kplus.value);
}

#[test]
fn tilted_cap_has_strict_excess() {
    let s = tilted_cap(15f64.to_radians(), 12).unwrap();
    let r = cgr_inequality_check(&s.surface, s.theta0, s.h, &McPlan::new(200_000, 4)).unwrap();
    assert!(r.margin > 5.0 * r.kplus.stderr, "{}", r.margin);
}

#[test]
fn random_admissible_scenes_satisfy_the_inequality() {
    let plan = McPlan::new(50_000, 9);
    for seed in 0..12 {
        let s = random_cap_scene(seed).unwrap();
        let r = cgr_inequality_check(&s.surface, s.theta0, 1e-9, &plan).unwrap();
        assert!(r.margin >= -3.0 * r.kplus.stderr - 1e-12, "seed {seed}: {}", r.margin);
    }
}

#[test]
fn paired_estimate_against_the_cap() {
    let s = half_sphere_on_cube(10).unwrap();
    let p = kplus_paired(&s.surface, |nu| nu[2] >= 0.0, &McPlan::new(200_000, 6));
    assert!(p.reference.within(2.0 * PI, 4.0));
    assert!(p.diff_stderr < p.kplus.stderr);
    assert!(p.diff.abs() <= 3.0 * p.diff_stderr + 2.0 * s.h, "{} ± {}", p.diff, p.diff_stderr);
}

#[test]
fn bundle_inclusion() {
    let plan = McPlan::new(100_000, 7);
    let s = half_sphere_on_cube(10).unwrap();
    let r = bundle_inclusion_check(&s.surface, PI / 3.0, FRAC_PI_2, s.h, &plan).unwrap();
    assert!(r.applicable && r.in_bundle > 0);
    assert_eq!(r.violations, 0);
    let none = sphere_above(1).unwrap();
    let r = bundle_inclusion_check(&none.surface, PI / 3.0, FRAC_PI_2, 1e-9, &plan).unwrap();
    assert_eq!((r.in_bundle, r.violations), (0, 0));
    assert!(bundle_inclusion_check(&s.surface, FRAC_PI_2, FRAC_PI_2, 1e-9, &plan).is_err());
}

#[test]
fn stability_on_the_flattened_family() {
    let plan = McPlan::new(100_000, 8);
    let mut prev = f64::INFINITY;
    for t in [0.2, 0.1, 0.05, 0.025] {
        let s = flattened_cap(t, 10).unwrap();
        let r = cgr_stability_check(&s.surface, s.theta0, t, 0.5, &plan).unwrap();
        assert!(r.slab_width <= t + 1e-12 && r.conclusion, "t = {t}: {}", r.slab_width);
        assert!(r.consistent());
        assert!(r.slab_width <= prev);
        prev = r.slab_width;
    }
    let h = half_sphere_on_cube(8).unwrap();
    let r = cgr_stability_check(&h.surface, FRAC_PI_2, 1e-9, h.h, &plan).unwrap();
    assert!(r.slab_width <= 1e-9 && r.consistent());
}

#[test]
fn closed_sphere_mesh_is_not_a_valid_surface_when_inside() {
    let mesh = icosphere(&[0.0, 0.0, 0.0], 1.0, 1);
    assert!(Surface::from_mesh(mesh, table()).is_err());
}
