use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use kplus::convex::ConvexObstacle;
use kplus::sphere::cap_measure;
use kplus::willmore::*;
use proptest::prelude::*;

fn far(dim: usize) -> ConvexObstacle {
    let mut c = vec![0.0; dim];
    c[dim - 1] = -50.0;
    ConvexObstacle::cube(&c, 1.0).unwrap()
}

fn energy(parts: &[ParamSurface], c: &ConvexObstacle) -> f64 {
    willmore_energy(parts, c).unwrap().energy
}

#[test]
fn mean_curvature_of_model_surfaces() {
    let s = ParamSurface::sphere(3, vec![1.0, 2.0, 3.0], 0.5).unwrap();
    let p = mean_curvature(&s, 1.1, 2.0).unwrap();
    assert!((p.h - 4.0).abs() < 1e-13 && (p.k - 4.0).abs() < 1e-12);
    let c = ParamSurface::cylinder(3, 2.0, 3.0).unwrap();
    let p = mean_curvature(&c, 0.3, 1.0).unwrap();
    assert!((p.h - 0.5).abs() < 1e-14 && p.k.abs() < 1e-14);
    for t in [-0.9, 0.0, 0.4, 0.95] {
        let k = ParamSurface::catenoid_band(3, 0.7, 2.0).unwrap();
        assert!(mean_curvature(&k, t, 0.3).unwrap().h.abs() < 1e-12);
    }
    let s4 = ParamSurface::sphere(4, vec![0.0; 4], 2.0).unwrap();
    let p = mean_curvature(&s4, 0.8, 0.0).unwrap();
    assert!((p.h - 1.5).abs() < 1e-13 && p.principal.len() == 3);
}

#[test]
fn closed_form_energies() {
    assert!((energy(&[ParamSurface::sphere(3, vec![0.0; 3], 1.7).unwrap()], &far(3)) - 16.0 * PI).abs() < 1e-8);
    // |H|³ · |S³_R| = (3/R)³ · 2π²R³.
    let e4 = energy(&[ParamSurface::sphere(4, vec![0.0; 4], 0.6).unwrap()], &far(4));
    assert!((e4 - 54.0 * PI * PI).abs() < 1e-8 * e4);
    let e = energy(&[ParamSurface::cylinder(3, 0.5, 3.0).unwrap()], &far(3));
    assert!((e - 2.0 * PI * 3.0 / 0.5).abs() < 1e-9);
    assert!(energy(&[ParamSurface::catenoid_band(3, 1.0, 2.0).unwrap()], &far(3)).abs() < 1e-12);
}

#[test]
fn caps_meet_the_bound_independently_of_radius() {
    let h = supporting_halfspace(3);
    for theta0 in [FRAC_PI_4, FRAC_PI_2, 2.0 * PI / 3.0] {
        let bound = 4.0 * cap_measure(3, theta0).unwrap();
        let es: Vec<f64> = [0.5, 1.0, 2.0]
            .iter()
            .map(|&r| energy(&[ParamSurface::cap(3, theta0, r).unwrap()], &h))
            .collect();
        for e in &es {
            assert!((e - bound).abs() <= 1e-8 * bound, "θ0 = {theta0}: {e} vs {bound}");
            assert!((e - es[1]).abs() <= 1e-9 * bound);
        }
    }
    let h4 = supporting_halfspace(4);
    let e = energy(&[ParamSurface::cap(4, FRAC_PI_2, 1.3).unwrap()], &h4);
    let bound = 27.0 * cap_measure(4, FRAC_PI_2).unwrap();
    assert!((e - bound).abs() <= 1e-8 * bound);
}

#[test]
fn sphere_without_contact_has_margin_8pi() {
    let s = ParamSurface::sphere(3, vec![0.0, 0.0, 2.0], 1.0).unwrap();
    let chk = willmore_check(&[s], &supporting_halfspace(3), FRAC_PI_2, 1e-9).unwrap();
    assert!(!chk.gate.has_contact);
    assert!((chk.margin - 8.0 * PI).abs() < 1e-8);
}

#[test]
fn perturbed_cap_exceeds_the_bound_stably() {
    let h = supporting_halfspace(3);
    for stretch in [0.9, 1.1, 1.3] {
        let s = ParamSurface::perturbed_cap(3, FRAC_PI_2, 1.0, stretch).unwrap();
        let chk = willmore_check(std::slice::from_ref(&s), &h, FRAC_PI_2, 1e-6).unwrap();
        assert!(chk.margin > 0.0 && !chk.umbilical, "stretch {stretch}: {}", chk.margin);
        let fine = willmore_energy(&[s.with_quadrature(QuadratureSpec::default().doubled())], &h).unwrap();
        assert!((fine.energy - chk.energy.energy).abs() < 1e-3 * chk.margin);
    }
}

#[test]
fn disjoint_charts_add() {
    let a = ParamSurface::sphere(3, vec![0.0, 0.0, 0.0], 1.0).unwrap();
    let b = ParamSurface::cylinder(3, 1.0, 2.0).unwrap().translated(&[5.0, 0.0, 0.0]);
    let both = energy(&[a.clone(), b.clone()], &far(3));
    assert!((both - energy(&[a], &far(3)) - energy(&[b], &far(3))).abs() < 1e-10);
}

#[test]
fn two_caps_double_the_cap_energy() {
    let h = supporting_halfspace(3);
    let a = ParamSurface::cap(3, FRAC_PI_4, 1.0).unwrap();
    let b = a.translated(&[4.0, 0.0, 0.0]);
    let e = energy(&[a, b], &h);
    assert!((e - 8.0 * cap_measure(3, FRAC_PI_4).unwrap()).abs() < 1e-8);
}

#[test]
fn quadrature_converges() {
    let h = supporting_halfspace(3);
    let s = ParamSurface::perturbed_cap(3, FRAC_PI_4, 1.0, 1.2).unwrap();
    let r = willmore_energy(&[s], &h).unwrap();
    assert!(r.rel_change < 1e-8, "{}", r.rel_change);
    let coarse = QuadratureSpec { panels: 2, order: 4, phi_nodes: 16, scan: 32 };
    let s = ParamSurface::perturbed_cap(3, FRAC_PI_4, 1.0, 1.2).unwrap().with_quadrature(coarse);
    let r2 = willmore_energy(&[s], &h).unwrap();
    assert!((r2.refined - r.refined).abs() >= (r.refined - r.energy).abs());
}

#[test]
fn steep_rim_fails_the_gate() {
    let cap = ParamSurface::cap(3, PI / 3.0, 1.0).unwrap();
    let g = rim_gate(std::slice::from_ref(&cap), &supporting_halfspace(3), FRAC_PI_2).unwrap();
    assert!((g.margin - 0.5).abs() < 1e-6, "{}", g.margin);
    assert!(willmore_check(&[cap], &supporting_halfspace(3), FRAC_PI_2, 1e-6).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn scale_invariance_in_three_dimensions(stretch in 0.7f64..1.4, lambda in prop::sample::select(vec![0.3, 3.0])) {
        let h = supporting_halfspace(3);
        let s = ParamSurface::perturbed_cap(3, FRAC_PI_2, 1.0, stretch).unwrap();
        let e = energy(std::slice::from_ref(&s), &h);
        let el = energy(&[s.scaled(lambda)], &h);
        prop_assert!((e - el).abs() <= 1e-9 * e);
    }

    #[test]
    fn mean_curvature_dominates_gauss_curvature(stretch in 0.3f64..3.0, t in 0.05f64..3.09, dim in 3usize..6) {
        let s = ParamSurface::new(dim, Profile::Spheroid { stretch }, 1.0, vec![0.0; dim]).unwrap();
        let p = mean_curvature(&s, t, 0.0).unwrap();
        let n1 = (dim - 1) as f64;
        prop_assert!(p.h.abs().powf(n1) >= n1.powf(n1) * p.k * (1.0 - 1e-12));
    }

    #[test]
    fn round_caps_are_umbilical(theta0 in 0.2f64..2.9, r in 0.2f64..5.0) {
        let s = ParamSurface::cap(3, theta0, r).unwrap();
        let chk = willmore_check(&[s], &supporting_halfspace(3), theta0, 1e-6).unwrap();
        prop_assert!(chk.umbilical && chk.constant_mean_curvature);
        prop_assert!(chk.margin.abs() <= 1e-8 * chk.bound);
    }
}
