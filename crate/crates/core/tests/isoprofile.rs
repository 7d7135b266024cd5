use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, PI};

use kplus::convex::ConvexObstacle;
use kplus::isoprofile::geom2::{disk_polygon_area, dist, hausdorff};
use kplus::isoprofile::*;
use proptest::prelude::*;

fn square() -> ConvexObstacle {
    ConvexObstacle::cube(&[0.0, 0.0], 1.0).unwrap()
}

fn unit_disk() -> ConvexObstacle {
    ConvexObstacle::ball(vec![0.0, 0.0], 1.0).unwrap()
}

/// Half-circle through the chain's endpoints, bulging to the chain's side.
fn fitted_half_circle(chain: &[[f64; 2]], k: usize) -> Vec<[f64; 2]> {
    let (a, b) = (chain[0], chain[chain.len() - 1]);
    let c = [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])];
    let rho = 0.5 * dist(a, b);
    let t0 = (a[1] - c[1]).atan2(a[0] - c[0]);
    let mid = chain[chain.len() / 2];
    let side = ((b[0] - a[0]) * (mid[1] - a[1]) - (b[1] - a[1]) * (mid[0] - a[0])).signum();
    (0..=k)
        .map(|i| {
            let t = t0 - side * PI * i as f64 / k as f64;
            [c[0] + rho * t.cos(), c[1] + rho * t.sin()]
        })
        .collect()
}

#[test]
fn half_space_profile_values() {
    assert!((half_space_profile(2, FRAC_PI_2).unwrap() - PI).abs() < 1e-14);
    assert!((half_space_profile(3, 2.0 * PI / 3.0).unwrap() - 2.0 * PI).abs() < 1e-13);
    for n in 2..7 {
        assert_eq!(half_space_profile(n, 0.0).unwrap(), 0.0);
    }
    assert!(half_space_profile(2, -1.0).is_err());
}

proptest! {
    #[test]
    fn half_space_profile_power_is_linear(n in 2usize..8, a in 1e-3f64..10.0, b in 1e-3f64..10.0, t in 0.0f64..1.0) {
        let p = HalfSpaceProfile::new(n).unwrap();
        let e = n as f64 / (n - 1) as f64;
        let f = |m: f64| p.value(m).unwrap().powf(e);
        let m = (1.0 - t) * a + t * b;
        let lin = (1.0 - t) * f(a) + t * f(b);
        prop_assert!((f(m) - lin).abs() <= 1e-12 * lin.max(1.0));
        prop_assert!(p.derivative(a).unwrap() > 0.0);
    }

    #[test]
    fn candidates_never_beat_the_half_space(m in 0.01f64..20.0, which in 0usize..3) {
        let c = [square(), unit_disk(), ConvexObstacle::dilation(square(), 0.3).unwrap()][which].clone();
        let cand = candidate_profile(&c, m).unwrap();
        prop_assert!(cand.value >= half_space_profile(2, m).unwrap() * (1.0 - 1e-9));
    }

    #[test]
    fn arc_family_gap_is_positive(a in 0.1f64..10.0, m in 1e-3f64..10.0) {
        prop_assert!(arc_family_gap(a, m).unwrap() > 0.0);
    }
}

#[test]
fn candidate_examples() {
    let c = candidate_profile(&square(), FRAC_PI_8).unwrap();
    assert_eq!(c.family, Family::Facet);
    assert!((c.value - FRAC_PI_2).abs() < 1e-12);
    assert!((half_space_profile(2, FRAC_PI_8).unwrap() - FRAC_PI_2).abs() < 1e-14);

    let d = candidate_profile(&unit_disk(), FRAC_PI_8).unwrap();
    assert_eq!(d.family, Family::Arc);
    assert!(d.value - FRAC_PI_2 > 1e-3);

    let big = candidate_profile(&square(), 40.0).unwrap();
    assert_ne!(big.family, Family::Facet);
    assert!(big.value >= half_space_profile(2, 40.0).unwrap());
}

#[test]
fn orthogonal_arc_limits() {
    // Small masses see a flat wall; huge disks too.
    let m = 1e-6;
    let hs = half_space_profile(2, m).unwrap();
    assert!((orthogonal_arc_value(1.0, m).unwrap() - hs).abs() < 1e-3 * hs);
    assert!((orthogonal_arc_value(1e6, 1.0).unwrap() - half_space_profile(2, 1.0).unwrap()).abs() < 1e-5);
}

#[test]
fn solver_recovers_half_disks_on_a_square() {
    let opts = SolverOptions { restarts: 4, ..SolverOptions::default() };
    for m in [0.2, 0.6] {
        let p = solve_profile_2d(&square(), m, &opts).unwrap();
        let hs = half_space_profile(2, m).unwrap();
        assert_eq!(p.family, Family::Facet);
        assert!((p.value - hs).abs() <= 1e-3 * hs, "m = {m}: {} vs {hs}", p.value);
        let rho = (2.0 * m / PI).sqrt();
        let circle = fitted_half_circle(&p.minimizer.free_chain, 2048);
        assert!(hausdorff(&p.minimizer.free_chain, &circle) < 1e-2 * rho);
        assert!(weak_young_check(&p.minimizer).unwrap().violation <= 1e-3);
        assert!(p.minimizer.is_valid(1e-9));
    }
}

#[test]
fn solver_matches_the_arc_family_on_a_disk() {
    let opts = SolverOptions { restarts: 4, ..SolverOptions::default() };
    let m = 0.3;
    let p = solve_profile_2d(&unit_disk(), m, &opts).unwrap();
    let arc = orthogonal_arc_value(1.0, m).unwrap();
    assert_eq!(p.family, Family::Arc);
    assert!((p.value - arc).abs() <= 1e-3 * arc);
    assert!(p.value - half_space_profile(2, m).unwrap() >= 0.9 * arc_family_gap(1.0, m).unwrap());
}

#[test]
fn unreachable_obstacle_gives_a_round_disk() {
    let far = ConvexObstacle::ball(vec![50.0, 0.0], 1.0).unwrap();
    let r = 0.5;
    let opts = SolverOptions { restarts: 2, radius: 5.0, ..SolverOptions::default() };
    let p = solve_profile_2d(&far, PI * r * r, &opts).unwrap();
    assert_eq!(p.family, Family::Disk);
    assert!(!p.minimizer.is_attached());
    assert!((p.value - 2.0 * PI * r).abs() <= 1e-3 * 2.0 * PI * r);
}

#[test]
fn profile_checks() {
    let p = HalfSpaceProfile::new(2).unwrap();
    let ms: Vec<f64> = (1..=10).map(|k| 0.1 * k as f64).collect();
    let samples: Vec<(f64, f64)> = ms.iter().map(|&m| (m, p.value(m).unwrap())).collect();
    let lambda = p.derivative(ms[0]).unwrap();
    let r = profile_monotone_lipschitz_check(&samples, lambda, 0.0).unwrap();
    assert!(r.passes() && r.strictly_increasing);
    // Concavity puts the steepest chord first, below I_H′(m′).
    let first = (samples[1].1 - samples[0].1) / (samples[1].0 - samples[0].0);
    assert!(r.max_slope <= lambda && (r.max_slope - first).abs() < 1e-12);

    let mut bad = samples.clone();
    bad[4].1 = bad[3].1 - 0.01;
    let r = profile_monotone_lipschitz_check(&bad, lambda, 1e-6).unwrap();
    assert!(!r.strictly_increasing && !r.passes());
    assert!(profile_monotone_lipschitz_check(&samples[..2], lambda, 0.0).is_err());
}

#[test]
fn young_examples() {
    let half = candidate_profile(&square(), FRAC_PI_8).unwrap().region;
    assert!(weak_young_check(&half).unwrap().violation <= 1e-6);
    let arc = candidate_profile(&unit_disk(), 0.4).unwrap().region;
    assert!(weak_young_check(&arc).unwrap().violation <= 1e-3);
    // A shallow bump meets the wall at an acute angle.
    let heights: Vec<f64> = (0..=256).map(|i| 0.05 * (PI * i as f64 / 256.0).sin()).collect();
    let acute = normal_graph_region(&square(), 0.5, 1.0, &heights).unwrap();
    assert!(weak_young_check(&acute).unwrap().violation > 0.1);
}

#[test]
fn density_examples() {
    let half = candidate_profile(&square(), FRAC_PI_8).unwrap().region;
    let (a, b) = (half.free_chain[0], *half.free_chain.last().unwrap());
    let centre = [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])];
    let r = 0.05;
    // Closed forms for |Ω ∩ B_r(x)| / r².
    assert!((disk_polygon_area(centre, r, &half.boundary) / (r * r) - FRAC_PI_2).abs() < 1e-9);
    // The contact corner looks like a quarter plane as r → 0.
    let rc = 2e-3;
    assert!((disk_polygon_area(a, rc, &half.boundary) / (rc * rc) - FRAC_PI_4).abs() < 1e-2);
    let top = half.free_chain[half.free_chain.len() / 2];
    assert!((disk_polygon_area(top, 1e-3, &half.boundary) / 1e-6 - FRAC_PI_2).abs() < 1e-2);

    let c1 = half_disk_density_constant(FRAC_PI_8, 96).unwrap();
    assert!(c1 > 0.6 && c1 < FRAC_PI_4);
    let rep = density_check(&half, &default_radii(half.area));
    assert!(rep.min_density >= c1 - 1e-2 && rep.max_perimeter_ratio <= 2.0 * PI);
}

#[test]
fn perconv_examples() {
    let half = candidate_profile(&square(), 0.5).unwrap().region;
    let rho = (2.0 * 0.5 / PI).sqrt();
    let r = perconv_check(&half);
    assert!((r.wet - 2.0 * rho).abs() < 1e-9 && (r.free - PI * rho).abs() < 1e-3);
    assert!(r.passes(0.0));

    let disk = candidate_profile(&square(), 40.0).unwrap().region;
    if !disk.is_attached() {
        assert_eq!(perconv_check(&disk).wet, 0.0);
    }
    for c in [square(), unit_disk()] {
        for seed in 0..25 {
            let bump = random_region(&c, seed, false).unwrap();
            assert!(bump.is_valid(1e-12) && perconv_check(&bump).passes(1e-9));
            let thin = random_region(&c, seed, true).unwrap();
            assert!(thin.is_valid(1e-12));
            let sliver = perconv_check(&thin);
            assert!(sliver.passes(1e-9));
            assert!(sliver.free - sliver.wet < 1e-2 * sliver.wet, "{sliver:?}");
        }
    }
}

#[test]
fn eta_examples() {
    let c = square();
    let omega0 = candidate_profile(&c, 1.0).unwrap().region;
    let opts = SolverOptions { restarts: 2, ..SolverOptions::default() };
    let p = eta_profile(&c, &omega0, 0.0, omega0.area, &opts).unwrap();
    assert!(p.saturated && (p.value - omega0.free_length).abs() < 1e-3 * p.value);

    let eta = 0.2;
    let m_eta = eta_mass(&c, &omega0, eta).unwrap();
    let p = eta_profile(&c, &omega0, eta, m_eta, &opts).unwrap();
    assert!(p.saturated);
    // Ω_0 ∖ C_η is the half-disk cut by the line at height η.
    let rho = (2.0 / PI).sqrt();
    assert!((p.value - rho * (PI - 2.0 * (eta / rho).asin())).abs() < 1e-3);
    assert!(eta_profile(&c, &omega0, eta, 1.01 * m_eta, &opts).is_err());
}
