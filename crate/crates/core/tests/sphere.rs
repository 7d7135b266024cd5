use std::f64::consts::PI;

use kplus::mc::McPlan;
use kplus::sphere::*;
use proptest::prelude::*;
use statrs::function::beta::beta_reg;

/// Cap measure through the regularized incomplete beta function:
/// `½ N ω_N I_{sin²θ}((N−1)/2, 1/2)` for `θ ≤ π/2`, complement above.
fn beta_cap(n: usize, theta: f64) -> f64 {
    let total = sphere_measure(n).unwrap();
    let half = |t: f64| 0.5 * total * beta_reg((n as f64 - 1.0) / 2.0, 0.5, t.sin().powi(2));
    if theta <= PI / 2.0 {
        half(theta)
    } else {
        total - half(PI - theta)
    }
}

fn dir(v: &[f64]) -> Direction {
    Direction::normalize(v).unwrap()
}

#[test]
fn ball_volumes() {
    assert_eq!(unit_ball_volume(1).unwrap(), 2.0);
    assert!((unit_ball_volume(2).unwrap() - PI).abs() < 1e-15);
    assert!((unit_ball_volume(3).unwrap() - 4.0 * PI / 3.0).abs() < 1e-15);
}

#[test]
fn cap_measure_against_incomplete_beta() {
    for n in 2..=8 {
        for k in 1..=24 {
            let t = PI * k as f64 / 24.0;
            let want = beta_cap(n, t);
            assert!((cap_measure(n, t).unwrap() - want).abs() <= 1e-12 * want.max(1.0), "N={n} θ={t}");
        }
    }
    for k in 1..=10 {
        let t = PI * k as f64 / 10.0;
        assert!((cap_measure(2, t).unwrap() - 2.0 * t).abs() < 1e-12);
        assert!((cap_measure(3, t).unwrap() - 2.0 * PI * (1.0 - t.cos())).abs() < 1e-12);
    }
    assert!((cap_measure(3, PI / 2.0).unwrap() - 2.0 * PI).abs() < 1e-12);
    assert!(cap_measure(3, -0.1).is_err());
    assert!(cap_measure(1, 0.5).is_err());
}

proptest! {
    #[test]
    fn cap_complement_and_monotone(n in 2usize..9, t in 0.0f64..PI, dt in 1e-6f64..0.5) {
        let total = sphere_measure(n).unwrap();
        let a = cap_measure(n, t).unwrap();
        prop_assert!((a + cap_measure(n, PI - t).unwrap() - total).abs() <= 1e-12 * total);
        let t2 = (t + dt).min(PI);
        if t2 > t {
            prop_assert!(cap_measure(n, t2).unwrap() > a);
        }
    }
}

#[test]
fn uniform_samples_are_unit_centred_and_reproducible() {
    let s = sample_uniform(3, 1_000_000, 11).unwrap();
    let mut mean = [0.0; 3];
    for d in &s {
        let v = d.as_slice();
        assert!((v.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-12);
        for k in 0..3 {
            mean[k] += v[k] / s.len() as f64;
        }
    }
    assert!(mean.iter().map(|x| x * x).sum::<f64>().sqrt() < 4.0 / 1000.0);
    assert_eq!(sample_uniform(2, 4, 3).unwrap().len(), 4);
    assert_eq!(sample_uniform(5, 100, 9).unwrap(), sample_uniform(5, 100, 9).unwrap());
}

#[test]
fn polytope_measure_examples() {
    let plan = McPlan::new(200_000, 5);
    let cap = CapSpec::new(dir(&[0.0, 0.0, 1.0]), 1.1).unwrap();
    assert!(polytope_measure(&cap.to_polytope(), &plan).within(cap_measure(3, 1.1).unwrap(), 3.0));
    let lune = SphericalPolytope::new(3, vec![(dir(&[1.0, 0.0, 0.0]), 0.0), (dir(&[0.0, 1.0, 0.0]), 0.0)]).unwrap();
    assert!(polytope_measure(&lune, &plan).within(PI, 3.0));
    let all = SphericalPolytope::new(4, vec![]).unwrap();
    let e = polytope_measure(&all, &plan);
    assert_eq!(e.value, sphere_measure(4).unwrap());
    assert_eq!(e.stderr, 0.0);
}

#[test]
fn polytope_measure_matches_caps_on_random_pairs() {
    for i in 0..50u64 {
        let n = 2 + (i as usize % 4);
        let axis = sample_uniform(n, 1, 100 + i).unwrap().remove(0);
        let theta = 0.05 + (PI - 0.1) * ((i * 37 % 50) as f64 / 50.0);
        let cap = CapSpec::new(axis, theta).unwrap();
        let est = polytope_measure(&cap.to_polytope(), &McPlan::new(100_000, i));
        assert!(est.within(cap.measure(), 3.5), "pair {i}: {} vs {}", est.value, cap.measure());
    }
}

#[test]
fn spheco_examples() {
    let plan = McPlan::new(400_000, 21);
    let pole = Direction::axis(3, 2);
    let cap = CapSpec::new(pole.clone(), PI / 3.0).unwrap().to_polytope();
    let r = spheco_check(&cap, &pole, PI / 2.0, &plan).unwrap();
    assert!(r.holds(3.0));
    // Full sphere: not spherically convex.
    let full = SphericalPolytope::new(3, vec![]).unwrap();
    assert!(spheco_check(&full, &pole, 1.0, &plan).is_err());
    // Hemisphere with x on its boundary great circle, so that −x ∈ X: equality.
    let hemi = SphericalPolytope::new(3, vec![(Direction::axis(3, 2), 0.0)]).unwrap();
    let x = Direction::axis(3, 0);
    for theta in [0.4, 1.2, 2.5] {
        let r = spheco_check(&hemi, &x, theta, &plan).unwrap();
        assert!(r.margin.abs() <= 3.0 * r.margin_stderr, "θ={theta}: {}", r.margin);
    }
    // Tiny cap around x: lhs = |X|, rhs = |X|/2.
    let tiny = CapSpec::new(pole.clone(), 0.05).unwrap().to_polytope();
    let r = spheco_check(&tiny, &pole, PI / 2.0, &McPlan::new(4_000_000, 2)).unwrap();
    assert!((r.margin - 0.5 * r.measure_x.value).abs() < 1e-12);
    assert!(r.margin > 0.0);
}

#[test]
fn spheco_holds_on_random_convex_polytopes() {
    for i in 0..200u64 {
        let n = 2 + (i as usize % 3);
        let x = sample_uniform(n, 1, 7000 + i).unwrap().remove(0);
        // Constraints a·y ≥ c ≥ 0 satisfied at x.
        let normals = sample_uniform(n, 3, 9000 + i).unwrap();
        let cons: Vec<(Direction, f64)> = normals
            .into_iter()
            .map(|a| {
                let ax: f64 = a.as_slice().iter().zip(x.as_slice()).map(|(p, q)| p * q).sum();
                let a = if ax < 0.0 { a.neg() } else { a };
                let ax = ax.abs();
                (a, 0.5 * ax)
            })
            .collect();
        let p = SphericalPolytope::new(n, cons).unwrap();
        let theta = 0.2 + 2.7 * ((i * 13 % 200) as f64 / 200.0);
        let r = spheco_check(&p, &x, theta, &McPlan::new(20_000, i)).unwrap();
        assert!(r.holds(3.5), "instance {i}: margin {} ± {}", r.margin, r.margin_stderr);
    }
}

#[test]
fn near_equality_forces_antipode_close() {
    // X = {a_φ·y ≥ 0} with a_φ = (sin φ, 0, cos φ), x = e_3: the gap is
    // 2(π/2 − φ) = 2·dist(−x, X) at θ = π/2.
    let x = Direction::axis(3, 2);
    let mut last = (f64::INFINITY, f64::INFINITY);
    for phi in [0.6, 1.0, 1.3, 1.5] {
        let a = Direction::new(vec![f64::sin(phi), 0.0, f64::cos(phi)]).unwrap();
        let p = SphericalPolytope::new(3, vec![(a, 0.0)]).unwrap();
        let r = spheco_check(&p, &x, PI / 2.0, &McPlan::new(400_000, 3)).unwrap();
        let d = PI / 2.0 - phi;
        assert!((r.margin - 2.0 * d).abs() <= 3.0 * r.margin_stderr + 1e-9);
        assert!(r.margin < last.0 + 3.0 * r.margin_stderr && d < last.1);
        last = (r.margin, d);
    }
}
