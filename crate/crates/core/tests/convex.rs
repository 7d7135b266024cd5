use std::f64::consts::{FRAC_1_SQRT_2, PI};

use kplus::convex::*;
use kplus::mc::{directions, McPlan};
use kplus::sphere::{cap_measure, Direction};
use kplus::stability::{calibrate_delta, excess_nonincreasing, slab_family};
use proptest::prelude::*;

fn cloud(dim: usize, pts: &[&[f64]]) -> PointCloud {
    PointCloud::from_points(dim, pts.iter().map(|p| p.to_vec()).collect()).unwrap()
}

fn square() -> PointCloud {
    cloud(2, &[&[0.0, 0.0], &[1.0, 0.0], &[1.0, 1.0], &[0.0, 1.0]])
}

fn cube() -> PointCloud {
    let mut pts = Vec::new();
    for i in 0..8 {
        pts.push(vec![(i & 1) as f64, ((i >> 1) & 1) as f64, ((i >> 2) & 1) as f64]);
    }
    PointCloud::from_points(3, pts).unwrap()
}

#[test]
fn normal_cone_membership() {
    let x = cloud(2, &[&[0.0, 0.0], &[1.0, 0.0]]);
    assert!(in_normal_cone(&x, 0, &[-1.0, 0.0], 1e-12));
    assert!(!in_normal_cone(&x, 0, &[1.0, 0.0], 1e-12));
    let s = square();
    assert!(in_normal_cone(&s, 2, &[FRAC_1_SQRT_2, FRAC_1_SQRT_2], 1e-12));
}

#[test]
fn support_sets() {
    let s = square();
    let mut right = support_set(&s, &[1.0, 0.0], 1e-9);
    right.sort();
    assert_eq!(right, vec![1, 2]);
    assert_eq!(support_set(&s, &[FRAC_1_SQRT_2, FRAC_1_SQRT_2], 1e-9), vec![2]);
    let one = cloud(3, &[&[0.3, -0.2, 0.1]]);
    assert_eq!(support_set(&one, &[0.0, 0.6, 0.8], 1e-9), vec![0]);
}

#[test]
fn bundle_examples() {
    let plan = McPlan::new(200_000, 8);
    let one = cloud(3, &[&[0.1, 0.2, 0.3]]);
    let sigma = NormalSelector::constant(&one, Direction::axis(3, 2)).unwrap();
    let e = bundle_measure(&one, &sigma, 1.0, &plan).unwrap();
    assert!(e.within(cap_measure(3, 1.0).unwrap(), 3.0));

    let pts: Vec<Vec<f64>> = directions(2, 20, 4).into_iter().enumerate().map(|(i, d)| {
        let r = 0.2 + 0.04 * i as f64;
        vec![r * d[0], r * d[1], 0.0]
    }).collect();
    let flat = PointCloud::from_points(3, pts).unwrap();
    let sigma = NormalSelector::constant(&flat, Direction::axis(3, 2)).unwrap();
    assert!(bundle_measure(&flat, &sigma, PI / 2.0, &plan).unwrap().within(2.0 * PI, 3.0));

    let c = cube();
    let sigma = NormalSelector::new(
        &c,
        c.points.iter().map(|p| Direction::normalize(&p.iter().map(|v| v - 0.5).collect::<Vec<_>>()).unwrap()).collect(),
    )
    .unwrap();
    let e = bundle_measure(&c, &sigma, PI / 2.0, &plan).unwrap();
    assert!(e.value > 2.0 * PI + 3.0 * e.stderr, "{} ± {}", e.value, e.stderr);
}

#[test]
fn bundle_is_monotone_in_theta() {
    let c = cube();
    let sigma = NormalSelector::toward(&c, &Direction::axis(3, 2)).unwrap();
    let plan = McPlan::new(100_000, 3);
    let mut prev = 0.0;
    for k in 1..=8 {
        let e = bundle_measure(&c, &sigma, PI * k as f64 / 8.0, &plan).unwrap();
        // Shared samples make the hit sets nested.
        assert!(e.value >= prev);
        prev = e.value;
    }
}

#[test]
fn widths() {
    assert_eq!(width(&cloud(3, &[&[0.0, 0.0, 0.0], &[1.0, 2.0, 3.0]]), 4, 1e-12).value, 0.0);
    assert!((width(&square(), 4, 1e-12).value - 1.0).abs() < 1e-12);
    let w = width(&cube(), 4, 1e-12);
    assert!((w.value - 1.0).abs() < 1e-12 && w.exact);
}

#[test]
fn width_certificate_against_sampled_directions() {
    for seed in 0..6u64 {
        for dim in [2usize, 3, 4] {
            let pts = directions(dim, 15, seed).into_iter().enumerate().map(|(i, d)| {
                d.iter().enumerate().map(|(k, v)| v * (1.0 + 0.3 * ((i + k) % 3) as f64)).collect()
            }).collect();
            let x = PointCloud::from_points(dim, pts).unwrap();
            let w = width(&x, 16, 1e-12);
            assert!((extent(&x.points, w.direction.as_slice()) - w.value).abs() < 1e-10);
            let best = directions(dim, 100_000, 77 + seed).iter().map(|d| extent(&x.points, d)).fold(f64::INFINITY, f64::min);
            assert!(best >= w.lower_bound - 1e-10, "dim {dim}: sampled {best} below {}", w.lower_bound);
        }
    }
}

#[test]
fn obstacle_normals_and_projections() {
    let ball = ConvexObstacle::ball(vec![0.0, 0.0], 2.0).unwrap();
    assert_eq!(ball.normal(&[2.0, 0.0], 1e-9).unwrap().normal.as_slice(), &[1.0, 0.0]);
    let sq = ConvexObstacle::cube(&[0.0, 0.0], 1.0).unwrap();
    assert_eq!(sq.normal(&[1.0, 0.0], 1e-9).unwrap().normal.as_slice(), &[1.0, 0.0]);
    let eta = 0.3;
    let dil = ConvexObstacle::dilation(sq.clone(), eta).unwrap();
    let a = 0.7f64;
    let x = [1.0 + eta * a.cos(), 1.0 + eta * a.sin()];
    let n = dil.normal(&x, 1e-9).unwrap().normal;
    assert!((n.as_slice()[0] - a.cos()).abs() < 1e-12 && (n.as_slice()[1] - a.sin()).abs() < 1e-12);

    assert_eq!(sq.project(&[0.2, -0.4]), vec![0.2, -0.4]);
    let p = ConvexObstacle::ball(vec![0.0, 0.0], 1.0).unwrap().project(&[2.0, 0.0]);
    assert!((p[0] - 1.0).abs() < 1e-15 && p[1].abs() < 1e-15);
    let unit = ConvexObstacle::aabb(&[0.0, 0.0], &[1.0, 1.0]).unwrap();
    let p = unit.project(&[2.0, 2.0]);
    assert!((p[0] - 1.0).abs() < 1e-12 && (p[1] - 1.0).abs() < 1e-12);
}

fn obstacles() -> Vec<ConvexObstacle> {
    let poly = ConvexObstacle::polytope(
        vec![vec![1.0, 0.2, 0.0], vec![-0.3, 1.0, 0.1], vec![0.0, -0.5, 1.0], vec![-1.0, -1.0, -1.0]],
        vec![1.0, 0.7, 0.9, 1.2],
    )
    .unwrap();
    vec![
        ConvexObstacle::cube(&[0.1, -0.2, 0.3], 0.8).unwrap(),
        ConvexObstacle::ball(vec![0.0, 0.5, 0.0], 1.3).unwrap(),
        ConvexObstacle::dilation(poly.clone(), 0.25).unwrap(),
        poly,
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2500))]
    #[test]
    fn projection_is_idempotent_and_nonexpansive(
        which in 0usize..4,
        x in prop::array::uniform3(-4.0f64..4.0),
        y in prop::array::uniform3(-4.0f64..4.0),
    ) {
        let c = &obstacles()[which];
        let (px, py) = (c.project(&x), c.project(&y));
        let ppx = c.project(&px);
        let d = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(p, q)| (p - q).powi(2)).sum::<f64>().sqrt();
        prop_assert!(d(&ppx, &px) <= 1e-10);
        prop_assert!(d(&px, &py) <= d(&x, &y) + 1e-10);
    }

    #[test]
    fn bundle_dominates_cap(seed in 0u64..1_000_000, dim in 2usize..5, k in 1usize..25, frac in 0.5f64..1.0) {
        let pts = directions(dim, k as u64, seed).into_iter().enumerate()
            .map(|(i, d)| d.iter().map(|v| v * (0.2 + 1.8 * ((i * 7 + 3) % 11) as f64 / 11.0)).collect())
            .collect();
        let x = PointCloud::from_points(dim, pts).unwrap();
        let sigma = NormalSelector::toward(&x, &Direction::axis(dim, dim - 1)).unwrap();
        let theta = frac * PI / 2.0;
        let e = bundle_measure(&x, &sigma, theta, &McPlan::new(20_000, seed)).unwrap();
        prop_assert!(e.value >= cap_measure(dim, theta).unwrap() - 3.5 * e.stderr);
    }
}

#[test]
fn slab_family_flattens_to_equality() {
    let heights = [0.2, 0.1, 0.05, 0.025, 0.0];
    let rows = slab_family(3, 30, 1.0, &heights, PI / 2.0, &McPlan::new(200_000, 1), 6).unwrap();
    for r in &rows {
        assert!(r.width <= r.t);
    }
    assert!(excess_nonincreasing(&rows, 3.0));
    let last = rows.last().unwrap();
    assert!(last.excess.abs() <= 3.0 * last.bundle.stderr);
    let obs: Vec<(f64, f64)> = rows.iter().map(|r| (r.width, r.excess)).collect();
    let table = calibrate_delta(&obs, &[0.0, 0.03, 0.06, 0.12, 0.25]);
    assert!(table.is_monotone());
    assert_eq!(table.violations(&obs), 0);
}
