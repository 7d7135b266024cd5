use std::f64::consts::PI;

use kplus_cli::verify::{hausdorff_to_half_circle, parallel_map};

fn half_polygon(n: usize, r: f64, c: [f64; 2]) -> Vec<[f64; 2]> {
    (0..=n)
        .map(|i| {
            let t = -PI / 2.0 + PI * i as f64 / n as f64;
            [c[0] + r * t.cos(), c[1] + r * t.sin()]
        })
        .collect()
}

#[test]
fn inscribed_polygon_is_within_its_sagitta() {
    for n in [8, 32, 96] {
        let r = 0.7;
        let d = hausdorff_to_half_circle(&half_polygon(n, r, [1.0, 0.3]));
        let sag = r * (1.0 - (PI / (2.0 * n as f64)).cos());
        assert!((d - sag).abs() < 1e-3 * sag + 1e-9, "n {n}: {d} vs {sag}");
    }
}

#[test]
fn a_flattened_chain_is_far_from_the_circle() {
    let mut p = half_polygon(64, 1.0, [0.0, 0.0]);
    for q in &mut p {
        q[0] *= 0.5;
    }
    let d = hausdorff_to_half_circle(&p);
    assert!((d - 0.5).abs() < 1e-3, "{d}");
}

#[test]
fn parallel_map_keeps_order() {
    let xs: Vec<u64> = (0..100).collect();
    assert_eq!(parallel_map(&xs, 4, |x| x * x), xs.iter().map(|x| x * x).collect::<Vec<_>>());
}
