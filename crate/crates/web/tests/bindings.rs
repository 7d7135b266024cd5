use std::f64::consts::{FRAC_PI_2, PI};

use serde_json::Value;

fn parse(s: Result<String, wasm_bindgen::JsValue>) -> Value {
    serde_json::from_str(&s.expect("binding succeeds")).unwrap()
}

#[test]
fn profile_on_the_square_is_a_half_disk() {
    let r = parse(kplus_web::solve_profile("square", 0.6, 64, 2));
    let value = r["value"].as_f64().unwrap();
    let hs = r["half_space"].as_f64().unwrap();
    assert!((value - hs).abs() < 1e-3 * hs, "{value} vs {hs}");
    assert_eq!(r["family"], "facet");
    assert!(r["free_chain"].as_array().unwrap().len() > 10);
}

#[test]
fn cloud_bundle_reports_hull_and_width() {
    let coords = [0.0, 0.0, 100.0, 0.0, 100.0, 50.0, 0.0, 50.0, 50.0, 25.0];
    let r = parse(kplus_web::cloud_bundle(&coords, 1.0, 20_000, 1));
    assert_eq!(r["hull"].as_array().unwrap().len(), 4);
    assert!((r["width"].as_f64().unwrap() - 50.0).abs() < 1e-9);
    let (b, se) = (r["bundle"].as_f64().unwrap(), r["stderr"].as_f64().unwrap());
    assert!(b >= r["cap"].as_f64().unwrap() - 3.0 * se && b <= 2.0 * PI + 1e-12);
}

#[test]
fn cap_check_reports_the_gate() {
    let ok = parse(kplus_web::cap_check(FRAC_PI_2, FRAC_PI_2, 12, 20_000, 1));
    assert_eq!(ok["gate"], true);
    assert!(ok["margin"].as_f64().unwrap() > -4.0 * ok["h"].as_f64().unwrap());
    let steep = parse(kplus_web::cap_check(PI / 3.0, FRAC_PI_2, 12, 20_000, 1));
    assert_eq!(steep["gate"], false);
}
