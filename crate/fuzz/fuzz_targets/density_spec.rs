#![no_main]
use libfuzzer_sys::fuzz_target;

use compass_nav::geometry::Point;
use compass_nav::point_process::{DensityKind, DensitySpec};

fuzz_target!(|data: &str| {
    if let Ok(kind) = data.parse::<DensityKind>() {
        let printed = kind.to_string();
        let again: DensityKind = printed.parse().expect("printed density parses");
        assert_eq!(again.to_string(), printed);
    }
    if let Ok(spec) = serde_json::from_str::<DensitySpec>(data) {
        if spec.validate().is_ok() {
            let d = spec.domain;
            let (m, big) = (spec.min_value(), spec.max_value());
            for p in [Point::new(d.x0, d.y0), Point::new(d.x1, d.y1), d.center()] {
                let f = spec.eval(p);
                assert!(f.is_finite() && f >= m - 1e-9 * big.abs(), "f = {f} below infimum {m}");
            }
            let text = serde_json::to_string(&spec).unwrap();
            assert_eq!(serde_json::from_str::<DensitySpec>(&text).unwrap(), spec);
        }
    }
});
