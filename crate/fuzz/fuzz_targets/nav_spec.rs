#![no_main]
use libfuzzer_sys::fuzz_target;

use compass_nav::navigation::{NavKind, NavSpec};

fuzz_target!(|data: &str| {
    if let Ok(kind) = data.parse::<NavKind>() {
        let printed = kind.to_string();
        let again: NavKind = printed.parse().expect("printed kind parses");
        assert_eq!(again.to_string(), printed);
    }
    if let Ok(spec) = serde_json::from_str::<NavSpec>(data) {
        if spec.validate().is_ok() {
            let text = serde_json::to_string(&spec).unwrap();
            assert_eq!(serde_json::from_str::<NavSpec>(&text).unwrap(), spec);
        }
    }
});
