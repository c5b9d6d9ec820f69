#![no_main]
use libfuzzer_sys::fuzz_target;

use compass_nav::harness::read_results_json;

fuzz_target!(|data: &str| {
    if let Ok(file) = read_results_json(data) {
        let text = serde_json::to_string(&file).unwrap();
        let back = read_results_json(&text).expect("written results read back");
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }
});
