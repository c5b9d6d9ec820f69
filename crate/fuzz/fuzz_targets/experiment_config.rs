#![no_main]
use libfuzzer_sys::fuzz_target;

use compass_nav::harness::{generate_pairs, ExperimentConfig};

fuzz_target!(|data: &str| {
    if let Ok(config) = ExperimentConfig::from_json(data) {
        let again = ExperimentConfig::from_json(&config.to_json()).expect("printed config parses");
        assert_eq!(again, config);
        if let Ok(pairs) = generate_pairs(&config) {
            assert!(!pairs.is_empty());
        }
    }
});
