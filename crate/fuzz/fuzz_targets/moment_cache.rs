#![no_main]
use libfuzzer_sys::fuzz_target;

use compass_nav::limits::MomentCache;

fuzz_target!(|data: &[u8]| {
    if let Ok(cache) = serde_json::from_slice::<MomentCache>(data) {
        let text = serde_json::to_vec(&cache).unwrap();
        let back: MomentCache = serde_json::from_slice(&text).expect("written cache reads back");
        assert_eq!(back.len(), cache.len());
        assert_eq!(serde_json::to_vec(&back).unwrap(), text);
    }
});
