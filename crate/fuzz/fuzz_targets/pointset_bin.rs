#![no_main]
use libfuzzer_sys::fuzz_target;

use compass_nav::point_process::io::{read_binary, write_binary};

fuzz_target!(|data: &[u8]| {
    if let Ok(ps) = read_binary(data) {
        let mut buf = Vec::new();
        write_binary(&ps, &mut buf).expect("accepted set writes");
        let back = read_binary(&buf).expect("written set reads back");
        assert_eq!(back.meta(), ps.meta());
        assert_eq!(back.points(), ps.points());
    }
});
