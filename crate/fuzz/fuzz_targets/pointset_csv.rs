#![no_main]
use libfuzzer_sys::fuzz_target;

use compass_nav::point_process::io::{read_csv, write_csv};

fuzz_target!(|data: &[u8]| {
    if let Ok(ps) = read_csv(data) {
        let mut buf = Vec::new();
        write_csv(&ps, &mut buf).expect("accepted set writes");
        let back = read_csv(buf.as_slice()).expect("written set reads back");
        assert_eq!(back.meta(), ps.meta());
        assert_eq!(back.points(), ps.points());
    }
});
