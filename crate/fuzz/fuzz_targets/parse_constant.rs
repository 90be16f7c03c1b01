#![no_main]

use kni_core::exactfield::parse_constant;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    match parse_constant(s) {
        Ok(c) => assert_eq!(parse_constant(&c.pretty()).expect("pretty form parses"), c),
        Err(e) => assert!(e.column >= 1),
    }
});
