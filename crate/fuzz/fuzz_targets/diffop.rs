#![no_main]

use kni_core::opalgebra::DiffOp;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(l) = s.parse::<DiffOp>() {
        let back: DiffOp = l.to_text().parse().expect("text form parses");
        assert_eq!(back, l);
    }
});
