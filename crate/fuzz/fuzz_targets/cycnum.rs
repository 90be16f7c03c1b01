#![no_main]

use kni_core::exactfield::CycNum;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(z) = s.parse::<CycNum>() {
        let back: CycNum = z.to_string().parse().expect("display form parses");
        assert_eq!(back, z);
    }
});
