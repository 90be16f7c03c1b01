#![no_main]

use kni_core::exactfield::RatFn;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(f) = s.parse::<RatFn>() {
        let back: RatFn = f.to_text().parse().expect("text form parses");
        assert_eq!(back, f);
    }
});
