#![no_main]

use kni_core::variational::VarSystem;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(sys) = s.parse::<VarSystem>() {
        let back: VarSystem = sys.to_text().parse().expect("text form parses");
        assert_eq!(back.to_text(), sys.to_text());
    }
});
