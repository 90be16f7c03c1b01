#![no_main]

use kni_cli::Report;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(r) = s.parse::<Report>() {
        let text = r.to_text();
        let back: Report = text.parse().expect("text form parses");
        assert_eq!(back.to_text(), text);
    }
});
