#![no_main]

use kni_cli::Config;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(c) = s.parse::<Config>() {
        let back: Config = c.to_string().parse().expect("display form parses");
        assert_eq!(back, c);
    }
});
