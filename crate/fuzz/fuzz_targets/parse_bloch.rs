#![no_main]
use libfuzzer_sys::fuzz_target;

use mqc_cli::config::parse_bloch;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(b) = parse_bloch(s) {
            assert!(b.radius() > 0.0 && b.radius() < 1.0);
        }
    }
});
