#![no_main]
use libfuzzer_sys::fuzz_target;

use mqc_cli::config::parse_bell;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(params) = parse_bell(s) {
            // Accepted parameters are physical by construction.
            assert!(params.eigenvalues().iter().all(|&v| v >= -1e-12));
        }
    }
});
