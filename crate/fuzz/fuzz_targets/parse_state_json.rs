#![no_main]
use libfuzzer_sys::fuzz_target;

use mqc_cli::config::parse_state_json;

fuzz_target!(|data: &[u8]| {
    if let Ok(rho) = parse_state_json(data) {
        // Anything accepted is square, Hermitian within tolerance, and
        // unit trace within tolerance.
        assert!(rho.dim() >= 1);
        assert!(rho.hermitian_residual() <= 1e-8);
        assert!((rho.trace().re - 1.0).abs() <= 1e-6);
    }
});
