#![no_main]
use libfuzzer_sys::fuzz_target;

use mqc_cli::config::parse_grid;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(grid) = parse_grid(s) {
            // Accepted grids must materialize without panicking and stay
            // within the advertised point budget.
            let values = grid.values();
            assert!(values.len() <= mqc_cli::config::MAX_GRID_POINTS);
            assert!(values.iter().all(|v| v.is_finite()));
        }
    }
});
