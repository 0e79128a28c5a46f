#![no_main]

use libfuzzer_sys::fuzz_target;
use qclone_core::table::TabulatedDensity;

fuzz_target!(|data: &[u8]| {
    if let Ok(t) = TabulatedDensity::from_bytes(data) {
        assert!(t.xs().windows(2).all(|w| w[0] < w[1]));
        assert!(t.values().iter().all(|g| g.is_finite() && *g >= 0.0));
        for x in [-1.0, -0.5, 0.0, 0.5, 1.0] {
            assert!(t.eval(x) >= 0.0);
        }
    }
});
