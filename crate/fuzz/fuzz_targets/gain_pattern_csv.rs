#![no_main]
use libfuzzer_sys::fuzz_target;
use oam_rcs::beam::{gain_at, parse_gain_pattern_csv};

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(pattern) = parse_gain_pattern_csv(s, "fuzz") {
            for phi in [-1.0, 0.0, 0.3, 1.6, 3.2] {
                assert!(gain_at(&pattern, 0.0, phi) > 0.0);
            }
        }
    }
});
