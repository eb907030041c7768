#![no_main]
use libfuzzer_sys::fuzz_target;
use oam_rcs::beam::{estimate_mode_from_wavefront, parse_wavefront_csv};

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(samples) = parse_wavefront_csv(s, "fuzz") {
            let _ = estimate_mode_from_wavefront(&samples);
        }
    }
});
