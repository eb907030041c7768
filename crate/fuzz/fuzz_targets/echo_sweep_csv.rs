#![no_main]
use libfuzzer_sys::fuzz_target;
use oam_rcs::measurement::{parse_echo_sweep_csv, reduce_sweep_to_rcs};
use oam_rcs::MeasurementConfig;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(sweep) = parse_echo_sweep_csv(s, "fuzz") {
            assert!(!sweep.is_empty());
            let _ = reduce_sweep_to_rcs(&sweep, &MeasurementConfig::default());
        }
    }
});
