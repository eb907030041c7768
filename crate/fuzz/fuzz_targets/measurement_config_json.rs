#![no_main]
use libfuzzer_sys::fuzz_target;
use oam_rcs::MeasurementConfig;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(cfg) = MeasurementConfig::from_json_str(s, "fuzz") {
            assert!(cfg.validate().is_ok());
            assert!(cfg.wavelength_m() > 0.0);
        }
    }
});
