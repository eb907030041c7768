#![no_main]
use libfuzzer_sys::fuzz_target;
use oam_rcs::scene::parse_profile_csv;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(profile) = parse_profile_csv(s, "fuzz") {
            for phi in [-7.0, 0.0, 0.5, 3.0, 6.2, 100.0] {
                let v = profile.eval(phi);
                assert!(v.is_finite() && v >= 0.0);
            }
        }
    }
});
