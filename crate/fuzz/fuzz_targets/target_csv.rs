#![no_main]
use libfuzzer_sys::fuzz_target;
use oam_rcs::scene::parse_target_csv;
use oam_rcs::RcsProfile;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        let parsed = parse_target_csv(s, "fuzz", |_| RcsProfile::constant(1.0));
        if let Ok(target) = parsed {
            assert!(!target.is_empty());
            assert!(target.scatterers().iter().all(|p| p.position.is_finite()));
            let _ = target.rotated_about_centroid(1.0);
        }
    }
});
