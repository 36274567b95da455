#![no_main]

use haarint::irrep_engine::RepMatrixElementSpec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok(s) = RepMatrixElementSpec::from_json(data) {
        assert_eq!(RepMatrixElementSpec::from_json(&s.to_json()).unwrap(), s);
    }
});
