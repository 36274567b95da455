#![no_main]

use haarint::weingarten_engine::{parse_factors, MonomialSpec};
use haarint::Group;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok(fs) = parse_factors(data) {
        // validation must reject, not panic, on out-of-range indices
        let _ = MonomialSpec::new(Group::U, 3, fs);
    }
});
