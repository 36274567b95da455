#![no_main]

use haarint::weingarten_engine::MonomialSpec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok(s) = MonomialSpec::from_json(data) {
        assert_eq!(MonomialSpec::from_json(&s.to_json()).unwrap(), s);
    }
});
