#![no_main]

use haarint::su2_wigner::{su2_integral_exact, Su2MonomialSpec};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok(s) = Su2MonomialSpec::from_json(data) {
        assert_eq!(Su2MonomialSpec::from_json(&s.to_json()).unwrap(), s);
        if s.factors.len() <= 6 && s.factors.iter().all(|f| f.twice_j <= 8) {
            let _ = su2_integral_exact(&s);
        }
    }
});
