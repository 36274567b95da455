#![no_main]

use haarint::tableaux::Partition;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok(p) = data.parse::<Partition>() {
        assert_eq!(p.to_string().parse::<Partition>().unwrap(), p);
    }
});
