#![no_main]

use haarint::scalar;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok(x) = scalar::parse(data) {
        assert_eq!(scalar::parse(&scalar::format(&x)).unwrap(), x);
    }
});
