#![no_main]

use haarint::alphabet::Alphabet;
use haarint::tensor_algebra::SparseTensor;
use libfuzzer_sys::fuzz_target;

// first byte picks the alphabet; the rest is the JSON text
fuzz_target!(|data: &[u8]| {
    let [a, rest @ ..] = data else { return };
    let n = 1 + (*a as usize >> 2) % 4;
    let alphabet = match a % 3 {
        0 => Alphabet::plain(n),
        1 => Alphabet::orthogonal(n),
        _ => Alphabet::symplectic(n),
    };
    let Ok(text) = std::str::from_utf8(rest) else { return };
    if let Ok(t) = SparseTensor::from_json(text, alphabet, None) {
        assert_eq!(SparseTensor::from_json(&t.to_json(), alphabet, Some(t.order())).unwrap(), t);
    }
});
