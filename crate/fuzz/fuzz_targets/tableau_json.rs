#![no_main]

use haarint::tableaux::{GroupTag, Tableau};
use libfuzzer_sys::fuzz_target;

// first byte picks the group, second the size; the rest is the JSON text
fuzz_target!(|data: &[u8]| {
    let [g, n, rest @ ..] = data else { return };
    let group = [GroupTag::GL, GroupTag::O, GroupTag::SO, GroupTag::Sp][*g as usize % 4];
    let n = 1 + *n as usize % 6;
    let Ok(text) = std::str::from_utf8(rest) else { return };
    if let Ok(t) = Tableau::from_json(text, group, n) {
        assert_eq!(Tableau::from_json(&t.to_json().to_string(), group, n).unwrap(), t);
    }
});
