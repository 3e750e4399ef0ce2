#![no_main]

use latk3::lattice::{parse_gram_json, to_gram_json};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(l) = parse_gram_json(s) {
            let back = parse_gram_json(&to_gram_json(&l).to_string()).expect("round trip");
            assert_eq!(back.gram(), l.gram());
        }
    }
});
