#![no_main]

use latk3::cyclo::{cyclotomic_poly, parse_field_elem};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Some((&n, rest)) = data.split_first() else {
        return;
    };
    let m = cyclotomic_poly(u64::from(n % 40) + 1);
    if let Ok(s) = std::str::from_utf8(rest) {
        if let Ok(a) = parse_field_elem(s, &m) {
            // printing and parsing again gives the same element
            let b = parse_field_elem(&a.to_string(), &m).expect("printed form parses");
            assert_eq!(a, b);
        }
    }
});
