#![no_main]

use latk3::lattice::parse_lattice_expr_with;
use latk3::Error;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        // no file access from the fuzzer
        let mut load = |p: &str| Err(Error::Io(p.to_string()));
        if let Ok(l) = parse_lattice_expr_with(s, &mut load) {
            let (p, q) = l.signature();
            assert_eq!(p + q, l.rank());
        }
    }
});
