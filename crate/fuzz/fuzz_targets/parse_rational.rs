#![no_main]

use gramtri::parse::{parse_rational, parse_rational_list};
use gramtri::polyring::fmt_rational;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else { return };
    if let Ok(q) = parse_rational(src) {
        assert_eq!(parse_rational(&fmt_rational(&q)).expect("canonical form parses"), q);
    }
    let _ = parse_rational_list(src, 6);
});
