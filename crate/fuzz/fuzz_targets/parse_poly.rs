#![no_main]

use gramtri::parse::parse_poly;
use libfuzzer_sys::fuzz_target;

// Whatever parses must survive a render/parse round trip.
fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else { return };
    if let Ok(p) = parse_poly(src) {
        let text = p.to_string();
        assert_eq!(parse_poly(&text).expect("rendered polynomial parses"), p, "{text}");
    }
});
