#![no_main]

use gramtri::export::{parse_json, render_json};
use libfuzzer_sys::fuzz_target;

// Accepted documents are canonical: they re-render byte for byte.
fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else { return };
    if let Ok(t) = parse_json(src) {
        let again = render_json(&t);
        assert_eq!(parse_json(&again).expect("rendered json parses"), t);
    }
});
