#![no_main]

use gramtri::parse::parse_grammar;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else { return };
    if let Ok(g) = parse_grammar(src) {
        // one derivation step must not panic
        for x in g.alphabet() {
            let _ = g.apply(&gramtri::LaurentPoly::var(x));
        }
    }
});
