//! Replays the checked-in fuzz seeds with the fuzz targets' assertions.

use std::path::PathBuf;

use gramtri::export::{parse_json, render_json};
use gramtri::parse::{parse_grammar, parse_poly, parse_rational, parse_rational_list};
use gramtri::polyring::fmt_rational;

fn seeds(target: &str) -> Vec<String> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<String> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| std::fs::read_to_string(e.unwrap().path()).unwrap())
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn poly_seeds_round_trip() {
    for src in seeds("parse_poly") {
        let p = parse_poly(&src).unwrap_or_else(|e| panic!("{src:?}: {e}"));
        assert_eq!(parse_poly(&p.to_string()).unwrap(), p);
    }
}

#[test]
fn grammar_seeds_parse() {
    for src in seeds("parse_grammar") {
        let g = parse_grammar(&src).unwrap_or_else(|e| panic!("{src:?}: {e}"));
        for x in g.alphabet() {
            g.apply(&gramtri::LaurentPoly::var(x)).unwrap();
        }
    }
}

#[test]
fn rational_seeds() {
    for src in seeds("parse_rational") {
        if let Ok(q) = parse_rational(&src) {
            assert_eq!(parse_rational(&fmt_rational(&q)).unwrap(), q);
        } else {
            assert!(parse_rational_list(&src, 6).is_ok(), "{src:?}");
        }
    }
}

#[test]
fn json_seeds_are_canonical() {
    for src in seeds("parse_json") {
        let t = parse_json(&src).unwrap_or_else(|e| panic!("{e}"));
        assert_eq!(render_json(&t), src);
    }
}
