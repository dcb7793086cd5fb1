#![no_main]

use libfuzzer_sys::fuzz_target;
use superclaim::{parse_qualifier, parse_relation};

fuzz_target!(|text: &str| {
    if let Ok(q) = parse_qualifier(text) {
        assert_eq!(parse_qualifier(&q.to_string()).ok(), Some(q));
    }
    if let Ok(r) = parse_relation(text) {
        assert_eq!(parse_relation(&r.id()).ok(), Some(r));
    }
});
