#![no_main]

use libfuzzer_sys::fuzz_target;
use superclaim::io::{emit_claims, parse_claims};

fuzz_target!(|text: &str| {
    // Anything accepted must survive a canonical re-emit.
    if let Ok(doc) = parse_claims(text) {
        let out = emit_claims(&doc);
        let back = parse_claims(&out).expect("emitted text must parse");
        assert_eq!(back.entries, doc.canonicalized().entries);
    }
});
