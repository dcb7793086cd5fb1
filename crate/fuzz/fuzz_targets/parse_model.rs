#![no_main]

use libfuzzer_sys::fuzz_target;
use superclaim::io::{emit_model, parse_model};

fuzz_target!(|text: &str| {
    if let Ok(m) = parse_model(text) {
        assert_eq!(parse_model(&emit_model(&m)).expect("re-read"), m);
    }
});
