#![no_main]

use libfuzzer_sys::fuzz_target;
use superclaim::io::{from_json, to_json};

fuzz_target!(|text: &str| {
    if let Ok(doc) = from_json(text) {
        assert_eq!(from_json(&to_json(&doc)).expect("re-read").entries, doc.entries);
    }
});
