#![no_main]

use libfuzzer_sys::fuzz_target;
use superclaim::agreement::{parse_confidence, parse_marks, render_report, Stage};

fuzz_target!(|text: &str| {
    if let Ok(mut marks) = parse_marks(text, Stage::BeforeDiscussion) {
        let _ = render_report(&marks);
        let _ = parse_confidence(text, &mut marks);
    }
});
