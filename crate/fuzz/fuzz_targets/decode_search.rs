#![no_main]

use libfuzzer_sys::fuzz_target;
use superclaim::resolver::{decode, SearchSource};

fuzz_target!(|text: &str| {
    for source in SearchSource::ALL {
        if let Ok(cands) = decode(source, text) {
            for (i, c) in cands.iter().enumerate() {
                assert!(c.rank >= 1);
                assert!(i == 0 || cands[i - 1].rank < c.rank);
            }
        }
    }
});
