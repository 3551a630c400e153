#![no_main]

use khsing::diagram::{Braid, Diagram};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(b) = Braid::parse(text) {
        if b.word.len() <= 64 {
            let d = b.closure();
            assert_eq!(Diagram::from_json(&d.to_json()).unwrap(), d);
        }
    }
});
