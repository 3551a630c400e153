#![no_main]

use khsing::diagram::Diagram;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(d) = Diagram::from_json(text) {
        // accepted diagrams must survive a round trip
        let back = Diagram::from_json(&d.to_json()).expect("serialized diagram parses");
        assert_eq!(back, d);
    }
});
