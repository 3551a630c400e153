#![no_main]

use khsing::genusone::SkeinReport;
use khsing::invariants::LaurentPoly;
use khsing::HomologySummary;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(h) = HomologySummary::from_json(text) {
        assert_eq!(HomologySummary::from_json(&h.to_json()).unwrap(), h);
    }
    if let Ok(r) = SkeinReport::from_json(text) {
        assert_eq!(SkeinReport::from_json(&r.to_json()).unwrap(), r);
    }
    if let Ok(p) = LaurentPoly::from_json(text) {
        assert_eq!(LaurentPoly::from_json(&p.to_json()).unwrap(), p);
    }
});
