#![no_main]

use griddom::words::{compatible, Word};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    let (a, b) = s.split_once(',').unwrap_or((s, s));
    let Ok(w) = a.parse::<Word>() else {
        return;
    };
    assert_eq!(w.to_string(), a);
    if let Ok(w2) = b.parse::<Word>() {
        let _ = compatible(w, w2);
    }
});
