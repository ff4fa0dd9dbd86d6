#![no_main]

use griddom::tropical::tmx;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    // Anything that decodes must encode back to the same bytes.
    if let Ok((header, m)) = tmx::decode(data) {
        let bytes = tmx::encode(&header, &m).expect("decoded matrix re-encodes");
        assert_eq!(bytes, data);
    }
});
