#![no_main]

use griddom::bounds::GammaCertificate;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(cert) = serde_json::from_slice::<GammaCertificate>(data) else {
        return;
    };
    let _ = cert.validate();
    let again = serde_json::to_vec(&cert).expect("certificates serialize");
    let back: GammaCertificate = serde_json::from_slice(&again).expect("own output parses");
    assert_eq!(back, cert);
});
