#![no_main]

use dmbst_cli::manifest::parse_manifest;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(m) = parse_manifest(text) {
        let again = serde_json::to_string(&m).expect("manifest serializes");
        assert_eq!(parse_manifest(&again).expect("round trip parses"), m);
    }
});
