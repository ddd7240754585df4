#![no_main]

use dmbst::io::parse_fixture_json;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(f) = parse_fixture_json(text) {
        // small fixtures are cheap enough to verify end to end; errors are fine, panics are not
        if f.points.len() <= 8 {
            let _ = dmbst::starsearch::verify_fixture_file(&f);
        }
    }
});
