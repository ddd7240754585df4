#![no_main]

use dmbst::io::parse_points_json;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(ps) = parse_points_json(text, None) {
        // anything accepted must be usable downstream
        assert!(ps.points().iter().all(|p| p.is_finite()));
        if ps.len() >= 2 && ps.len() <= 64 {
            let t = dmbst::mst(&ps).expect("valid point sets have an MST");
            assert_eq!(t.len(), ps.len());
        }
    }
});
