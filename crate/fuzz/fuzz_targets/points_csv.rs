#![no_main]

use dmbst::io::parse_points_csv;
use dmbst::Metric;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    for metric in [Metric::Euclidean, Metric::Rectilinear] {
        if let Ok(ps) = parse_points_csv(text, metric) {
            assert!(ps.points().iter().all(|p| p.is_finite()));
            assert_eq!(ps.metric(), metric);
        }
    }
});
