#![no_main]

use dmbst::io::{grid_to_json, parse_grid_json};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(g) = parse_grid_json(text) {
        let again = serde_json::to_string(&grid_to_json(&g)).expect("grid serializes");
        assert_eq!(parse_grid_json(&again).expect("round trip parses"), g);
        if g.len() <= dmbst::oracle::MAX_HAMPATH_VERTICES {
            let _ = dmbst::oracle::hamiltonian_path_exists(&g);
        }
    }
});
