#![no_main]

use kout::KOutDigraph;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(g) = KOutDigraph::from_bytes(data) {
        assert_eq!(g.to_bytes(), data);
    }
});
