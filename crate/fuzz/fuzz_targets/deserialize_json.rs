#![no_main]

use kout::KOutDigraph;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok(g) = KOutDigraph::from_json(data) {
        let again = KOutDigraph::from_json(&g.to_json()).expect("own JSON output parses");
        assert_eq!(g, again);
    }
});
