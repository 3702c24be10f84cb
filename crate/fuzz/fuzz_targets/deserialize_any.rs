#![no_main]

use kout::decompose::Decomposition;
use kout::outside::{OutsideConfig, OutsideReport};
use kout::KOutDigraph;
use libfuzzer_sys::fuzz_target;

// keeps the per-input work small enough for the fuzzer
const MAX_ARCS: usize = 1 << 12;

fuzz_target!(|data: &[u8]| {
    let Ok(g) = KOutDigraph::deserialize(data) else { return };
    if g.n() > MAX_ARCS || g.arc_count() > MAX_ARCS {
        return;
    }
    let dec = Decomposition::new(&g);
    dec.check(&g).expect("decomposition invariants");
    let config = OutsideConfig { cycle_cap: 256, scc_cap: 10 };
    if let Ok(report) = OutsideReport::new(&g, &dec, &config) {
        report.check().expect("outside invariants");
        assert_eq!(report.eye_violations, 0);
    }
});
