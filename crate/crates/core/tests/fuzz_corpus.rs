//! Replays the checked-in fuzz corpus through the same checks as the fuzz targets.

use std::fs;
use std::path::Path;

use kout::decompose::Decomposition;
use kout::outside::{OutsideConfig, OutsideReport};
use kout::KOutDigraph;

fn corpus(target: &str) -> Vec<Vec<u8>> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut entries: Vec<_> = fs::read_dir(&dir).unwrap().map(|e| e.unwrap().path()).collect();
    entries.sort();
    assert!(!entries.is_empty(), "empty corpus at {}", dir.display());
    entries.iter().map(|p| fs::read(p).unwrap()).collect()
}

#[test]
fn json_seeds() {
    let mut parsed = 0;
    for seed in corpus("deserialize_json") {
        if let Ok(g) = KOutDigraph::from_json(std::str::from_utf8(&seed).unwrap()) {
            assert_eq!(KOutDigraph::from_json(&g.to_json()).unwrap(), g);
            parsed += 1;
        }
    }
    assert!(parsed >= 4);
}

#[test]
fn binary_seeds() {
    let mut parsed = 0;
    for seed in corpus("deserialize_bin") {
        if let Ok(g) = KOutDigraph::from_bytes(&seed) {
            assert_eq!(g.to_bytes(), seed);
            parsed += 1;
        }
    }
    assert!(parsed >= 3);
}

#[test]
fn analysis_seeds() {
    for seed in corpus("deserialize_any") {
        let Ok(g) = KOutDigraph::deserialize(&seed) else { continue };
        let dec = Decomposition::new(&g);
        dec.check(&g).unwrap();
        let report = OutsideReport::new(&g, &dec, &OutsideConfig { cycle_cap: 256, scc_cap: 10 }).unwrap();
        report.check().unwrap();
        assert_eq!(report.eye_violations, 0);
    }
}
