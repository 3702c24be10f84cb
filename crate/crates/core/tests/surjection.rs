use std::collections::BTreeMap;

use kout::digraph::RngSpec;
use kout::oracle::enumerate_all;
use kout::stats::{chi_square_critical, chi_square_uniform};
use kout::surjection::{host_size, is_surjective, relabeled_core, sample_surjection, DEFAULT_RETRY_CAP};
use kout::{Error, ModelConstants};

#[test]
fn host_sizes() {
    let c = ModelConstants::derive(2).unwrap();
    assert_eq!(host_size(2, &c), 3);
    assert_eq!(host_size(100, &c), 126);
}

#[test]
fn conditioned_core_is_exactly_uniform() {
    // hosts on 3 vertices whose one-in-core has 2 vertices
    let mut counts: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
    enumerate_all(3, 2, |g| {
        let core = relabeled_core(g);
        if core.len() == 4 {
            assert!(is_surjective(2, &core));
            *counts.entry(core).or_insert(0) += 1;
        }
    })
    .unwrap();
    assert_eq!(counts.len(), 14);
    let first = *counts.values().next().unwrap();
    assert!(counts.values().all(|&c| c == first));
}

#[test]
fn sampled_outcomes_pass_chi_square() {
    let mut counts: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
    for i in 0..7000 {
        let s = sample_surjection(2, 2, RngSpec::new(77, i), DEFAULT_RETRY_CAP).unwrap();
        *counts.entry(s.mapping).or_insert(0) += 1;
    }
    assert_eq!(counts.len(), 14);
    let cells: Vec<u64> = counts.values().copied().collect();
    assert!(chi_square_uniform(&cells) < chi_square_critical(13.0, 1e-3));
}

#[test]
fn retry_cap_is_reported() {
    // a single host digraph almost never has a one-in-core of exactly m
    match sample_surjection(500, 2, RngSpec::new(1, 0), 1) {
        Err(Error::AttemptCapExceeded { attempts: 1 }) | Ok(_) => {}
        other => panic!("unexpected {other:?}"),
    }
    assert!(sample_surjection(500, 2, RngSpec::new(1, 1), 0).is_err());
}

#[test]
fn larger_m_gives_valid_tables() {
    let s = sample_surjection(200, 3, RngSpec::new(2, 0), DEFAULT_RETRY_CAP).unwrap();
    assert_eq!(s.mapping.len(), 600);
    assert!(s.is_surjective());
    assert_eq!(s.row(0).len(), 3);
}
