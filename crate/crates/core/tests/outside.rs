use kout::decompose::Decomposition;
use kout::digraph::{KOutDigraph, RngSpec};
use kout::oracle::BruteForce;
use kout::outside::{
    distance_to_giant, eccentricity_max, enumerate_cycles, exact_spectrum_sizes, full_spectrum_sizes, longest_path,
    spectra, InducedSubgraph, OutsideConfig, OutsideReport, SpectrumScan, EXACT_SPECTRUM_LIMIT,
};
use kout::Error;
use proptest::prelude::*;

fn report(rows: &[Vec<u32>]) -> OutsideReport {
    let g = KOutDigraph::from_rows(rows).unwrap();
    let dec = Decomposition::new(&g);
    let r = OutsideReport::new(&g, &dec, &OutsideConfig::default()).unwrap();
    r.check().unwrap();
    r
}

fn whole(g: &KOutDigraph) -> InducedSubgraph {
    InducedSubgraph::new(g, &vec![true; g.n()])
}

// Vertices 0..3 form the giant (a 3-cycle on both labels).
fn giant_rows() -> Vec<Vec<u32>> {
    vec![vec![1, 1], vec![2, 2], vec![0, 0]]
}

#[test]
fn acyclic_outside_has_no_cycles() {
    let mut rows = giant_rows();
    rows.push(vec![0, 1]);
    rows.push(vec![3, 2]);
    let r = report(&rows);
    assert!(r.cycles.is_empty());
    assert!(r.vertex_disjoint);
}

#[test]
fn two_cycle_and_disjoint_loop() {
    let mut rows = giant_rows();
    rows.push(vec![4, 0]); // 3 <-> 4
    rows.push(vec![3, 1]);
    rows.push(vec![5, 2]); // self-loop at 5
    let r = report(&rows);
    assert_eq!(r.total_cycles, 2);
    assert_eq!(r.cycles_by_length.keys().copied().collect::<Vec<_>>(), vec![1, 2]);
    assert!(r.vertex_disjoint);
}

#[test]
fn parallel_self_loops_count_twice() {
    let mut rows = giant_rows();
    rows.push(vec![3, 3]);
    let r = report(&rows);
    // {3} is closed too but smaller than the giant
    assert_eq!(r.total_cycles, 2);
    assert!(!r.vertex_disjoint);
}

#[test]
fn isolated_vertex_into_giant() {
    let mut rows = giant_rows();
    rows.push(vec![0, 1]);
    let r = report(&rows);
    assert_eq!(r.spectra_sizes, vec![1]);
    assert_eq!(r.arc_excess_violations, 0);
    let g = KOutDigraph::from_rows(&rows).unwrap();
    let dec = Decomposition::new(&g);
    let scan = SpectrumScan::new(&InducedSubgraph::outside_giant(&g, &dec));
    assert_eq!((scan.sizes[0], scan.arcs[0], scan.excess(0)), (1, 0, -1));
}

#[test]
fn self_loop_plus_exit_is_a_tree_plus_one_arc() {
    let mut rows = giant_rows();
    rows.push(vec![3, 0]);
    let g = KOutDigraph::from_rows(&rows).unwrap();
    let dec = Decomposition::new(&g);
    let scan = SpectrumScan::new(&InducedSubgraph::outside_giant(&g, &dec));
    assert_eq!((scan.sizes[0], scan.arcs[0], scan.excess(0)), (1, 1, 0));
    assert_eq!(scan.excess_violations(), 0);
}

#[test]
fn distance_to_giant_examples() {
    let mut rows = giant_rows();
    rows.push(vec![0, 3]);
    rows.push(vec![1, 4]);
    assert_eq!(report(&rows).w, 1);
    let mut rows = giant_rows();
    rows.push(vec![0, 0]);
    rows.push(vec![3, 3]);
    let r = report(&rows);
    assert_eq!(r.w, 2);
    assert_eq!(r.unreachable_from_giant, 0);
}

#[test]
fn eccentricity_examples() {
    let mut rows = giant_rows();
    rows.push(vec![0, 0]);
    rows.push(vec![1, 2]);
    assert_eq!(report(&rows).d, 0);
    // path 3 -> 4 -> 5 -> 6 inside the outside part
    let mut rows = giant_rows();
    rows.push(vec![4, 0]);
    rows.push(vec![5, 0]);
    rows.push(vec![6, 0]);
    rows.push(vec![0, 0]);
    let r = report(&rows);
    assert!(r.d >= 3);
    assert_eq!(r.m, 3);
}

#[test]
fn path_of_five_arcs() {
    let g = KOutDigraph::from_rows(&[[1], [2], [3], [4], [5], [5]]).unwrap();
    let view = InducedSubgraph::new(&g, &[true, true, true, true, true, true]);
    assert_eq!(longest_path(&view, 64).unwrap(), 5);
    let view = InducedSubgraph::new(&g, &[true, true, true, true, true, false]);
    assert_eq!(longest_path(&view, 64).unwrap(), 4);
}

#[test]
fn cycle_with_exit() {
    // 0 -> 1 -> 2 -> 0 with an extra arc 2 -> 3 into a sink
    let g = KOutDigraph::from_rows(&[[1, 1], [2, 2], [0, 3], [3, 3]]).unwrap();
    let view = InducedSubgraph::new(&g, &[true, true, true, true]);
    assert_eq!(longest_path(&view, 64).unwrap(), 3);
    let view = InducedSubgraph::new(&g, &[true, true, true, false]);
    assert_eq!(longest_path(&view, 64).unwrap(), 2);
}

#[test]
fn scc_cap_is_enforced() {
    let g = KOutDigraph::from_rows(&[[1], [2], [3], [0]]).unwrap();
    assert!(matches!(longest_path(&whole(&g), 3), Err(Error::SccCapExceeded { .. })));
    assert_eq!(longest_path(&whole(&g), 4).unwrap(), 3);
}

#[test]
fn cycle_cap_is_enforced() {
    let g = KOutDigraph::from_rows(&[[0, 1, 2, 3], [0, 1, 2, 3], [0, 1, 2, 3], [0, 1, 2, 3]]).unwrap();
    assert!(matches!(enumerate_cycles(&whole(&g), 10), Err(Error::CycleCapExceeded { cap: 10 })));
}

#[test]
fn full_spectrum_examples() {
    let g = KOutDigraph::from_rows(&[[1, 1], [2, 2], [0, 0]]).unwrap();
    assert_eq!(exact_spectrum_sizes(&g, EXACT_SPECTRUM_LIMIT).unwrap(), vec![3, 3, 3]);
    assert_eq!(report(&[vec![1, 1], vec![2, 2], vec![0, 0]]).max_full_spectrum, 3);
    // chain 4 -> 3 -> 0 into the 3-cycle
    let rows = vec![vec![1, 1], vec![2, 2], vec![0, 0], vec![0, 0], vec![3, 3]];
    let g = KOutDigraph::from_rows(&rows).unwrap();
    assert_eq!(exact_spectrum_sizes(&g, EXACT_SPECTRUM_LIMIT).unwrap()[4], 5);
    assert_eq!(report(&rows).max_full_spectrum, 5);
}

#[test]
fn exact_spectra_respect_the_size_limit() {
    let g = KOutDigraph::generate(EXACT_SPECTRUM_LIMIT + 1, 2, RngSpec::new(1, 0)).unwrap();
    assert!(matches!(exact_spectrum_sizes(&g, EXACT_SPECTRUM_LIMIT), Err(Error::SizeLimitExceeded { .. })));
}

#[test]
fn helpers_agree_with_scan() {
    let g = KOutDigraph::generate(3000, 2, RngSpec::new(2, 2)).unwrap();
    let dec = Decomposition::new(&g);
    let view = InducedSubgraph::outside_giant(&g, &dec);
    let scan = SpectrumScan::new(&view);
    let s = spectra(&view);
    assert_eq!(s.sizes, scan.sizes);
    assert_eq!(eccentricity_max(&view), scan.max_eccentricity());
    assert_eq!(distance_to_giant(&g, &dec.in_giant).unreachable, dec.reaches_giant.iter().filter(|r| !**r).count());
}

fn arb_digraph(max_n: usize) -> impl Strategy<Value = KOutDigraph> {
    (1..=max_n, 1usize..=3).prop_flat_map(|(n, k)| {
        proptest::collection::vec(0..n as u32, n * k).prop_map(move |e| KOutDigraph::from_endpoints(n, k, e).unwrap())
    })
}

/// Digraphs whose random part is mostly outside the giant: a fixed giant on
/// vertex 0 (all self-loops) plus sparse random arcs among the rest.
fn arb_sparse(max_n: usize) -> impl Strategy<Value = KOutDigraph> {
    (2..=max_n).prop_flat_map(|n| {
        proptest::collection::vec((0..n as u32, 0..n as u32, any::<bool>()), n - 1).prop_map(move |arcs| {
            let mut rows = vec![vec![0u32, 0]];
            for (a, b, to_giant) in arcs {
                rows.push(vec![a, if to_giant { 0 } else { b }]);
            }
            KOutDigraph::from_rows(&rows).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn pipeline_matches_brute_force(g in arb_digraph(7)) {
        let result = BruteForce::new(&g).compare_with_pipeline(&g);
        prop_assert!(result.is_ok(), "{:?}", result);
    }

    #[test]
    fn sparse_pipeline_matches_brute_force(g in arb_sparse(10)) {
        let result = BruteForce::new(&g).compare_with_pipeline(&g);
        prop_assert!(result.is_ok(), "{:?}", result);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn identity_spectra_match_bitsets(n in 1usize..400, k in 1usize..4, seed in any::<u64>()) {
        let g = KOutDigraph::generate(n, k, RngSpec::new(seed, 0)).unwrap();
        let dec = Decomposition::new(&g);
        let view = InducedSubgraph::outside_giant(&g, &dec);
        let scan = SpectrumScan::new(&view);
        prop_assert_eq!(full_spectrum_sizes(&view, &scan.sizes, &dec), exact_spectrum_sizes(&g, EXACT_SPECTRUM_LIMIT).unwrap());
    }

    #[test]
    fn report_invariants(n in 1usize..2000, seed in any::<u64>()) {
        let g = KOutDigraph::generate(n, 2, RngSpec::new(seed, 0)).unwrap();
        let dec = Decomposition::new(&g);
        let r = OutsideReport::new(&g, &dec, &OutsideConfig::default()).unwrap();
        prop_assert!(r.check().is_ok());
        prop_assert!(r.d <= r.m);
        prop_assert_eq!(r.eye_violations, 0);
        prop_assert!(r.cycles.iter().flat_map(|c| &c.vertices).all(|&v| dec.in_core[v as usize] && !dec.in_giant[v as usize]));
    }
}
