use kout::decompose::{condense, giant, layers, one_in_core, peel_one_in_core, scc, Decomposition};
use kout::digraph::{KOutDigraph, RngSpec};
use kout::outside::{enumerate_cycles, InducedSubgraph};
use proptest::prelude::*;
use rand::seq::SliceRandom;

fn three_cycle() -> KOutDigraph {
    KOutDigraph::from_rows(&[[1, 1], [2, 2], [0, 0]]).unwrap()
}

fn chain() -> KOutDigraph {
    KOutDigraph::from_rows(&[[1, 1], [2, 2], [2, 2]]).unwrap()
}

#[test]
fn scc_examples() {
    let s = scc(&KOutDigraph::from_rows(&[[0, 0]]).unwrap());
    assert_eq!(s.members, vec![vec![0]]);
    let s = scc(&three_cycle());
    assert_eq!(s.count(), 1);
    assert_eq!(s.members[0].len(), 3);
}

#[test]
fn condensation_examples() {
    let g = three_cycle();
    let s = scc(&g);
    let c = condense(&g, &s);
    assert_eq!(c.closed, vec![true]);

    let g = chain();
    let s = scc(&g);
    let c = condense(&g, &s);
    assert_eq!(s.count(), 3);
    let closed: Vec<Vec<u32>> = (0..s.count()).filter(|&i| c.closed[i]).map(|i| s.members[i].clone()).collect();
    assert_eq!(closed, vec![vec![2]]);
    let id = |v: usize| s.ids[v] as usize;
    assert_eq!(c.successors[id(0)], vec![id(1) as u32]);
    assert_eq!(c.successors[id(1)], vec![id(2) as u32]);
}

#[test]
fn giant_examples() {
    assert_eq!(giant(&three_cycle()), vec![0, 1, 2]);
    assert_eq!(giant(&KOutDigraph::from_rows(&[[0], [1]]).unwrap()), vec![0]);
    assert_eq!(giant(&KOutDigraph::from_rows(&[[1], [1], [0]]).unwrap()), vec![1]);
}

#[test]
fn one_in_core_examples() {
    let loops = KOutDigraph::from_rows(&[[0, 0], [1, 1], [2, 2]]).unwrap();
    assert_eq!(one_in_core(&loops), vec![0, 1, 2]);
    assert_eq!(one_in_core(&chain()), vec![2]);
}

#[test]
fn layer_examples() {
    let l = layers(&three_cycle());
    assert_eq!((l.giant, l.one_in_core, l.middle, l.outer, l.all_reach_giant), (3, 3, 0, 0, true));
    let l = layers(&chain());
    assert_eq!((l.giant, l.one_in_core, l.middle, l.outer, l.all_reach_giant), (1, 1, 0, 2, true));
    let l = layers(&KOutDigraph::from_rows(&[[0], [1]]).unwrap());
    assert!(!l.all_reach_giant);
}

#[test]
fn giant_fraction_near_nu() {
    let nu = kout::ModelConstants::derive(2).unwrap().nu;
    let n = 20_000;
    let reps = 20;
    let mean: f64 = (0..reps)
        .map(|s| giant(&KOutDigraph::generate(n, 2, RngSpec::new(12, s)).unwrap()).len() as f64 / n as f64)
        .sum::<f64>()
        / reps as f64;
    assert!((mean - nu).abs() < 0.01, "{mean}");
}

fn arb_digraph(max_n: usize) -> impl Strategy<Value = KOutDigraph> {
    (1..=max_n, 1usize..=3).prop_flat_map(|(n, k)| {
        proptest::collection::vec(0..n as u32, n * k).prop_map(move |e| KOutDigraph::from_endpoints(n, k, e).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn peeling_order_does_not_matter(g in arb_digraph(60), shuffle_seed in any::<u64>()) {
        let mut order: Vec<u32> = (0..g.n() as u32).collect();
        let forward = peel_one_in_core(&g, order.iter().copied());
        order.reverse();
        prop_assert_eq!(&peel_one_in_core(&g, order.iter().copied()), &forward);
        order.shuffle(&mut RngSpec::new(shuffle_seed, 0).rng());
        prop_assert_eq!(&peel_one_in_core(&g, order.iter().copied()), &forward);
    }

    #[test]
    fn giant_inside_closed_core(g in arb_digraph(60)) {
        let dec = Decomposition::new(&g);
        prop_assert!(dec.check(&g).is_ok());
        prop_assert!(dec.giant.iter().all(|&v| dec.in_core[v as usize]));
        // the one-in-core is closed and every vertex in it has an in-arc from it
        let mut hit = vec![false; g.n()];
        for &v in &dec.one_in_core {
            for &w in g.row(v as usize) {
                prop_assert!(dec.in_core[w as usize]);
                hit[w as usize] = true;
            }
        }
        prop_assert!(dec.one_in_core.iter().all(|&v| hit[v as usize]));
    }

    #[test]
    fn every_cycle_lies_in_core(g in arb_digraph(30)) {
        let dec = Decomposition::new(&g);
        let view = InducedSubgraph::new(&g, &vec![true; g.n()]);
        if let Ok(cycles) = enumerate_cycles(&view, 5000) {
            for c in &cycles.cycles {
                prop_assert!(c.vertices.iter().all(|&v| dec.in_core[v as usize]));
            }
        }
    }

    #[test]
    fn giant_is_largest_closed_scc(g in arb_digraph(60)) {
        let dec = Decomposition::new(&g);
        let best = (0..dec.scc.count())
            .filter(|&c| dec.condensation.closed[c])
            .map(|c| dec.scc.members[c].len())
            .max()
            .unwrap();
        prop_assert_eq!(dec.giant.len(), best);
        for c in 0..dec.scc.count() {
            if dec.condensation.closed[c] && dec.scc.members[c].len() == best {
                prop_assert!(dec.giant[0] <= dec.scc.members[c][0]);
            }
        }
    }
}
