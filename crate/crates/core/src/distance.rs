//! Typical distances and the strong-connectivity phase transition.

use std::collections::VecDeque;

use rand::Rng;
use serde::Serialize;

use crate::decompose::strongly_connected;
use crate::digraph::{KOutDigraph, RngSpec};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DistanceSample {
    pub pairs_drawn: usize,
    pub finite_count: usize,
    /// Finite distances in draw order.
    pub distances: Vec<u32>,
}

impl DistanceSample {
    pub fn finite_fraction(&self) -> f64 {
        self.finite_count as f64 / self.pairs_drawn as f64
    }

    pub fn mean_finite(&self) -> Option<f64> {
        if self.distances.is_empty() {
            return None;
        }
        Some(self.distances.iter().map(|&d| f64::from(d)).sum::<f64>() / self.distances.len() as f64)
    }
}

/// Reusable BFS scratch space.
struct Bfs {
    stamp: Vec<u32>,
    dist: Vec<u32>,
    round: u32,
    queue: VecDeque<usize>,
}

impl Bfs {
    fn new(n: usize) -> Self {
        Bfs { stamp: vec![0; n], dist: vec![0; n], round: 0, queue: VecDeque::new() }
    }

    /// Distance from `from` to `to`, stopping as soon as `to` is reached.
    fn distance(&mut self, g: &KOutDigraph, from: usize, to: usize) -> Option<u32> {
        if from == to {
            return Some(0);
        }
        self.round += 1;
        self.queue.clear();
        self.stamp[from] = self.round;
        self.dist[from] = 0;
        self.queue.push_back(from);
        while let Some(u) = self.queue.pop_front() {
            for &w in g.row(u) {
                let w = w as usize;
                if self.stamp[w] == self.round {
                    continue;
                }
                self.stamp[w] = self.round;
                self.dist[w] = self.dist[u] + 1;
                if w == to {
                    return Some(self.dist[w]);
                }
                self.queue.push_back(w);
            }
        }
        None
    }
}

/// Distances between `pairs` ordered pairs drawn uniformly with replacement.
pub fn typical_distance(g: &KOutDigraph, pairs: usize, spec: RngSpec) -> Result<DistanceSample> {
    typical_distance_with(g, pairs, &mut spec.rng())
}

pub fn typical_distance_with<R: Rng + ?Sized>(g: &KOutDigraph, pairs: usize, rng: &mut R) -> Result<DistanceSample> {
    if pairs == 0 {
        return Err(Error::invalid("at least one pair is required"));
    }
    let n = g.n();
    let mut bfs = Bfs::new(n);
    let mut distances = Vec::new();
    for _ in 0..pairs {
        let from = rng.random_range(0..n);
        let to = rng.random_range(0..n);
        if let Some(d) = bfs.distance(g, from, to) {
            distances.push(d);
        }
    }
    Ok(DistanceSample { pairs_drawn: pairs, finite_count: distances.len(), distances })
}

pub fn is_strongly_connected(g: &KOutDigraph) -> bool {
    strongly_connected(g).count() == 1
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhasePoint {
    pub n: usize,
    pub k: usize,
    pub reps: usize,
    pub fraction_strongly_connected: f64,
    pub fraction_with_indeg_zero_vertex: f64,
}

/// For each `k` in `k_min..=k_max`, generates `reps` digraphs and records how
/// many are strongly connected and how many have a vertex of in-degree zero.
///
/// Replicate `r` at out-degree `k` uses stream `(k << 32) | r` under `seed`.
pub fn phase_sweep(n: usize, k_min: usize, k_max: usize, reps: usize, seed: u64) -> Result<Vec<PhasePoint>> {
    if k_min == 0 || k_min > k_max {
        return Err(Error::invalid(format!("need 1 <= k_min <= k_max, got {k_min}..={k_max}")));
    }
    if reps == 0 {
        return Err(Error::invalid("reps must be positive"));
    }
    use rayon::prelude::*;
    (k_min..=k_max)
        .map(|k| {
            let outcomes = (0..reps)
                .into_par_iter()
                .map(|r| {
                    let spec = RngSpec::new(seed, ((k as u64) << 32) | r as u64);
                    let g = KOutDigraph::generate(n, k, spec)?;
                    let indeg_zero = g.in_degrees().contains(&0);
                    Ok((is_strongly_connected(&g), indeg_zero))
                })
                .collect::<Result<Vec<_>>>()?;
            let sc = outcomes.iter().filter(|o| o.0).count();
            let zero = outcomes.iter().filter(|o| o.1).count();
            Ok(PhasePoint {
                n,
                k,
                reps,
                fraction_strongly_connected: sc as f64 / reps as f64,
                fraction_with_indeg_zero_vertex: zero as f64 / reps as f64,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_cycle_distances() {
        let g = KOutDigraph::from_rows(&[[1, 1], [2, 2], [0, 0]]).unwrap();
        let mut bfs = Bfs::new(3);
        assert_eq!(bfs.distance(&g, 0, 1), Some(1));
        assert_eq!(bfs.distance(&g, 0, 2), Some(2));
        assert_eq!(bfs.distance(&g, 1, 1), Some(0));
        assert!(is_strongly_connected(&g));
    }

    #[test]
    fn unreachable_pairs_are_excluded() {
        let g = KOutDigraph::from_rows(&[[0, 0], [0, 0]]).unwrap();
        let mut bfs = Bfs::new(2);
        assert_eq!(bfs.distance(&g, 0, 1), None);
        let s = typical_distance(&g, 500, RngSpec::new(9, 0)).unwrap();
        assert_eq!(s.pairs_drawn, 500);
        assert_eq!(s.finite_count, s.distances.len());
        assert!(s.finite_count < 500);
        assert!(typical_distance(&g, 0, RngSpec::default()).is_err());
    }

    #[test]
    fn connectivity_edge_cases() {
        assert!(is_strongly_connected(&KOutDigraph::from_rows(&[[0, 0]]).unwrap()));
        // vertex 0 has in-degree zero
        let g = KOutDigraph::from_rows(&[[1, 2], [2, 1], [1, 2]]).unwrap();
        assert!(!is_strongly_connected(&g));
    }

    #[test]
    fn sweep_rejects_bad_ranges() {
        assert!(phase_sweep(10, 0, 2, 5, 0).is_err());
        assert!(phase_sweep(10, 3, 2, 5, 0).is_err());
        let pts = phase_sweep(10, 1, 3, 20, 0).unwrap();
        assert_eq!(pts.len(), 3);
        for p in pts {
            // a vertex of in-degree zero rules out strong connectivity
            assert!(p.fraction_strongly_connected <= 1.0 - p.fraction_with_indeg_zero_vertex);
        }
    }
}
