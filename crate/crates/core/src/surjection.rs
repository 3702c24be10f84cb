//! Uniform random surjections `[k m] -> [m]` by rejection on the size of the
//! one-in-core of a k-out digraph on `ceil(m / nu_k)` vertices.
//!
//! Conditioned on `|Q| = m`, the arcs inside the one-in-core form a uniform
//! k-out arc table on `m` vertices in which every vertex is hit at least
//! once. Relabeling the core's vertices in increasing order keeps that
//! uniformity by label symmetry.

use rand::Rng;
use serde::Serialize;

use crate::constants::ModelConstants;
use crate::decompose::{mask_to_list, peel_one_in_core};
use crate::digraph::{KOutDigraph, RngSpec};
use crate::error::{Error, Result};

pub const DEFAULT_RETRY_CAP: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurjectionSample {
    pub m: usize,
    pub k: usize,
    /// Row-major `m x k` table; entry `(v, i)` is the image of arc `i` of `v`.
    pub mapping: Vec<u32>,
    /// Digraphs generated, including the accepted one.
    pub retries: u64,
}

impl SurjectionSample {
    pub fn row(&self, v: usize) -> &[u32] {
        &self.mapping[v * self.k..(v + 1) * self.k]
    }

    pub fn is_surjective(&self) -> bool {
        is_surjective(self.m, &self.mapping)
    }
}

pub fn is_surjective(m: usize, mapping: &[u32]) -> bool {
    let mut hit = vec![false; m];
    for &x in mapping {
        match hit.get_mut(x as usize) {
            Some(h) => *h = true,
            None => return false,
        }
    }
    hit.into_iter().all(|h| h)
}

/// Number of vertices of the host digraph, `ceil(m / nu_k)`.
pub fn host_size(m: usize, constants: &ModelConstants) -> usize {
    (m as f64 / constants.nu).ceil() as usize
}

/// The arc table induced on the one-in-core, relabeled to `0..|Q|` in
/// increasing order of the original labels.
pub fn relabeled_core(g: &KOutDigraph) -> Vec<u32> {
    let core = mask_to_list(&peel_one_in_core(g, 0..g.n() as u32));
    relabel(g, &core)
}

fn relabel(g: &KOutDigraph, core: &[u32]) -> Vec<u32> {
    let mut new_id = vec![u32::MAX; g.n()];
    for (i, &v) in core.iter().enumerate() {
        new_id[v as usize] = i as u32;
    }
    core.iter().flat_map(|&v| g.row(v as usize).iter().map(|&w| new_id[w as usize])).collect()
}

pub fn sample_surjection(m: usize, k: usize, spec: RngSpec, retry_cap: u64) -> Result<SurjectionSample> {
    sample_surjection_with(m, k, &mut spec.rng(), retry_cap)
}

pub fn sample_surjection_with<R: Rng + ?Sized>(
    m: usize,
    k: usize,
    rng: &mut R,
    retry_cap: u64,
) -> Result<SurjectionSample> {
    if m == 0 {
        return Err(Error::invalid("m must be at least 1"));
    }
    if k < 2 {
        return Err(Error::invalid(format!("k must be at least 2, got {k}")));
    }
    let constants = ModelConstants::derive(k as u32)?;
    let n = host_size(m, &constants);
    for retries in 1..=retry_cap {
        let g = KOutDigraph::generate_with(n, k, rng)?;
        let core = mask_to_list(&peel_one_in_core(&g, 0..n as u32));
        if core.len() == m {
            let mapping = relabel(&g, &core);
            debug_assert!(is_surjective(m, &mapping));
            return Ok(SurjectionSample { m, k, mapping, retries });
        }
    }
    Err(Error::AttemptCapExceeded { attempts: retry_cap })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_point_mapping() {
        let s = sample_surjection(1, 2, RngSpec::new(5, 0), DEFAULT_RETRY_CAP).unwrap();
        assert_eq!(s.mapping, vec![0, 0]);
        assert!(s.is_surjective());
        assert!(s.retries >= 1);
    }

    #[test]
    fn outputs_are_surjective() {
        for stream in 0..20 {
            let s = sample_surjection(30, 3, RngSpec::new(1, stream), DEFAULT_RETRY_CAP).unwrap();
            assert_eq!(s.mapping.len(), 90);
            assert!(s.is_surjective());
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(sample_surjection(0, 2, RngSpec::default(), 10).is_err());
        assert!(sample_surjection(3, 1, RngSpec::default(), 10).is_err());
    }

    #[test]
    fn surjectivity_check() {
        assert!(is_surjective(2, &[0, 1, 1, 1]));
        assert!(!is_surjective(2, &[1, 1, 1, 1]));
        assert!(!is_surjective(2, &[0, 2]));
    }

    #[test]
    fn relabeling_keeps_core_order() {
        // core {1, 2} with 1 <-> 2; vertex 0 peels off
        let g = KOutDigraph::from_rows(&[[1, 2], [2, 2], [1, 1]]).unwrap();
        assert_eq!(relabeled_core(&g), vec![1, 1, 0, 0]);
    }
}
