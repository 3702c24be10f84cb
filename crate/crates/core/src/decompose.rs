//! Structural decomposition: strongly connected components, the condensation,
//! the giant (largest closed SCC) and the one-in-core.

use std::collections::VecDeque;

use serde::Serialize;

use crate::digraph::{Adjacency, KOutDigraph};
use crate::error::{Error, Result};

const UNSET: u32 = u32::MAX;

/// Strongly connected components. Ids are assigned in reverse topological
/// order of the condensation: every condensation arc goes from a larger id to
/// a smaller one, so sinks come first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scc {
    pub ids: Vec<u32>,
    /// Members of each component, ascending.
    pub members: Vec<Vec<u32>>,
}

impl Scc {
    pub fn count(&self) -> usize {
        self.members.len()
    }

    /// A component carries a cycle when it has two or more vertices or a self-loop.
    pub fn is_nontrivial<A: Adjacency + ?Sized>(&self, g: &A, c: usize) -> bool {
        let m = &self.members[c];
        m.len() > 1 || g.successors(m[0] as usize).contains(&m[0])
    }
}

/// Tarjan's algorithm with an explicit call stack.
pub fn strongly_connected<A: Adjacency + ?Sized>(g: &A) -> Scc {
    let n = g.vertex_count();
    let mut index = vec![UNSET; n];
    let mut low = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<u32> = Vec::new();
    let mut call: Vec<(u32, usize)> = Vec::new();
    let mut ids = vec![UNSET; n];
    let mut members: Vec<Vec<u32>> = Vec::new();
    let mut counter = 0u32;

    for root in 0..n {
        if index[root] != UNSET {
            continue;
        }
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root as u32);
        on_stack[root] = true;
        call.push((root as u32, 0));

        while let Some(frame) = call.last_mut() {
            let v = frame.0 as usize;
            let succ = g.successors(v);
            if frame.1 < succ.len() {
                let w = succ[frame.1] as usize;
                frame.1 += 1;
                if index[w] == UNSET {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w as u32);
                    on_stack[w] = true;
                    call.push((w as u32, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                let p = parent as usize;
                low[p] = low[p].min(low[v]);
            }
            if low[v] == index[v] {
                let id = members.len() as u32;
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w as usize] = false;
                    ids[w as usize] = id;
                    comp.push(w);
                    if w as usize == v {
                        break;
                    }
                }
                comp.sort_unstable();
                members.push(comp);
            }
        }
    }
    Scc { ids, members }
}

pub fn scc(g: &KOutDigraph) -> Scc {
    strongly_connected(g)
}

/// Condensation DAG with per-component closed flags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Condensation {
    /// Deduplicated successor components, ascending, without self-arcs.
    pub successors: Vec<Vec<u32>>,
    /// `closed[c]` iff no arc leaves component `c`.
    pub closed: Vec<bool>,
}

pub fn condense<A: Adjacency + ?Sized>(g: &A, sccs: &Scc) -> Condensation {
    let successors: Vec<Vec<u32>> = sccs
        .members
        .iter()
        .enumerate()
        .map(|(c, members)| {
            let mut out: Vec<u32> = members
                .iter()
                .flat_map(|&v| g.successors(v as usize).iter().map(|&w| sccs.ids[w as usize]))
                .filter(|&d| d as usize != c)
                .collect();
            out.sort_unstable();
            out.dedup();
            out
        })
        .collect();
    let closed = successors.iter().map(Vec::is_empty).collect();
    Condensation { successors, closed }
}

/// Index of the largest closed component, ties going to the one holding the
/// smallest vertex label.
fn giant_component(sccs: &Scc, cond: &Condensation) -> usize {
    (0..sccs.count())
        .filter(|&c| cond.closed[c])
        .min_by_key(|&c| (std::cmp::Reverse(sccs.members[c].len()), sccs.members[c][0]))
        .expect("a finite digraph has a closed component")
}

/// Vertices of the giant, ascending.
pub fn giant(g: &KOutDigraph) -> Vec<u32> {
    let sccs = scc(g);
    let cond = condense(g, &sccs);
    sccs.members[giant_component(&sccs, &cond)].clone()
}

/// Peels vertices of in-degree zero until none remain, seeding the work
/// queue in the order given by `order` (which must be a permutation of
/// `0..n`). Returns the membership mask of the survivors.
pub fn peel_one_in_core(g: &KOutDigraph, order: impl IntoIterator<Item = u32>) -> Vec<bool> {
    let mut indeg = g.in_degrees();
    let mut alive = vec![true; g.n()];
    let mut queue: VecDeque<u32> = order.into_iter().filter(|&v| indeg[v as usize] == 0).collect();
    while let Some(v) = queue.pop_front() {
        let v = v as usize;
        if !alive[v] {
            continue;
        }
        alive[v] = false;
        for &w in g.row(v) {
            let w = w as usize;
            indeg[w] -= 1;
            if indeg[w] == 0 && alive[w] {
                queue.push_back(w as u32);
            }
        }
    }
    alive
}

/// Vertices of the one-in-core, ascending.
pub fn one_in_core(g: &KOutDigraph) -> Vec<u32> {
    mask_to_list(&peel_one_in_core(g, 0..g.n() as u32))
}

pub(crate) fn mask_to_list(mask: &[bool]) -> Vec<u32> {
    mask.iter().enumerate().filter(|(_, &m)| m).map(|(v, _)| v as u32).collect()
}

/// Marks every vertex with a directed path into `targets`.
pub fn reaches_set(g: &KOutDigraph, targets: &[bool]) -> Vec<bool> {
    let (offsets, sources) = g.reverse_adjacency();
    let mut seen = targets.to_vec();
    let mut queue: VecDeque<usize> = (0..g.n()).filter(|&v| targets[v]).collect();
    while let Some(v) = queue.pop_front() {
        for &u in &sources[offsets[v]..offsets[v + 1]] {
            let u = u as usize;
            if !seen[u] {
                seen[u] = true;
                queue.push_back(u);
            }
        }
    }
    seen
}

/// Sizes of the three layers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Layers {
    pub giant: usize,
    pub one_in_core: usize,
    /// `|Q| - |G|`.
    pub middle: usize,
    /// `n - |Q|`.
    pub outer: usize,
    pub all_reach_giant: bool,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub scc: Scc,
    pub condensation: Condensation,
    pub giant_id: usize,
    pub giant: Vec<u32>,
    pub in_giant: Vec<bool>,
    pub one_in_core: Vec<u32>,
    pub in_core: Vec<bool>,
    /// `reaches_giant[v]` iff `v` has a path into the giant.
    pub reaches_giant: Vec<bool>,
    pub all_reach_giant: bool,
}

impl Decomposition {
    pub fn new(g: &KOutDigraph) -> Self {
        let sccs = scc(g);
        let condensation = condense(g, &sccs);
        let giant_id = giant_component(&sccs, &condensation);
        let giant = sccs.members[giant_id].clone();
        let mut in_giant = vec![false; g.n()];
        for &v in &giant {
            in_giant[v as usize] = true;
        }
        let in_core = peel_one_in_core(g, 0..g.n() as u32);
        let reaches_giant = reaches_set(g, &in_giant);
        let all_reach_giant = reaches_giant.iter().all(|&r| r);
        Decomposition {
            scc: sccs,
            condensation,
            giant_id,
            giant,
            in_giant,
            one_in_core: mask_to_list(&in_core),
            in_core,
            reaches_giant,
            all_reach_giant,
        }
    }

    pub fn layers(&self) -> Layers {
        let n = self.in_core.len();
        Layers {
            giant: self.giant.len(),
            one_in_core: self.one_in_core.len(),
            middle: self.one_in_core.len() - self.giant.len(),
            outer: n - self.one_in_core.len(),
            all_reach_giant: self.all_reach_giant,
        }
    }

    pub fn closed_count(&self) -> usize {
        self.condensation.closed.iter().filter(|&&c| c).count()
    }

    /// Verifies the structural invariants against `g`.
    pub fn check(&self, g: &KOutDigraph) -> Result<()> {
        let fail = |msg: String| Err(Error::Invariant(msg));
        let n = g.n();
        let covered: usize = self.scc.members.iter().map(Vec::len).sum();
        if covered != n || self.scc.ids.iter().any(|&c| c as usize >= self.scc.count()) {
            return fail("components do not partition the vertex set".into());
        }
        for (c, succ) in self.condensation.successors.iter().enumerate() {
            if succ.iter().any(|&d| d as usize >= c) {
                return fail(format!("condensation arc out of component {c} breaks reverse topological order"));
            }
        }
        if !self.condensation.closed[self.giant_id] {
            return fail("giant is not closed".into());
        }
        if self.giant.iter().any(|&v| !self.in_core[v as usize]) {
            return fail("giant is not contained in the one-in-core".into());
        }
        let mut indeg = vec![0u32; n];
        for v in (0..n).filter(|&v| self.in_core[v]) {
            for &w in g.row(v) {
                if !self.in_core[w as usize] {
                    return fail(format!("arc {v} -> {w} leaves the one-in-core"));
                }
                indeg[w as usize] += 1;
            }
        }
        if let Some(v) = (0..n).find(|&v| self.in_core[v] && indeg[v] == 0) {
            return fail(format!("vertex {v} has in-degree zero inside the one-in-core"));
        }
        if self.closed_count() == 1 && !self.all_reach_giant {
            return fail("single closed component but not every vertex reaches it".into());
        }
        Ok(())
    }
}

pub fn layers(g: &KOutDigraph) -> Layers {
    Decomposition::new(g).layers()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows<const K: usize>(r: &[[u32; K]]) -> KOutDigraph {
        KOutDigraph::from_rows(r).unwrap()
    }

    #[test]
    fn single_vertex() {
        let g = rows(&[[0, 0]]);
        let s = scc(&g);
        assert_eq!(s.members, vec![vec![0]]);
        assert_eq!(giant(&g), vec![0]);
        assert_eq!(one_in_core(&g), vec![0]);
    }

    #[test]
    fn three_cycle() {
        let g = rows(&[[1, 1], [2, 2], [0, 0]]);
        let s = scc(&g);
        assert_eq!(s.members, vec![vec![0, 1, 2]]);
        let c = condense(&g, &s);
        assert_eq!(c.closed, vec![true]);
        assert_eq!(giant(&g), vec![0, 1, 2]);
        let l = layers(&g);
        assert_eq!((l.giant, l.one_in_core, l.middle, l.outer, l.all_reach_giant), (3, 3, 0, 0, true));
    }

    #[test]
    fn chain_into_loop() {
        let g = rows(&[[1, 1], [2, 2], [2, 2]]);
        let s = scc(&g);
        assert_eq!(s.count(), 3);
        assert_eq!(s.members[s.ids[2] as usize], vec![2]);
        let c = condense(&g, &s);
        // chain 0 -> 1 -> 2 with only {2} closed
        assert_eq!(c.successors[s.ids[0] as usize], vec![s.ids[1]]);
        assert_eq!(c.successors[s.ids[1] as usize], vec![s.ids[2]]);
        let closed: Vec<usize> = (0..3).filter(|&c2| c.closed[c2]).collect();
        assert_eq!(closed, vec![s.ids[2] as usize]);
        assert_eq!(giant(&g), vec![2]);
        assert_eq!(one_in_core(&g), vec![2]);
        let l = layers(&g);
        assert_eq!((l.giant, l.one_in_core, l.middle, l.outer, l.all_reach_giant), (1, 1, 0, 2, true));
    }

    #[test]
    fn tie_break_prefers_smallest_label() {
        let g = rows(&[[0], [1]]);
        assert_eq!(giant(&g), vec![0]);
        let g = rows(&[[1], [0], [3], [2]]);
        assert_eq!(giant(&g), vec![0, 1]);
        let g = rows(&[[2], [1], [0]]);
        // closed components {0, 2} and {1}; the larger wins
        assert_eq!(giant(&g), vec![0, 2]);
    }

    #[test]
    fn all_self_loops_keep_everything() {
        let g = rows(&[[0, 0], [1, 1], [2, 2]]);
        assert_eq!(one_in_core(&g), vec![0, 1, 2]);
        let d = Decomposition::new(&g);
        assert!(!d.all_reach_giant);
        assert_eq!(d.closed_count(), 3);
        d.check(&g).unwrap();
    }

    #[test]
    fn deep_path_does_not_overflow() {
        let n = 1_000_000u32;
        let ends: Vec<u32> = (0..n).map(|v| (v + 1).min(n - 1)).collect();
        let g = KOutDigraph::from_endpoints(n as usize, 1, ends).unwrap();
        let d = Decomposition::new(&g);
        assert_eq!(d.giant, vec![n - 1]);
        assert_eq!(d.scc.count(), n as usize);
        assert!(d.all_reach_giant);
    }
}
