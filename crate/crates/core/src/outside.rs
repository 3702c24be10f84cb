//! Statistics of the sub-digraph induced on the vertices outside the giant:
//! labeled cycles, forward spectra, distances to the giant, eccentricities and
//! the longest simple path.
//!
//! Lengths and distances count arcs. A cycle is a closed walk through
//! distinct vertices together with the label of every arc it uses, so two
//! self-loops at one vertex are two cycles of length 1.

use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;

use crate::decompose::{condense, strongly_connected, Decomposition};
use crate::digraph::{Adjacency, KOutDigraph};
use crate::error::{Error, Result};

pub const DEFAULT_CYCLE_CAP: usize = 10_000;
pub const DEFAULT_SCC_CAP: usize = 64;
/// Largest `n` accepted by [`exact_spectrum_sizes`].
pub const EXACT_SPECTRUM_LIMIT: usize = 5000;

const NONE: u32 = u32::MAX;

/// Sub-digraph induced on a vertex subset, renumbered to `0..len` in
/// increasing order of the original labels. Parallel arcs are kept, each with
/// its original label.
#[derive(Clone, Debug)]
pub struct InducedSubgraph {
    global: Vec<u32>,
    local: Vec<u32>,
    offsets: Vec<usize>,
    targets: Vec<u32>,
    labels: Vec<u32>,
}

impl InducedSubgraph {
    pub fn new(g: &KOutDigraph, keep: &[bool]) -> Self {
        assert_eq!(keep.len(), g.n(), "mask length must equal n");
        let global: Vec<u32> = (0..g.n() as u32).filter(|&v| keep[v as usize]).collect();
        let mut local = vec![NONE; g.n()];
        for (i, &v) in global.iter().enumerate() {
            local[v as usize] = i as u32;
        }
        let mut offsets = Vec::with_capacity(global.len() + 1);
        let mut targets = Vec::new();
        let mut labels = Vec::new();
        offsets.push(0);
        for &v in &global {
            for (label, &w) in g.row(v as usize).iter().enumerate() {
                if keep[w as usize] {
                    targets.push(local[w as usize]);
                    labels.push(label as u32);
                }
            }
            offsets.push(targets.len());
        }
        InducedSubgraph { global, local, offsets, targets, labels }
    }

    /// The sub-digraph on `[n] \ giant`.
    pub fn outside_giant(g: &KOutDigraph, dec: &Decomposition) -> Self {
        let keep: Vec<bool> = dec.in_giant.iter().map(|&b| !b).collect();
        Self::new(g, &keep)
    }

    pub fn len(&self) -> usize {
        self.global.len()
    }

    pub fn is_empty(&self) -> bool {
        self.global.is_empty()
    }

    pub fn global_id(&self, local: usize) -> u32 {
        self.global[local]
    }

    pub fn global_ids(&self) -> &[u32] {
        &self.global
    }

    /// Local id of an original vertex, if it belongs to the subgraph.
    pub fn local_id(&self, global: usize) -> Option<usize> {
        match self.local.get(global) {
            Some(&l) if l != NONE => Some(l as usize),
            _ => None,
        }
    }

    pub fn labels(&self, v: usize) -> &[u32] {
        &self.labels[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn arc_count(&self) -> usize {
        self.targets.len()
    }
}

impl Adjacency for InducedSubgraph {
    fn vertex_count(&self) -> usize {
        self.global.len()
    }

    fn successors(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }
}

/// One labeled cycle in original vertex ids; arc `i` runs from
/// `vertices[i]` to `vertices[(i + 1) % len]` with label `labels[i]`.
/// The smallest vertex comes first.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Cycle {
    pub vertices: Vec<u32>,
    pub labels: Vec<u32>,
}

impl Cycle {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleEnumeration {
    pub cycles: Vec<Cycle>,
    /// No vertex lies on two cycles.
    pub vertex_disjoint: bool,
}

/// Compact simple digraph (no self-loops) on the vertices that can lie on a
/// cycle, each arc carrying every label that realizes it.
struct CycleCandidates {
    global: Vec<u32>,
    adj: Vec<Vec<(u32, Vec<u32>)>>,
}

impl CycleCandidates {
    fn restricted(&self, from: usize) -> RestrictedView {
        let n = self.adj.len();
        let mut offsets = vec![0usize; n + 1];
        let mut targets = Vec::new();
        for v in 0..n {
            if v >= from {
                targets.extend(self.adj[v].iter().map(|(w, _)| *w).filter(|&w| w as usize >= from));
            }
            offsets[v + 1] = targets.len();
        }
        RestrictedView { offsets, targets }
    }
}

struct RestrictedView {
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl Adjacency for RestrictedView {
    fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    fn successors(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }
}

struct CycleSink<'a> {
    cycles: Vec<Cycle>,
    cap: usize,
    global: &'a [u32],
}

impl CycleSink<'_> {
    fn push(&mut self, cycle: Cycle) -> Result<()> {
        if self.cycles.len() >= self.cap {
            return Err(Error::CycleCapExceeded { cap: self.cap });
        }
        self.cycles.push(cycle);
        Ok(())
    }

    /// Emits every labeling of a vertex cycle given the label choices of each arc.
    fn push_labeled(&mut self, path: &[u32], choices: &[&[u32]]) -> Result<()> {
        let vertices: Vec<u32> = path.iter().map(|&v| self.global[v as usize]).collect();
        let mut pick = vec![0usize; choices.len()];
        loop {
            let labels = pick.iter().zip(choices).map(|(&i, c)| c[i]).collect();
            self.push(Cycle { vertices: vertices.clone(), labels })?;
            // odometer over label choices
            let mut pos = choices.len();
            loop {
                if pos == 0 {
                    return Ok(());
                }
                pos -= 1;
                pick[pos] += 1;
                if pick[pos] < choices[pos].len() {
                    break;
                }
                pick[pos] = 0;
            }
        }
    }
}

/// Enumerates every labeled elementary cycle of `view` with Johnson's
/// algorithm, failing once more than `cap` cycles have been found.
pub fn enumerate_cycles(view: &InducedSubgraph, cap: usize) -> Result<CycleEnumeration> {
    let sccs = strongly_connected(view);
    let mut candidate = vec![false; view.len()];
    for c in 0..sccs.count() {
        if sccs.is_nontrivial(view, c) {
            for &v in &sccs.members[c] {
                candidate[v as usize] = true;
            }
        }
    }
    let cand_ids: Vec<usize> = (0..view.len()).filter(|&v| candidate[v]).collect();
    let mut compact = vec![NONE; view.len()];
    for (i, &v) in cand_ids.iter().enumerate() {
        compact[v] = i as u32;
    }
    let global: Vec<u32> = cand_ids.iter().map(|&v| view.global_id(v)).collect();
    let mut sink = CycleSink { cycles: Vec::new(), cap, global: &global };

    let mut adj: Vec<Vec<(u32, Vec<u32>)>> = vec![Vec::new(); cand_ids.len()];
    for (i, &v) in cand_ids.iter().enumerate() {
        let mut arcs: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
        for (&w, &label) in view.successors(v).iter().zip(view.labels(v)) {
            if w as usize == v {
                sink.push(Cycle { vertices: vec![global[i]], labels: vec![label] })?;
            } else if candidate[w as usize] && sccs.ids[w as usize] == sccs.ids[v] {
                arcs.entry(compact[w as usize]).or_default().push(label);
            }
        }
        adj[i] = arcs.into_iter().collect();
    }
    let cands = CycleCandidates { global: global.clone(), adj };
    johnson(&cands, &mut sink)?;

    let mut cycles = sink.cycles;
    cycles.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let mut seen = std::collections::HashSet::new();
    let vertex_disjoint = cycles.iter().flat_map(|c| c.vertices.iter()).all(|&v| seen.insert(v));
    debug_assert_eq!(cands.global.len(), global.len());
    Ok(CycleEnumeration { cycles, vertex_disjoint })
}

fn johnson(g: &CycleCandidates, sink: &mut CycleSink<'_>) -> Result<()> {
    let n = g.adj.len();
    let mut blocked = vec![false; n];
    let mut block_map: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut start = 0;
    while start < n {
        // component of the subgraph on start.. holding the least vertex with a cycle
        let view = g.restricted(start);
        let sccs = strongly_connected(&view);
        let Some(comp) = (0..sccs.count())
            .filter(|&c| sccs.members[c].len() > 1 && sccs.members[c][0] as usize >= start)
            .min_by_key(|&c| sccs.members[c][0])
        else {
            break;
        };
        let s = sccs.members[comp][0] as usize;
        let in_comp: Vec<bool> = (0..n).map(|v| v >= start && sccs.ids[v] as usize == comp).collect();
        for &v in &sccs.members[comp] {
            blocked[v as usize] = false;
            block_map[v as usize].clear();
        }
        circuits_from(g, s, &in_comp, &mut blocked, &mut block_map, sink)?;
        start = s + 1;
    }
    Ok(())
}

fn unblock(u: usize, blocked: &mut [bool], block_map: &mut [Vec<u32>]) {
    let mut stack = vec![u];
    while let Some(x) = stack.pop() {
        if !blocked[x] {
            continue;
        }
        blocked[x] = false;
        for w in std::mem::take(&mut block_map[x]) {
            if blocked[w as usize] {
                stack.push(w as usize);
            }
        }
    }
}

fn circuits_from(
    g: &CycleCandidates,
    s: usize,
    in_comp: &[bool],
    blocked: &mut [bool],
    block_map: &mut [Vec<u32>],
    sink: &mut CycleSink<'_>,
) -> Result<()> {
    struct Frame {
        v: usize,
        next: usize,
        found: bool,
    }
    let mut path: Vec<u32> = vec![s as u32];
    let mut frames = vec![Frame { v: s, next: 0, found: false }];
    blocked[s] = true;
    while let Some(top) = frames.last_mut() {
        let v = top.v;
        let arcs = &g.adj[v];
        if top.next < arcs.len() {
            let (w, _) = arcs[top.next];
            top.next += 1;
            let w = w as usize;
            if !in_comp[w] {
                continue;
            }
            if w == s {
                top.found = true;
                let choices: Vec<&[u32]> = path
                    .iter()
                    .enumerate()
                    .map(|(i, &a)| {
                        let b = path.get(i + 1).copied().unwrap_or(s as u32);
                        let pos = g.adj[a as usize].binary_search_by_key(&b, |(t, _)| *t).expect("arc on path");
                        g.adj[a as usize][pos].1.as_slice()
                    })
                    .collect();
                sink.push_labeled(&path, &choices)?;
            } else if !blocked[w] {
                blocked[w] = true;
                path.push(w as u32);
                frames.push(Frame { v: w, next: 0, found: false });
            }
            continue;
        }
        let found = top.found;
        if found {
            unblock(v, blocked, block_map);
        } else {
            for &(w, _) in arcs {
                let w = w as usize;
                if in_comp[w] && !block_map[w].contains(&(v as u32)) {
                    block_map[w].push(v as u32);
                }
            }
        }
        frames.pop();
        path.pop();
        if let Some(parent) = frames.last_mut() {
            parent.found |= found;
        }
    }
    Ok(())
}

/// Per-vertex forward exploration of a view: spectrum size, number of arcs
/// inside the spectrum, and eccentricity (largest finite distance).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumScan {
    pub sizes: Vec<u32>,
    pub arcs: Vec<u32>,
    pub eccentricity: Vec<u32>,
}

impl SpectrumScan {
    pub fn new<A: Adjacency + ?Sized>(view: &A) -> Self {
        let n = view.vertex_count();
        let mut sizes = vec![0u32; n];
        let mut arcs = vec![0u32; n];
        let mut eccentricity = vec![0u32; n];
        let mut stamp = vec![usize::MAX; n];
        let mut dist = vec![0u32; n];
        let mut queue = VecDeque::new();
        for v in 0..n {
            stamp[v] = v;
            dist[v] = 0;
            queue.push_back(v);
            let (mut size, mut arc_total, mut ecc) = (0u32, 0u32, 0u32);
            while let Some(u) = queue.pop_front() {
                size += 1;
                ecc = ecc.max(dist[u]);
                let succ = view.successors(u);
                // spectra are closed under successors, so every arc out of u stays inside
                arc_total += succ.len() as u32;
                for &w in succ {
                    let w = w as usize;
                    if stamp[w] != v {
                        stamp[w] = v;
                        dist[w] = dist[u] + 1;
                        queue.push_back(w);
                    }
                }
            }
            sizes[v] = size;
            arcs[v] = arc_total;
            eccentricity[v] = ecc;
        }
        SpectrumScan { sizes, arcs, eccentricity }
    }

    /// `arcs - size` for vertex `v`.
    pub fn excess(&self, v: usize) -> i64 {
        i64::from(self.arcs[v]) - i64::from(self.sizes[v])
    }

    pub fn max_size(&self) -> u32 {
        self.sizes.iter().copied().max().unwrap_or(0)
    }

    pub fn excess_violations(&self) -> usize {
        (0..self.sizes.len()).filter(|&v| self.excess(v) >= 1).count()
    }

    pub fn max_eccentricity(&self) -> u32 {
        self.eccentricity.iter().copied().max().unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Spectra {
    /// `|Spec_out(v)|` per vertex of the view, in view order.
    pub sizes: Vec<u32>,
    pub max_spectrum: u32,
    /// Vertices whose spectrum spans more arcs than vertices.
    pub arc_excess_violations: usize,
}

pub fn spectra<A: Adjacency + ?Sized>(view: &A) -> Spectra {
    let scan = SpectrumScan::new(view);
    Spectra { max_spectrum: scan.max_size(), arc_excess_violations: scan.excess_violations(), sizes: scan.sizes }
}

/// Largest distance from a vertex to any vertex of its own spectrum.
pub fn eccentricity_max<A: Adjacency + ?Sized>(view: &A) -> u32 {
    SpectrumScan::new(view).max_eccentricity()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GiantDistance {
    /// Largest distance from a vertex outside the giant to the giant, over
    /// vertices that reach it.
    pub max_distance: u32,
    /// Vertices outside the giant with no path into it.
    pub unreachable: usize,
}

/// Multi-source BFS from the giant along reversed arcs.
pub fn distance_to_giant(g: &KOutDigraph, in_giant: &[bool]) -> GiantDistance {
    let (offsets, sources) = g.reverse_adjacency();
    let mut dist = vec![NONE; g.n()];
    let mut queue: VecDeque<usize> = VecDeque::new();
    for v in (0..g.n()).filter(|&v| in_giant[v]) {
        dist[v] = 0;
        queue.push_back(v);
    }
    let mut max_distance = 0;
    while let Some(v) = queue.pop_front() {
        max_distance = max_distance.max(dist[v]);
        for &u in &sources[offsets[v]..offsets[v + 1]] {
            let u = u as usize;
            if dist[u] == NONE {
                dist[u] = dist[v] + 1;
                queue.push_back(u);
            }
        }
    }
    GiantDistance { max_distance, unreachable: dist.iter().filter(|&&d| d == NONE).count() }
}

/// Length of the longest simple directed path of `view`.
///
/// Components are processed sinks first. Inside a component with a cycle,
/// all simple paths are searched exhaustively, so such components are
/// limited to `scc_cap` vertices.
pub fn longest_path<A: Adjacency + ?Sized>(view: &A, scc_cap: usize) -> Result<u32> {
    let n = view.vertex_count();
    let sccs = strongly_connected(view);
    let mut best = vec![0u32; n];
    for c in 0..sccs.count() {
        let members = &sccs.members[c];
        let exit = |b: usize, best: &[u32]| -> u32 {
            view.successors(b)
                .iter()
                .filter(|&&w| sccs.ids[w as usize] as usize != c)
                .map(|&w| 1 + best[w as usize])
                .max()
                .unwrap_or(0)
        };
        if members.len() == 1 {
            let v = members[0] as usize;
            best[v] = exit(v, &best);
            continue;
        }
        if members.len() > scc_cap {
            return Err(Error::SccCapExceeded { size: members.len(), cap: scc_cap });
        }
        // deduplicated arcs inside the component, in local indices
        let local = |w: u32| members.binary_search(&w).ok();
        let inner: Vec<Vec<usize>> = members
            .iter()
            .map(|&b| {
                let mut out: Vec<usize> = view
                    .successors(b as usize)
                    .iter()
                    .filter(|&&w| sccs.ids[w as usize] as usize == c)
                    .filter_map(|&w| local(w))
                    .collect();
                out.sort_unstable();
                out.dedup();
                out
            })
            .collect();
        let exits: Vec<u32> = members.iter().map(|&b| exit(b as usize, &best)).collect();
        let mut on_path = vec![false; members.len()];
        for (i, &v) in members.iter().enumerate() {
            let mut top = 0;
            search_inside(&inner, i, 0, &mut on_path, &mut |b, len| top = top.max(len + exits[b]));
            best[v as usize] = top;
        }
    }
    Ok(best.into_iter().max().unwrap_or(0))
}

fn search_inside(inner: &[Vec<usize>], v: usize, len: u32, on_path: &mut [bool], visit: &mut impl FnMut(usize, u32)) {
    visit(v, len);
    on_path[v] = true;
    for &w in &inner[v] {
        if !on_path[w] {
            search_inside(inner, w, len + 1, on_path, visit);
        }
    }
    on_path[v] = false;
}

/// `|Spec(v)|` for every vertex, from the spectra outside the giant.
///
/// A vertex reaching the giant sees all of it (the giant is closed and
/// strongly connected); otherwise its spectrum lies entirely outside.
/// `out_sizes` is indexed like `view`.
pub fn full_spectrum_sizes(view: &InducedSubgraph, out_sizes: &[u32], dec: &Decomposition) -> Vec<u32> {
    let giant = dec.giant.len() as u32;
    (0..dec.in_giant.len())
        .map(|v| {
            let out = view.local_id(v).map_or(0, |l| out_sizes[l]);
            out + if dec.reaches_giant[v] { giant } else { 0 }
        })
        .collect()
}

/// `|Spec(v)|` for every vertex by propagating reachable-component bitsets
/// through the condensation. Limited to `n <= limit`.
pub fn exact_spectrum_sizes(g: &KOutDigraph, limit: usize) -> Result<Vec<u32>> {
    if g.n() > limit {
        return Err(Error::SizeLimitExceeded { n: g.n(), limit });
    }
    let sccs = strongly_connected(g);
    let cond = condense(g, &sccs);
    let words = sccs.count().div_ceil(64);
    let mut reach: Vec<Vec<u64>> = Vec::with_capacity(sccs.count());
    let mut size = Vec::with_capacity(sccs.count());
    // ids are reverse topological, so successors are already done
    for c in 0..sccs.count() {
        let mut bits = vec![0u64; words];
        bits[c / 64] |= 1 << (c % 64);
        for &d in &cond.successors[c] {
            for (b, r) in bits.iter_mut().zip(&reach[d as usize]) {
                *b |= r;
            }
        }
        let total: usize =
            (0..sccs.count()).filter(|&d| bits[d / 64] >> (d % 64) & 1 == 1).map(|d| sccs.members[d].len()).sum();
        size.push(total as u32);
        reach.push(bits);
    }
    Ok(sccs.ids.iter().map(|&c| size[c as usize]).collect())
}

/// Vertices lying on a cycle whose spectrum has no excess arcs but still does
/// not consist of exactly one cycle with trees attached.
pub fn eye_violations(view: &InducedSubgraph, scan: &SpectrumScan, cycles: &[Cycle]) -> usize {
    let mut on_cycle = vec![false; view.len()];
    for c in cycles {
        for &v in &c.vertices {
            if let Some(l) = view.local_id(v as usize) {
                on_cycle[l] = true;
            }
        }
    }
    let mut mark = vec![false; view.len()];
    let mut violations = 0;
    for v in (0..view.len()).filter(|&v| on_cycle[v] && scan.excess(v) == 0) {
        mark.iter_mut().for_each(|m| *m = false);
        let mut stack = vec![v];
        mark[v] = true;
        while let Some(u) = stack.pop() {
            for &w in view.successors(u) {
                if !mark[w as usize] {
                    mark[w as usize] = true;
                    stack.push(w as usize);
                }
            }
        }
        let inside = cycles.iter().filter(|c| view.local_id(c.vertices[0] as usize).is_some_and(|l| mark[l])).count();
        if inside != 1 {
            violations += 1;
        }
    }
    violations
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OutsideConfig {
    pub cycle_cap: usize,
    pub scc_cap: usize,
}

impl Default for OutsideConfig {
    fn default() -> Self {
        OutsideConfig { cycle_cap: DEFAULT_CYCLE_CAP, scc_cap: DEFAULT_SCC_CAP }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OutsideReport {
    pub cycles: Vec<Cycle>,
    /// Cycle length to number of cycles of that length.
    pub cycles_by_length: BTreeMap<usize, usize>,
    pub total_cycles: usize,
    pub vertex_disjoint: bool,
    pub longest_cycle: usize,
    /// Vertices outside the giant, ascending; `spectra_sizes` is aligned with it.
    pub outside_vertices: Vec<u32>,
    pub spectra_sizes: Vec<u32>,
    pub max_spectrum: u32,
    pub arc_excess_violations: usize,
    pub w: u32,
    /// Vertices with no path into the giant (excluded from `w`).
    pub unreachable_from_giant: usize,
    pub d: u32,
    pub m: u32,
    pub max_full_spectrum: u32,
    pub spectrum_of_zero: u32,
    /// Cycle vertices whose spectrum fails the single-cycle shape check.
    pub eye_violations: usize,
}

impl OutsideReport {
    pub fn new(g: &KOutDigraph, dec: &Decomposition, config: &OutsideConfig) -> Result<Self> {
        let view = InducedSubgraph::outside_giant(g, dec);
        let enumeration = enumerate_cycles(&view, config.cycle_cap)?;
        let scan = SpectrumScan::new(&view);
        let distance = distance_to_giant(g, &dec.in_giant);
        let m = longest_path(&view, config.scc_cap)?;
        let full = full_spectrum_sizes(&view, &scan.sizes, dec);

        let mut cycles_by_length = BTreeMap::new();
        for c in &enumeration.cycles {
            *cycles_by_length.entry(c.len()).or_insert(0) += 1;
        }
        Ok(OutsideReport {
            total_cycles: enumeration.cycles.len(),
            longest_cycle: cycles_by_length.keys().next_back().copied().unwrap_or(0),
            cycles_by_length,
            vertex_disjoint: enumeration.vertex_disjoint,
            eye_violations: eye_violations(&view, &scan, &enumeration.cycles),
            cycles: enumeration.cycles,
            outside_vertices: view.global_ids().to_vec(),
            max_spectrum: scan.max_size(),
            arc_excess_violations: scan.excess_violations(),
            d: scan.max_eccentricity(),
            spectra_sizes: scan.sizes,
            w: distance.max_distance,
            unreachable_from_giant: distance.unreachable,
            m,
            max_full_spectrum: full.iter().copied().max().unwrap_or(0),
            spectrum_of_zero: full[0],
        })
    }

    pub fn cycles_of_length(&self, len: usize) -> usize {
        self.cycles_by_length.get(&len).copied().unwrap_or(0)
    }

    pub fn check(&self) -> Result<()> {
        let fail = |msg: &str| Err(Error::Invariant(msg.to_string()));
        if self.cycles_by_length.values().sum::<usize>() != self.total_cycles {
            return fail("cycle histogram does not sum to the total");
        }
        if self.d > self.m {
            return fail("largest eccentricity exceeds the longest path");
        }
        if self.spectra_sizes.contains(&0) {
            return fail("a spectrum misses its own root");
        }
        Ok(())
    }
}
