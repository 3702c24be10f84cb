//! Ground truth for small cases, independent of the main algorithms:
//! exhaustive enumeration of every endpoint table, exact Stirling numbers of
//! the second kind, exact k-surjection expectations, a log-space asymptotic
//! for Stirling numbers, Galton-Watson extinction iteration, and a
//! brute-force recomputation of every per-digraph statistic.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::decompose::Decomposition;
use crate::digraph::KOutDigraph;
use crate::error::{Error, Result};
use crate::outside::{OutsideConfig, OutsideReport};

/// Largest number of endpoint tables [`enumerate_all`] will walk.
pub const ENUMERATION_LIMIT: u64 = 10_000_000;
/// Largest first argument accepted by [`stirling2`].
pub const STIRLING_LIMIT: usize = 600;
/// Largest `n` handled by [`BruteForce`].
pub const BRUTE_FORCE_LIMIT: usize = 10;

fn table_count(n: usize, k: usize) -> Result<u64> {
    let arcs = (n * k) as u32;
    (n as u64)
        .checked_pow(arcs)
        .filter(|&c| c <= ENUMERATION_LIMIT)
        .ok_or_else(|| Error::invalid(format!("n^(kn) for n = {n}, k = {k} exceeds {ENUMERATION_LIMIT}")))
}

/// Walks endpoint tables whose leading entries equal `prefix`, in
/// lexicographic order (last entry varies fastest).
fn walk(n: usize, k: usize, prefix: &[u32], visitor: &mut impl FnMut(&KOutDigraph)) {
    let mut endpoints = vec![0u32; n * k];
    endpoints[..prefix.len()].copy_from_slice(prefix);
    let free = prefix.len();
    loop {
        let g = KOutDigraph::from_endpoints(n, k, endpoints.clone()).expect("enumerated table is valid");
        visitor(&g);
        let mut pos = endpoints.len();
        loop {
            if pos == free {
                return;
            }
            pos -= 1;
            endpoints[pos] += 1;
            if (endpoints[pos] as usize) < n {
                break;
            }
            endpoints[pos] = 0;
        }
    }
}

/// Visits every k-out endpoint table on `n` vertices exactly once, in
/// lexicographic order. Returns the number visited.
pub fn enumerate_all(n: usize, k: usize, mut visitor: impl FnMut(&KOutDigraph)) -> Result<u64> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    let total = table_count(n, k)?;
    walk(n, k, &[], &mut visitor);
    Ok(total)
}

/// Parallel fold over all tables, partitioned by the first vertex's row.
pub fn fold_all<T, F, M>(n: usize, k: usize, init: impl Fn() -> T + Sync, visit: F, merge: M) -> Result<T>
where
    T: Send,
    F: Fn(&mut T, &KOutDigraph) + Sync,
    M: Fn(T, T) -> T + Sync + Send,
{
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    table_count(n, k)?;
    let prefixes = (n as u64).pow(k as u32);
    Ok((0..prefixes)
        .into_par_iter()
        .map(|p| {
            let prefix: Vec<u32> = (0..k).rev().map(|i| ((p / (n as u64).pow(i as u32)) % n as u64) as u32).collect();
            let mut acc = init();
            walk(n, k, &prefix, &mut |g| visit(&mut acc, g));
            acc
        })
        .reduce(&init, &merge))
}

/// Histograms over all `n^(kn)` tables, every entry computed by [`BruteForce`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EnumerationTally {
    pub n: usize,
    pub k: usize,
    pub total: u64,
    pub simple: u64,
    /// `core_sizes[s]`: tables whose one-in-core has `s` vertices.
    pub core_sizes: Vec<u64>,
    pub giant_sizes: Vec<u64>,
    /// `k_surjections[s]`: k-surjections of size `s`, summed over all tables.
    pub k_surjections: Vec<u64>,
    /// Number of labeled cycles outside the giant to tables with that count.
    pub cycle_counts: BTreeMap<usize, u64>,
    /// Tables on which the giant is not inside the one-in-core (always 0).
    pub giant_outside_core: u64,
}

impl EnumerationTally {
    fn empty(n: usize, k: usize) -> Self {
        EnumerationTally {
            n,
            k,
            core_sizes: vec![0; n + 1],
            giant_sizes: vec![0; n + 1],
            k_surjections: vec![0; n + 1],
            ..Default::default()
        }
    }

    fn add(&mut self, g: &KOutDigraph) {
        let b = BruteForce::new(g);
        self.total += 1;
        self.simple += u64::from(b.is_simple);
        self.core_sizes[b.core.len()] += 1;
        self.giant_sizes[b.giant.len()] += 1;
        for (s, &c) in b.k_surjections.iter().enumerate() {
            self.k_surjections[s] += c;
        }
        *self.cycle_counts.entry(b.total_cycles).or_insert(0) += 1;
        self.giant_outside_core += u64::from(b.giant.iter().any(|v| !b.core.contains(v)));
    }

    fn merge(mut self, other: Self) -> Self {
        self.total += other.total;
        self.simple += other.simple;
        for (a, b) in self.core_sizes.iter_mut().zip(&other.core_sizes) {
            *a += b;
        }
        for (a, b) in self.giant_sizes.iter_mut().zip(&other.giant_sizes) {
            *a += b;
        }
        for (a, b) in self.k_surjections.iter_mut().zip(&other.k_surjections) {
            *a += b;
        }
        for (c, m) in other.cycle_counts {
            *self.cycle_counts.entry(c).or_insert(0) += m;
        }
        self.giant_outside_core += other.giant_outside_core;
        self
    }

    /// Every histogram sums to `total`.
    pub fn is_consistent(&self) -> bool {
        self.core_sizes.iter().sum::<u64>() == self.total
            && self.giant_sizes.iter().sum::<u64>() == self.total
            && self.cycle_counts.values().sum::<u64>() == self.total
    }
}

pub fn tally(n: usize, k: usize) -> Result<EnumerationTally> {
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::invalid(format!("brute force is limited to n <= {BRUTE_FORCE_LIMIT}")));
    }
    fold_all(n, k, || EnumerationTally::empty(n, k), |t, g| t.add(g), EnumerationTally::merge)
}

/// Runs the main decomposition pipeline on every table and compares it with
/// the brute-force recomputation. Returns the number of tables checked, or
/// the first mismatch.
pub fn cross_check_all(n: usize, k: usize) -> Result<u64> {
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::invalid(format!("brute force is limited to n <= {BRUTE_FORCE_LIMIT}")));
    }
    fold_all(
        n,
        k,
        || Ok(0u64),
        |acc: &mut Result<u64>, g| {
            if let Ok(count) = acc {
                match BruteForce::new(g).compare_with_pipeline(g) {
                    Ok(()) => *count += 1,
                    Err(e) => *acc = Err(e),
                }
            }
        },
        |a, b| match (a, b) {
            (Ok(x), Ok(y)) => Ok(x + y),
            (Err(e), _) | (_, Err(e)) => Err(e),
        },
    )?
}

/// Every statistic of one digraph, recomputed from transitive closures,
/// all-pairs distances and subset/permutation enumeration. Only for tiny `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BruteForce {
    pub is_simple: bool,
    pub strongly_connected: bool,
    pub giant: Vec<u32>,
    pub core: Vec<u32>,
    pub k_surjections: Vec<u64>,
    pub all_reach_giant: bool,
    pub cycles_by_length: BTreeMap<usize, usize>,
    pub total_cycles: usize,
    pub vertex_disjoint: bool,
    /// Spectrum sizes of the vertices outside the giant, ascending by vertex.
    pub spectra_sizes: Vec<u32>,
    pub arc_excess_violations: usize,
    pub w: u32,
    pub d: u32,
    pub m: u32,
    pub max_full_spectrum: u32,
    pub spectrum_of_zero: u32,
}

const INF: u32 = u32::MAX;

/// All-pairs shortest distances among `alive` vertices (Floyd-Warshall).
fn all_pairs(g: &KOutDigraph, alive: &[bool]) -> Vec<Vec<u32>> {
    let n = g.n();
    let mut d = vec![vec![INF; n]; n];
    for v in (0..n).filter(|&v| alive[v]) {
        d[v][v] = 0;
        for &w in g.row(v) {
            let w = w as usize;
            if alive[w] && w != v {
                d[v][w] = 1;
            }
        }
    }
    for m in 0..n {
        for a in 0..n {
            for b in 0..n {
                if d[a][m] != INF && d[m][b] != INF && d[a][m] + d[m][b] < d[a][b] {
                    d[a][b] = d[a][m] + d[m][b];
                }
            }
        }
    }
    d
}

fn has_arc(g: &KOutDigraph, from: usize, to: usize) -> bool {
    g.row(from).contains(&(to as u32))
}

fn arc_labels(g: &KOutDigraph, from: usize, to: usize) -> usize {
    g.row(from).iter().filter(|&&w| w as usize == to).count()
}

fn permutations(items: &[usize], out: &mut Vec<Vec<usize>>, prefix: &mut Vec<usize>, used: &mut [bool]) {
    if prefix.len() == items.len() {
        out.push(prefix.clone());
        return;
    }
    for i in 0..items.len() {
        if !used[i] {
            used[i] = true;
            prefix.push(items[i]);
            permutations(items, out, prefix, used);
            prefix.pop();
            used[i] = false;
        }
    }
}

fn longest_simple_from(g: &KOutDigraph, alive: &[bool], v: usize, on_path: &mut [bool]) -> u32 {
    on_path[v] = true;
    let mut best = 0;
    for &w in g.row(v) {
        let w = w as usize;
        if alive[w] && !on_path[w] {
            best = best.max(1 + longest_simple_from(g, alive, w, on_path));
        }
    }
    on_path[v] = false;
    best
}

impl BruteForce {
    pub fn new(g: &KOutDigraph) -> Self {
        let n = g.n();
        assert!(n <= BRUTE_FORCE_LIMIT, "brute force is limited to n <= {BRUTE_FORCE_LIMIT}");
        let everyone = vec![true; n];
        let dist = all_pairs(g, &everyone);
        let reach = |a: usize, b: usize| dist[a][b] != INF;

        // strongly connected classes by mutual reachability
        let mut class_of = vec![usize::MAX; n];
        let mut classes: Vec<Vec<u32>> = Vec::new();
        for v in 0..n {
            if class_of[v] == usize::MAX {
                let members: Vec<u32> = (0..n).filter(|&u| reach(v, u) && reach(u, v)).map(|u| u as u32).collect();
                for &u in &members {
                    class_of[u as usize] = classes.len();
                }
                classes.push(members);
            }
        }
        let closed = |c: &Vec<u32>| c.iter().all(|&v| g.row(v as usize).iter().all(|w| c.contains(w)));
        let giant = classes
            .iter()
            .filter(|c| closed(c))
            .min_by_key(|c| (std::cmp::Reverse(c.len()), c[0]))
            .cloned()
            .expect("closed class exists");
        let in_giant: Vec<bool> = (0..n).map(|v| giant.contains(&(v as u32))).collect();

        // surjective subsets and k-surjections
        let mut core_mask = 0u32;
        let mut k_surjections = vec![0u64; n + 1];
        for mask in 1u32..(1 << n) {
            let inside = |v: usize| mask >> v & 1 == 1;
            let surjective = (0..n).filter(|&v| inside(v)).all(|v| (0..n).any(|u| inside(u) && has_arc(g, u, v)));
            if !surjective {
                continue;
            }
            core_mask |= mask;
            let is_closed = (0..n).filter(|&v| inside(v)).all(|v| g.row(v).iter().all(|&w| inside(w as usize)));
            if is_closed {
                k_surjections[mask.count_ones() as usize] += 1;
            }
        }
        let core: Vec<u32> = (0..n as u32).filter(|&v| core_mask >> v & 1 == 1).collect();

        // labeled cycles outside the giant: smallest vertex first, every order of the rest
        let outside: Vec<bool> = in_giant.iter().map(|&b| !b).collect();
        let out_vertices: Vec<usize> = (0..n).filter(|&v| outside[v]).collect();
        let mut cycles_by_length = BTreeMap::new();
        let mut cycle_vertex_uses = vec![0usize; n];
        for mask in 1u32..(1 << out_vertices.len()) {
            let chosen: Vec<usize> =
                (0..out_vertices.len()).filter(|&i| mask >> i & 1 == 1).map(|i| out_vertices[i]).collect();
            let mut orders = Vec::new();
            let rest = &chosen[1..];
            permutations(rest, &mut orders, &mut Vec::new(), &mut vec![false; rest.len()]);
            for order in orders {
                let seq: Vec<usize> = std::iter::once(chosen[0]).chain(order).collect();
                let labeled: usize = (0..seq.len()).map(|i| arc_labels(g, seq[i], seq[(i + 1) % seq.len()])).product();
                if labeled > 0 {
                    *cycles_by_length.entry(seq.len()).or_insert(0) += labeled;
                    for &v in &seq {
                        cycle_vertex_uses[v] += labeled;
                    }
                }
            }
        }
        let total_cycles = cycles_by_length.values().sum();

        let out_dist = all_pairs(g, &outside);
        let mut spectra_sizes = Vec::new();
        let mut arc_excess_violations = 0;
        let mut d = 0;
        let mut m = 0;
        let mut on_path = vec![false; n];
        for &v in &out_vertices {
            let spec: Vec<usize> = out_vertices.iter().copied().filter(|&u| out_dist[v][u] != INF).collect();
            let arcs: usize =
                spec.iter().map(|&u| g.row(u).iter().filter(|&&w| spec.contains(&(w as usize))).count()).sum();
            if arcs as i64 - spec.len() as i64 >= 1 {
                arc_excess_violations += 1;
            }
            spectra_sizes.push(spec.len() as u32);
            d = spec.iter().map(|&u| out_dist[v][u]).fold(d, u32::max);
            m = m.max(longest_simple_from(g, &outside, v, &mut on_path));
        }
        let w = out_vertices
            .iter()
            .filter_map(|&v| giant.iter().map(|&u| dist[v][u as usize]).filter(|&x| x != INF).min())
            .max()
            .unwrap_or(0);
        let full: Vec<u32> = (0..n).map(|v| (0..n).filter(|&u| reach(v, u)).count() as u32).collect();

        BruteForce {
            is_simple: (0..n).all(|v| {
                let row = g.row(v);
                row.iter().all(|&x| x as usize != v) && (0..row.len()).all(|i| !row[i + 1..].contains(&row[i]))
            }),
            strongly_connected: classes.len() == 1,
            all_reach_giant: (0..n).all(|v| reach(v, giant[0] as usize)),
            giant,
            core,
            k_surjections,
            cycles_by_length,
            total_cycles,
            vertex_disjoint: cycle_vertex_uses.iter().all(|&u| u <= 1),
            spectra_sizes,
            arc_excess_violations,
            w,
            d,
            m,
            max_full_spectrum: full.iter().copied().max().unwrap_or(0),
            spectrum_of_zero: full[0],
        }
    }

    /// Compares against [`Decomposition`] and [`OutsideReport`] on the same digraph.
    pub fn compare_with_pipeline(&self, g: &KOutDigraph) -> Result<()> {
        let dec = Decomposition::new(g);
        let report = OutsideReport::new(g, &dec, &OutsideConfig::default())?;
        let mut diffs = Vec::new();
        macro_rules! same {
            ($name:expr, $a:expr, $b:expr) => {
                if ($a) != ($b) {
                    diffs.push(format!("{}: pipeline {:?} vs brute force {:?}", $name, $a, $b));
                }
            };
        }
        same!("giant", &dec.giant, &self.giant);
        same!("one-in-core", &dec.one_in_core, &self.core);
        same!("all_reach_giant", dec.all_reach_giant, self.all_reach_giant);
        same!("strongly connected", dec.scc.count() == 1, self.strongly_connected);
        same!("simple", g.is_simple(), self.is_simple);
        same!("cycles by length", &report.cycles_by_length, &self.cycles_by_length);
        same!("total cycles", report.total_cycles, self.total_cycles);
        same!("vertex disjoint", report.vertex_disjoint, self.vertex_disjoint);
        same!("spectra", &report.spectra_sizes, &self.spectra_sizes);
        same!("excess violations", report.arc_excess_violations, self.arc_excess_violations);
        same!("W", report.w, self.w);
        same!("D", report.d, self.d);
        same!("M", report.m, self.m);
        same!("max |Spec|", report.max_full_spectrum, self.max_full_spectrum);
        same!("|Spec(0)|", report.spectrum_of_zero, self.spectrum_of_zero);
        if diffs.is_empty() {
            Ok(())
        } else {
            Err(Error::Invariant(format!("{:?}: {}", g.endpoints(), diffs.join("; "))))
        }
    }
}

/// Stirling number of the second kind `S{x, y}` from the recurrence
/// `S{x, y} = y S{x-1, y} + S{x-1, y-1}`, exact. `x` is limited to
/// [`STIRLING_LIMIT`].
pub fn stirling2(x: usize, y: usize) -> Result<BigUint> {
    if x > STIRLING_LIMIT {
        return Err(Error::invalid(format!("exact Stirling numbers are limited to x <= {STIRLING_LIMIT}")));
    }
    if y > x {
        return Ok(BigUint::zero());
    }
    // row[j] holds S{i, j} for the current i, j <= y
    let mut row = vec![BigUint::zero(); y + 1];
    row[0] = BigUint::one();
    for i in 1..=x {
        for j in (1..=y.min(i)).rev() {
            let carried = std::mem::take(&mut row[j]) * BigUint::from(j);
            row[j] = carried + &row[j - 1];
        }
        row[0] = BigUint::zero();
    }
    Ok(std::mem::take(&mut row[y]))
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

fn binomial(n: usize, s: usize) -> BigUint {
    factorial(n) / (factorial(s) * factorial(n - s))
}

/// Number of surjective maps `[k m] -> [m]`, i.e. `m! S{km, m}`.
pub fn surjection_count(m: usize, k: usize) -> Result<BigUint> {
    if m == 0 || k == 0 {
        return Err(Error::invalid("m and k must be positive"));
    }
    Ok(factorial(m) * stirling2(k * m, m)?)
}

/// Exact expected number of k-surjections of size `s` in a uniform k-out
/// digraph on `n` vertices: `C(n, s) S{ks, s} s! / n^(ks)`.
pub fn expected_k_surjections(n: usize, s: usize, k: usize) -> Result<BigRational> {
    if s == 0 || s > n {
        return Err(Error::invalid(format!("need 1 <= s <= n, got s = {s}, n = {n}")));
    }
    let numer = binomial(n, s) * stirling2(k * s, s)? * factorial(s);
    let denom = BigUint::from(n).pow((k * s) as u32);
    Ok(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Natural logarithm of a positive big integer.
pub fn big_ln(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().map_or(f64::NAN, f64::ln);
    }
    let shift = bits - 64;
    (x >> shift).to_f64().map_or(f64::NAN, f64::ln) + shift as f64 * std::f64::consts::LN_2
}

/// Log of Good's approximation of `S{ks, s}`:
/// `log[(ks)!/s!] + s log(e^tau - 1) - ks log tau - log(2 pi ks (1 - k e^-tau)) / 2`.
///
/// The square-root factor uses `1 - k e^{-tau}`, the same quantity that
/// appears in the k-surjection probability; the variant with `1 - k e^{-k}`
/// does not converge to the exact numbers.
pub fn good_log_stirling(s: usize, k: usize, tau: f64) -> Result<f64> {
    if s == 0 || k < 2 {
        return Err(Error::invalid(format!("need s >= 1 and k >= 2, got s = {s}, k = {k}")));
    }
    use statrs::function::gamma::ln_gamma;
    let (s, k) = (s as f64, k as f64);
    Ok(ln_gamma(k * s + 1.0) - ln_gamma(s + 1.0) + s * tau.exp_m1().ln()
        - k * s * tau.ln()
        - 0.5 * (2.0 * std::f64::consts::PI * k * s * (1.0 - k * (-tau).exp())).ln())
}

fn check_gw(mu: f64, k: usize, m: usize) -> Result<()> {
    if !(mu > 0.0 && mu < 1.0) || k == 0 || m == 0 {
        return Err(Error::invalid(format!("need mu in (0, 1), k >= 1, m >= 1; got mu = {mu}, k = {k}, m = {m}")));
    }
    Ok(())
}

/// `phi_m(0)`: probability that a Galton-Watson process with `Bin(k, mu)`
/// offspring is extinct by generation `m`.
///
/// Near 1 the value is taken from [`gw_survival`], so it rounds consistently
/// with [`gw_bound`].
pub fn gw_extinction(mu: f64, k: usize, m: usize) -> Result<f64> {
    let survival = gw_survival(mu, k, m)?;
    if survival < 0.5 {
        return Ok(1.0 - survival);
    }
    let mut y = 0.0;
    for _ in 0..m {
        y = (1.0 - mu * (1.0 - y)).powi(k as i32);
    }
    Ok(y)
}

/// `1 - phi_m(0)`, iterated in complementary form so it stays accurate when
/// it is far below machine epsilon.
pub fn gw_survival(mu: f64, k: usize, m: usize) -> Result<f64> {
    check_gw(mu, k, m)?;
    let mut s = 1.0f64;
    for _ in 0..m {
        s = -((k as f64) * (-mu * s).ln_1p()).exp_m1();
    }
    Ok(s)
}

fn check_bound(mu: f64, k: usize, m: usize) -> Result<()> {
    check_gw(mu, k, m)?;
    if k < 2 || mu >= 1.0 / (2.0 * k as f64) {
        return Err(Error::invalid(format!("the bound needs k >= 2 and mu < 1/(2k); got mu = {mu}, k = {k}")));
    }
    Ok(())
}

/// Upper bound `1 - (k mu)^m + (1 - 2^-m) (k mu)^(m+1)` on `phi_m(0)`.
pub fn gw_bound(mu: f64, k: usize, m: usize) -> Result<f64> {
    Ok(1.0 - gw_bound_complement(mu, k, m)?)
}

/// `1 - gw_bound`, i.e. `(k mu)^m (1 - (1 - 2^-m) k mu)`, a lower bound on the
/// survival probability.
pub fn gw_bound_complement(mu: f64, k: usize, m: usize) -> Result<f64> {
    check_bound(mu, k, m)?;
    let km = k as f64 * mu;
    let c = 1.0 - 0.5f64.powi(m as i32);
    Ok(km.powi(m as i32) * (1.0 - c * km))
}
