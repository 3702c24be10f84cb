//! Monte Carlo driver: one replicate per random stream, aggregation in index
//! order, and comparison of the aggregated statistics with the limit laws.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constants::ModelConstants;
use crate::decompose::Decomposition;
use crate::digraph::{KOutDigraph, RngSpec};
use crate::error::{Error, Result};
use crate::outside::{
    distance_to_giant, enumerate_cycles, full_spectrum_sizes, longest_path, InducedSubgraph, OutsideConfig,
    SpectrumScan,
};
use crate::stats::{joint_poisson_tv, ks_standard_normal, moments, poisson_tv, Moments};

/// Environment variable capping the worker pool.
pub const THREADS_ENV: &str = "KOUT_THREADS";

/// Which statistics each replicate computes beyond the layer sizes and the
/// loop/multi-arc counts, which are always recorded.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Collect {
    #[default]
    All,
    Core,
    Cycles,
    Distances,
}

impl Collect {
    fn cycles(self) -> bool {
        matches!(self, Collect::All | Collect::Cycles)
    }

    fn distances(self) -> bool {
        matches!(self, Collect::All | Collect::Distances)
    }
}

impl FromStr for Collect {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Collect::All),
            "core" => Ok(Collect::Core),
            "cycles" => Ok(Collect::Cycles),
            "distances" => Ok(Collect::Distances),
            other => Err(Error::invalid(format!("unknown statistics set {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub n: usize,
    pub k: usize,
    pub reps: u64,
    pub seed: u64,
    pub collect: Collect,
    /// Worker threads; `None` reads [`THREADS_ENV`], falling back to rayon's default.
    pub threads: Option<usize>,
    pub cycle_cap: usize,
    pub scc_cap: usize,
}

impl ExperimentConfig {
    pub fn new(n: usize, k: usize, reps: u64, seed: u64) -> Self {
        let outside = OutsideConfig::default();
        ExperimentConfig {
            n,
            k,
            reps,
            seed,
            collect: Collect::All,
            threads: None,
            cycle_cap: outside.cycle_cap,
            scc_cap: outside.scc_cap,
        }
    }

    pub fn with_collect(mut self, collect: Collect) -> Self {
        self.collect = collect;
        self
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = Some(threads);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.reps == 0 {
            return Err(Error::invalid("reps must be at least 1"));
        }
        if self.n == 0 || self.k == 0 {
            return Err(Error::invalid("n and k must be positive"));
        }
        Ok(())
    }

    fn thread_count(&self) -> Result<Option<usize>> {
        if let Some(t) = self.threads {
            return Ok(Some(t.max(1)));
        }
        match std::env::var(THREADS_ENV) {
            Ok(v) => v
                .trim()
                .parse::<usize>()
                .map(|t| Some(t.max(1)))
                .map_err(|_| Error::invalid(format!("{THREADS_ENV} must be a positive integer, got {v:?}"))),
            Err(_) => Ok(None),
        }
    }
}

/// Statistics of one replicate. Fields outside the configured [`Collect`]
/// set are `None`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReplicateRecord {
    pub replicate: u64,
    pub n: usize,
    pub k: usize,
    pub q_size: usize,
    pub g_size: usize,
    pub mid_size: usize,
    pub all_reach: bool,
    pub strongly_connected: bool,
    pub cycles_by_length: Option<BTreeMap<usize, usize>>,
    pub cycles_total: Option<usize>,
    pub disjoint: Option<bool>,
    pub longest_cycle: Option<usize>,
    pub max_spec_out: Option<u32>,
    pub excess_violations: Option<usize>,
    pub w: Option<u32>,
    pub d: Option<u32>,
    pub m: Option<u32>,
    pub max_full_spec: Option<u32>,
    pub spec0: Option<u32>,
    pub loops: usize,
    pub multis: usize,
    pub simple: bool,
    pub ms_elapsed: f64,
}

impl ReplicateRecord {
    pub fn cycles_of_length(&self, len: usize) -> Option<usize> {
        self.cycles_by_length.as_ref().map(|h| h.get(&len).copied().unwrap_or(0))
    }

    fn cycles_len3plus(&self) -> Option<usize> {
        self.cycles_by_length.as_ref().map(|h| h.range(3..).map(|(_, c)| c).sum())
    }
}

/// Generates the digraph for replicate `index` and records its statistics.
pub fn run_replicate(config: &ExperimentConfig, index: u64) -> Result<ReplicateRecord> {
    let tag = |e: Error| Error::Replicate { index, source: Box::new(e) };
    let start = Instant::now();
    let g = KOutDigraph::generate(config.n, config.k, RngSpec::new(config.seed, index)).map_err(tag)?;
    let mut record = measure(&g, config).map_err(tag)?;
    record.replicate = index;
    record.ms_elapsed = start.elapsed().as_secs_f64() * 1e3;
    Ok(record)
}

fn measure(g: &KOutDigraph, config: &ExperimentConfig) -> Result<ReplicateRecord> {
    let dec = Decomposition::new(g);
    dec.check(g)?;
    let layers = dec.layers();
    let mut record = ReplicateRecord {
        replicate: 0,
        n: g.n(),
        k: g.k(),
        q_size: layers.one_in_core,
        g_size: layers.giant,
        mid_size: layers.middle,
        all_reach: layers.all_reach_giant,
        strongly_connected: dec.scc.count() == 1,
        cycles_by_length: None,
        cycles_total: None,
        disjoint: None,
        longest_cycle: None,
        max_spec_out: None,
        excess_violations: None,
        w: None,
        d: None,
        m: None,
        max_full_spec: None,
        spec0: None,
        loops: g.count_self_loops(),
        multis: g.count_multi_pairs(),
        simple: g.is_simple(),
        ms_elapsed: 0.0,
    };
    if record.strongly_connected && record.g_size != g.n() {
        return Err(Error::Invariant("strongly connected digraph with a partial giant".into()));
    }
    if !config.collect.cycles() && !config.collect.distances() {
        return Ok(record);
    }
    let view = InducedSubgraph::outside_giant(g, &dec);
    if config.collect.cycles() {
        let cycles = enumerate_cycles(&view, config.cycle_cap)?;
        if cycles.cycles.iter().flat_map(|c| &c.vertices).any(|&v| !dec.in_core[v as usize]) {
            return Err(Error::Invariant("cycle outside the one-in-core".into()));
        }
        let mut hist = BTreeMap::new();
        for c in &cycles.cycles {
            *hist.entry(c.len()).or_insert(0) += 1;
        }
        record.cycles_total = Some(cycles.cycles.len());
        record.longest_cycle = Some(hist.keys().next_back().copied().unwrap_or(0));
        record.cycles_by_length = Some(hist);
        record.disjoint = Some(cycles.vertex_disjoint);
        if config.collect.distances() {
            let scan = SpectrumScan::new(&view);
            if crate::outside::eye_violations(&view, &scan, &cycles.cycles) != 0 {
                return Err(Error::Invariant("spectrum of a cycle vertex is not a single eye".into()));
            }
        }
    }
    if config.collect.distances() {
        let scan = SpectrumScan::new(&view);
        let m = longest_path(&view, config.scc_cap)?;
        let d = scan.max_eccentricity();
        if d > m {
            return Err(Error::Invariant(format!("eccentricity {d} exceeds longest path {m}")));
        }
        let full = full_spectrum_sizes(&view, &scan.sizes, &dec);
        record.max_spec_out = Some(scan.max_size());
        record.excess_violations = Some(scan.excess_violations());
        record.w = Some(distance_to_giant(g, &dec.in_giant).max_distance);
        record.d = Some(d);
        record.m = Some(m);
        record.max_full_spec = full.iter().copied().max();
        record.spec0 = Some(full[0]);
    }
    Ok(record)
}

/// Runs every replicate on a worker pool and returns the records in index order.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<ReplicateRecord>> {
    config.validate()?;
    let run = || (0..config.reps).into_par_iter().map(|i| run_replicate(config, i)).collect::<Result<Vec<_>>>();
    match config.thread_count()? {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::invalid(format!("cannot build worker pool: {e}")))?
            .install(run),
        None => run(),
    }
}

/// Moments of a standardized statistic and its KS distance to the standard normal.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Standardized {
    pub mean: f64,
    pub variance: f64,
    pub ks: f64,
}

impl Standardized {
    fn of(values: impl Iterator<Item = f64>, center: f64, scale: f64) -> Self {
        let z: Vec<f64> = values.map(|x| (x - center) / scale).collect();
        let m = moments(z.iter().copied());
        Standardized { mean: m.mean, variance: m.variance, ks: ks_standard_normal(&z) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LengthSummary {
    pub length: usize,
    pub mean: f64,
    pub expected: f64,
    pub tv: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CycleSummary {
    pub total: Moments,
    pub expected_total: f64,
    pub tv_total: f64,
    pub per_length: Vec<LengthSummary>,
    /// Fraction of replicates with two cycles sharing a vertex.
    pub intersecting_fraction: f64,
    pub longest: Moments,
}

/// A statistic divided by its predicted growth, with the predicted limit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ratio {
    pub moments: Moments,
    pub median: f64,
    pub limit: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtremeSummary {
    /// Max spectrum size outside the giant over `log n`.
    pub spectrum: Ratio,
    /// Largest eccentricity over `log n`.
    pub eccentricity: Ratio,
    /// Longest path over `log n`.
    pub longest_path: Ratio,
    /// Max distance to the giant over `log_k log n`.
    pub distance_to_giant: Ratio,
    pub excess_violation_fraction: f64,
    /// Standardized `max_v |Spec(v)|`.
    pub max_full_spectrum: Standardized,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimplicitySummary {
    pub simple_fraction: f64,
    /// `exp(-k - k(k-1)/2)`.
    pub expected_simple: f64,
    pub loops: Moments,
    pub multis: Moments,
    /// TV distance of (loops, multis) to `Poi(k) x Poi(k(k-1)/2)`.
    pub joint_tv: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryReport {
    pub n: usize,
    pub k: usize,
    pub reps: usize,
    pub nu: f64,
    pub sigma2: f64,
    pub q: Moments,
    pub g: Moments,
    pub q_standardized: Standardized,
    pub g_standardized: Standardized,
    pub middle: Moments,
    pub all_reach_fraction: f64,
    pub strongly_connected_fraction: f64,
    pub cycles: Option<CycleSummary>,
    pub extremes: Option<ExtremeSummary>,
    pub simplicity: SimplicitySummary,
}

/// Aggregates replicate records against the model constants for their `k`.
pub fn summarize(records: &[ReplicateRecord], constants: &ModelConstants) -> Result<SummaryReport> {
    if records.len() < 2 {
        return Err(Error::invalid("at least two records are needed for a summary"));
    }
    let (n, k) = (records[0].n, records[0].k);
    if records.iter().any(|r| r.n != n || r.k != k) || k != constants.k as usize {
        return Err(Error::invalid("records and constants must share n and k"));
    }
    let reps = records.len() as f64;
    let nf = n as f64;
    let center = constants.nu * nf;
    let scale = (constants.sigma2 * nf).sqrt();
    let frac = |pred: &dyn Fn(&ReplicateRecord) -> bool| records.iter().filter(|r| pred(r)).count() as f64 / reps;

    let cycles = if records.iter().all(|r| r.cycles_total.is_some()) {
        let totals: Vec<u64> = records.iter().map(|r| r.cycles_total.unwrap() as u64).collect();
        let per_length = (1..=3)
            .map(|len| {
                let counts: Vec<u64> = records.iter().map(|r| r.cycles_of_length(len).unwrap() as u64).collect();
                let expected = constants.cycle_mean(len as u32);
                LengthSummary {
                    length: len,
                    mean: moments(counts.iter().map(|&c| c as f64)).mean,
                    expected,
                    tv: poisson_tv(&counts, expected),
                }
            })
            .collect();
        Some(CycleSummary {
            total: moments(totals.iter().map(|&c| c as f64)),
            expected_total: constants.cycle_mean_total,
            tv_total: poisson_tv(&totals, constants.cycle_mean_total),
            per_length,
            intersecting_fraction: frac(&|r| r.disjoint == Some(false)),
            longest: moments(records.iter().map(|r| r.longest_cycle.unwrap() as f64)),
        })
    } else {
        None
    };

    let extremes = if records.iter().all(|r| r.m.is_some()) {
        let ln_n = nf.ln();
        let loglog = ln_n.ln() / (k as f64).ln();
        let ratio = |f: &dyn Fn(&ReplicateRecord) -> f64, denom: f64, limit: f64| {
            let v: Vec<f64> = records.iter().map(|r| f(r) / denom).collect();
            Ratio { moments: moments(v.iter().copied()), median: crate::stats::quantile(&v, 0.5), limit }
        };
        Some(ExtremeSummary {
            spectrum: ratio(&|r| f64::from(r.max_spec_out.unwrap()), ln_n, constants.spectrum_coeff),
            eccentricity: ratio(&|r| f64::from(r.d.unwrap()), ln_n, constants.path_coeff),
            longest_path: ratio(&|r| f64::from(r.m.unwrap()), ln_n, constants.path_coeff),
            distance_to_giant: ratio(&|r| f64::from(r.w.unwrap()), loglog, 1.0),
            excess_violation_fraction: frac(&|r| r.excess_violations.unwrap_or(0) > 0),
            max_full_spectrum: Standardized::of(
                records.iter().map(|r| f64::from(r.max_full_spec.unwrap())),
                center,
                scale,
            ),
        })
    } else {
        None
    };

    let kf = k as f64;
    let pairs: Vec<(u64, u64)> = records.iter().map(|r| (r.loops as u64, r.multis as u64)).collect();
    let simplicity = SimplicitySummary {
        simple_fraction: frac(&|r| r.simple),
        expected_simple: (-kf - kf * (kf - 1.0) / 2.0).exp(),
        loops: moments(records.iter().map(|r| r.loops as f64)),
        multis: moments(records.iter().map(|r| r.multis as f64)),
        joint_tv: joint_poisson_tv(&pairs, kf, kf * (kf - 1.0) / 2.0),
    };

    Ok(SummaryReport {
        n,
        k,
        reps: records.len(),
        nu: constants.nu,
        sigma2: constants.sigma2,
        q: moments(records.iter().map(|r| r.q_size as f64)),
        g: moments(records.iter().map(|r| r.g_size as f64)),
        q_standardized: Standardized::of(records.iter().map(|r| r.q_size as f64), center, scale),
        g_standardized: Standardized::of(records.iter().map(|r| r.g_size as f64), center, scale),
        middle: moments(records.iter().map(|r| r.mid_size as f64)),
        all_reach_fraction: frac(&|r| r.all_reach),
        strongly_connected_fraction: frac(&|r| r.strongly_connected),
        cycles,
        extremes,
        simplicity,
    })
}

/// Column order of the replicate CSV.
pub const CSV_COLUMNS: [&str; 23] = [
    "replicate",
    "n",
    "k",
    "q_size",
    "g_size",
    "mid_size",
    "all_reach",
    "cycles_total",
    "cycles_len1",
    "cycles_len2",
    "cycles_len3plus",
    "disjoint",
    "longest_cycle",
    "max_spec_out",
    "w",
    "d",
    "m",
    "max_full_spec",
    "spec0",
    "loops",
    "multis",
    "simple",
    "ms_elapsed",
];

/// One CSV line; statistics that were not collected are empty cells.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub replicate: u64,
    pub n: usize,
    pub k: usize,
    pub q_size: usize,
    pub g_size: usize,
    pub mid_size: usize,
    pub all_reach: bool,
    pub cycles_total: Option<usize>,
    pub cycles_len1: Option<usize>,
    pub cycles_len2: Option<usize>,
    pub cycles_len3plus: Option<usize>,
    pub disjoint: Option<bool>,
    pub longest_cycle: Option<usize>,
    pub max_spec_out: Option<u32>,
    pub w: Option<u32>,
    pub d: Option<u32>,
    pub m: Option<u32>,
    pub max_full_spec: Option<u32>,
    pub spec0: Option<u32>,
    pub loops: usize,
    pub multis: usize,
    pub simple: bool,
    pub ms_elapsed: f64,
}

impl From<&ReplicateRecord> for CsvRow {
    fn from(r: &ReplicateRecord) -> Self {
        CsvRow {
            replicate: r.replicate,
            n: r.n,
            k: r.k,
            q_size: r.q_size,
            g_size: r.g_size,
            mid_size: r.mid_size,
            all_reach: r.all_reach,
            cycles_total: r.cycles_total,
            cycles_len1: r.cycles_of_length(1),
            cycles_len2: r.cycles_of_length(2),
            cycles_len3plus: r.cycles_len3plus(),
            disjoint: r.disjoint,
            longest_cycle: r.longest_cycle,
            max_spec_out: r.max_spec_out,
            w: r.w,
            d: r.d,
            m: r.m,
            max_full_spec: r.max_full_spec,
            spec0: r.spec0,
            loops: r.loops,
            multis: r.multis,
            simple: r.simple,
            ms_elapsed: r.ms_elapsed,
        }
    }
}

pub fn write_csv_to<W: Write>(records: &[ReplicateRecord], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_COLUMNS)?;
    for r in records {
        w.serialize(CsvRow::from(r))?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn read_csv_from<R: std::io::Read>(input: R) -> Result<Vec<CsvRow>> {
    let mut reader = csv::Reader::from_reader(input);
    let headers = reader.headers()?.clone();
    if headers.iter().ne(CSV_COLUMNS) {
        return Err(Error::Parse { offset: 0, message: format!("unexpected CSV header {headers:?}") });
    }
    reader.deserialize().map(|row| row.map_err(Error::from)).collect()
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

fn io_error(path: &Path, e: Error) -> Error {
    match e {
        Error::Csv(c) if c.is_io_error() => match c.into_kind() {
            csv::ErrorKind::Io(source) => Error::Io { path: path.to_path_buf(), source },
            other => Error::invalid(format!("{other:?}")),
        },
        Error::Json(j) if j.is_io() => Error::Io { path: path.to_path_buf(), source: j.into() },
        other => other,
    }
}

pub fn write_csv(records: &[ReplicateRecord], path: &Path) -> Result<()> {
    write_csv_to(records, create(path)?).map_err(|e| io_error(path, e))
}

pub fn write_json_to<T: Serialize + ?Sized, W: Write>(value: &T, mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out).map_err(serde_json::Error::io)?;
    out.flush().map_err(serde_json::Error::io)?;
    Ok(())
}

pub fn write_json<T: Serialize + ?Sized>(value: &T, path: &Path) -> Result<()> {
    write_json_to(value, create(path)?).map_err(|e| io_error(path, e))
}
