use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use kout::constants::{solve_tau, ModelConstants, DEFAULT_TOL};
use kout::decompose::Decomposition;
use kout::digraph::{KOutDigraph, RngSpec, DEFAULT_ATTEMPT_CAP};
use kout::distance::{phase_sweep, typical_distance};
use kout::harness::{self, Collect, ExperimentConfig};
use kout::oracle;
use kout::outside::{OutsideConfig, OutsideReport};
use kout::surjection::{sample_surjection, DEFAULT_RETRY_CAP};
use kout::Error;

#[derive(Parser)]
#[command(name = "kout", version, about = "Random k-out digraphs: sampling, decomposition and limit-law experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the model constants for out-degree k.
    Constants {
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
    /// Sample a digraph and write it as JSON or binary.
    Generate {
        #[command(flatten)]
        source: Sample,
        /// Sample uniformly among simple digraphs instead.
        #[arg(long)]
        simple: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = GraphFormat::Json)]
        format: GraphFormat,
    },
    /// Decompose a digraph and report layer sizes and outside statistics.
    Analyze {
        #[command(flatten)]
        source: Sample,
        /// Read the digraph from a JSON or binary file instead of sampling it.
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Distances between uniformly drawn vertex pairs.
    Distance {
        #[command(flatten)]
        source: Sample,
        #[arg(long)]
        pairs: usize,
        #[arg(long)]
        json: bool,
    },
    /// Strong connectivity and in-degree-zero frequencies across k.
    Phase {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        kmin: usize,
        #[arg(long)]
        kmax: usize,
        #[arg(long)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Emit CSV instead of JSON.
        #[arg(long)]
        csv: bool,
    },
    /// Sample uniform surjections [km] -> [m].
    Surjection {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        count: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_RETRY_CAP)]
        retry_cap: u64,
        #[arg(long)]
        json: bool,
    },
    /// Exact small-case computations.
    Oracle {
        #[command(subcommand)]
        command: OracleCommand,
    },
    /// Run independent replicates and write one record per replicate.
    Montecarlo {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        reps: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = RecordFormat::Csv)]
        format: RecordFormat,
        #[arg(long, value_enum, default_value_t = CollectArg::All)]
        collect: CollectArg,
        /// Also write the aggregated summary as JSON.
        #[arg(long)]
        summary: Option<PathBuf>,
        /// Worker threads (defaults to KOUT_THREADS, then the number of CPUs).
        #[arg(long)]
        threads: Option<usize>,
    },
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Tally statistics over every endpoint table on n vertices.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        json: bool,
    },
    /// Exact Stirling number of the second kind S{x, y}.
    Stirling {
        #[arg(long)]
        x: usize,
        #[arg(long)]
        y: usize,
    },
    /// Galton-Watson extinction probability against its upper bound.
    Gw {
        #[arg(long)]
        mu: f64,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
    },
}

#[derive(Args)]
struct Sample {
    #[arg(long, default_value_t = 0)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    stream: u64,
}

impl Sample {
    fn spec(&self) -> RngSpec {
        RngSpec::new(self.seed, self.stream)
    }

    fn generate(&self) -> Result<KOutDigraph, Error> {
        KOutDigraph::generate(self.n, self.k, self.spec())
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    Json,
    Bin,
}

#[derive(Clone, Copy, ValueEnum)]
enum RecordFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum CollectArg {
    All,
    Core,
    Cycles,
    Distances,
}

impl From<CollectArg> for Collect {
    fn from(c: CollectArg) -> Self {
        match c {
            CollectArg::All => Collect::All,
            CollectArg::Core => Collect::Core,
            CollectArg::Cycles => Collect::Cycles,
            CollectArg::Distances => Collect::Distances,
        }
    }
}

fn read_file(path: &Path) -> Result<Vec<u8>, Error> {
    fs::read(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

fn write_output(out: Option<&Path>, bytes: &[u8]) -> Result<(), Error> {
    match out {
        Some(path) => fs::write(path, bytes).map_err(|source| Error::Io { path: path.to_path_buf(), source }),
        None => stdout_bytes(bytes),
    }
}

fn stdout_bytes(bytes: &[u8]) -> Result<(), Error> {
    let mut stdout = io::stdout().lock();
    match stdout.write_all(bytes).and_then(|()| stdout.flush()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => {
            Err(Error::Io { path: PathBuf::from("<stdout>"), source: e })
        }
        _ => Ok(()),
    }
}

fn print_json(value: &serde_json::Value) -> Result<(), Error> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    stdout_bytes(text.as_bytes())
}

fn print_pairs(value: &serde_json::Value) -> Result<(), Error> {
    let mut text = String::new();
    if let Some(map) = value.as_object() {
        for (key, v) in map {
            text.push_str(&format!("{key} = {v}\n"));
        }
    }
    stdout_bytes(text.as_bytes())
}

fn emit(value: serde_json::Value, as_json: bool) -> Result<(), Error> {
    if as_json {
        print_json(&value)
    } else {
        print_pairs(&value)
    }
}

fn analyze(g: &KOutDigraph) -> Result<serde_json::Value, Error> {
    let dec = Decomposition::new(g);
    dec.check(g)?;
    let report = OutsideReport::new(g, &dec, &OutsideConfig::default())?;
    report.check()?;
    if report.eye_violations != 0 {
        return Err(Error::Invariant(format!("{} cycle vertices with malformed spectra", report.eye_violations)));
    }
    let layers = dec.layers();
    Ok(json!({
        "n": g.n(),
        "k": g.k(),
        "giant": layers.giant,
        "one_in_core": layers.one_in_core,
        "middle": layers.middle,
        "outer": layers.outer,
        "all_reach_giant": layers.all_reach_giant,
        "strongly_connected": dec.scc.count() == 1,
        "scc_count": dec.scc.count(),
        "closed_sccs": dec.closed_count(),
        "self_loops": g.count_self_loops(),
        "multi_pairs": g.count_multi_pairs(),
        "simple": g.is_simple(),
        "total_cycles": report.total_cycles,
        "cycles_by_length": report.cycles_by_length,
        "vertex_disjoint_cycles": report.vertex_disjoint,
        "longest_cycle": report.longest_cycle,
        "max_spectrum_out": report.max_spectrum,
        "arc_excess_violations": report.arc_excess_violations,
        "max_distance_to_giant": report.w,
        "unreachable_from_giant": report.unreachable_from_giant,
        "max_eccentricity": report.d,
        "longest_path": report.m,
        "max_full_spectrum": report.max_full_spectrum,
        "spectrum_of_zero": report.spectrum_of_zero,
        "cycles": report.cycles,
    }))
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Constants { k, tol, json } => {
            solve_tau(k, tol)?;
            let c = ModelConstants::derive(k)?;
            emit(serde_json::to_value(c)?, json)
        }
        Command::Generate { source, simple, out, format } => {
            let g = if simple {
                KOutDigraph::generate_simple(source.n, source.k, source.spec(), DEFAULT_ATTEMPT_CAP)?.0
            } else {
                source.generate()?
            };
            let bytes = match format {
                GraphFormat::Json => {
                    let mut text = g.to_json();
                    text.push('\n');
                    text.into_bytes()
                }
                GraphFormat::Bin => g.to_bytes(),
            };
            write_output(out.as_deref(), &bytes)
        }
        Command::Analyze { source, input, json } => {
            let g = match input {
                Some(path) => KOutDigraph::deserialize(&read_file(&path)?)?,
                None => source.generate()?,
            };
            emit(analyze(&g)?, json)
        }
        Command::Distance { source, pairs, json } => {
            let g = source.generate()?;
            let s = typical_distance(&g, pairs, RngSpec::new(source.seed, source.stream.wrapping_add(1)))?;
            emit(
                json!({
                    "n": g.n(),
                    "k": g.k(),
                    "pairs": s.pairs_drawn,
                    "finite": s.finite_count,
                    "finite_fraction": s.finite_fraction(),
                    "mean_finite": s.mean_finite(),
                    "mean_over_log_k_n": s.mean_finite().map(|m| m / (g.n() as f64).log(g.k() as f64)),
                }),
                json,
            )
        }
        Command::Phase { n, kmin, kmax, reps, seed, csv } => {
            let points = phase_sweep(n, kmin, kmax, reps, seed)?;
            if csv {
                let mut text = String::from("n,k,reps,frac_sc,frac_indeg0\n");
                for p in &points {
                    text.push_str(&format!(
                        "{},{},{},{},{}\n",
                        p.n, p.k, p.reps, p.fraction_strongly_connected, p.fraction_with_indeg_zero_vertex
                    ));
                }
                stdout_bytes(text.as_bytes())
            } else {
                print_json(&serde_json::to_value(points)?)
            }
        }
        Command::Surjection { m, k, count, seed, retry_cap, json } => {
            let samples = (0..count)
                .map(|i| sample_surjection(m, k, RngSpec::new(seed, i), retry_cap))
                .collect::<Result<Vec<_>, _>>()?;
            let retries: Vec<u64> = samples.iter().map(|s| s.retries).collect();
            let mean = retries.iter().sum::<u64>() as f64 / retries.len().max(1) as f64;
            let mappings: Vec<Vec<&[u32]>> = samples.iter().map(|s| (0..m).map(|v| s.row(v)).collect()).collect();
            let value = json!({
                "m": m,
                "k": k,
                "count": count,
                "retries": { "mean": mean, "min": retries.iter().min(), "max": retries.iter().max() },
                "mappings": mappings,
            });
            if json {
                print_json(&value)
            } else {
                let mut text = format!("m = {m}\nk = {k}\ncount = {count}\nmean retries = {mean}\n");
                for rows in &mappings {
                    text.push_str(&serde_json::to_string(rows)?);
                    text.push('\n');
                }
                stdout_bytes(text.as_bytes())
            }
        }
        Command::Oracle { command } => match command {
            OracleCommand::Enumerate { n, k, json } => emit(serde_json::to_value(oracle::tally(n, k)?)?, json),
            OracleCommand::Stirling { x, y } => stdout_bytes(format!("{}\n", oracle::stirling2(x, y)?).as_bytes()),
            OracleCommand::Gw { mu, k, m } => {
                let survival = oracle::gw_survival(mu, k, m)?;
                let floor = oracle::gw_bound_complement(mu, k, m)?;
                print_pairs(&json!({
                    "extinction": oracle::gw_extinction(mu, k, m)?,
                    "bound": oracle::gw_bound(mu, k, m)?,
                    "survival": survival,
                    "survival_lower_bound": floor,
                    "strict": survival > floor,
                }))
            }
        },
        Command::Montecarlo { n, k, reps, seed, out, format, collect, summary, threads } => {
            let mut config = ExperimentConfig::new(n, k, reps, seed).with_collect(collect.into());
            config.threads = threads;
            let records = harness::run_experiment(&config)?;
            let summary_report = if records.len() >= 2 && k >= 2 {
                Some(harness::summarize(&records, &ModelConstants::derive(k as u32)?)?)
            } else {
                None
            };
            if let Some(path) = &summary {
                harness::write_json(&summary_report, path)?;
            }
            match (format, out) {
                (RecordFormat::Csv, Some(path)) => harness::write_csv(&records, &path),
                (RecordFormat::Csv, None) => {
                    let mut buf = Vec::new();
                    harness::write_csv_to(&records, &mut buf)?;
                    stdout_bytes(&buf)
                }
                (RecordFormat::Json, out) => {
                    let value = json!({ "config": config, "records": records, "summary": summary_report });
                    match out {
                        Some(path) => harness::write_json(&value, &path),
                        None => print_json(&value),
                    }
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    if e.is_invariant_violation() {
        2
    } else if e.is_io() {
        3
    } else {
        1
    }
}
