use kout::harness::{
    read_csv_from, run_experiment, run_replicate, summarize, write_csv, write_csv_to, write_json, Collect, CsvRow,
    ExperimentConfig, ReplicateRecord, CSV_COLUMNS,
};
use kout::stats::standard_normal_cdf;
use kout::{Error, ModelConstants};
use rand::SeedableRng;
use rand_distr::{Distribution, StandardNormal};

fn template(n: usize) -> ReplicateRecord {
    let mut r = run_replicate(&ExperimentConfig::new(50, 2, 1, 1), 0).unwrap();
    r.n = n;
    r
}

#[test]
fn replicate_is_reproducible() {
    let config = ExperimentConfig::new(3, 2, 1, 99);
    let mut a = run_replicate(&config, 0).unwrap();
    let mut b = run_replicate(&config, 0).unwrap();
    a.ms_elapsed = 0.0;
    b.ms_elapsed = 0.0;
    assert_eq!(a, b);
}

#[test]
fn degenerate_records() {
    let c = ModelConstants::derive(2).unwrap();
    let n = 10_000;
    let mut r = template(n);
    r.q_size = 8000;
    r.g_size = 7990;
    let s = summarize(&vec![r; 10], &c).unwrap();
    assert_eq!(s.q_standardized.variance, 0.0);
    let z = (8000.0 - c.nu * n as f64) / (c.sigma2 * n as f64).sqrt();
    assert!((s.q_standardized.mean - z).abs() < 1e-12);
    let cdf = standard_normal_cdf(z);
    assert!((s.q_standardized.ks - cdf.max(1.0 - cdf)).abs() < 1e-12);
}

#[test]
fn normal_self_test() {
    let c = ModelConstants::derive(2).unwrap();
    let n = 100_000_000usize;
    let (center, scale) = (c.nu * n as f64, (c.sigma2 * n as f64).sqrt());
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    let base = template(n);
    let records: Vec<ReplicateRecord> = (0..1000)
        .map(|_| {
            let z: f64 = StandardNormal.sample(&mut rng);
            let mut r = base.clone();
            r.q_size = (center + scale * z).round() as usize;
            r.g_size = r.q_size;
            r.max_full_spec = Some(r.q_size as u32);
            r
        })
        .collect();
    let s = summarize(&records, &c).unwrap();
    assert!(s.q_standardized.ks < 0.06, "{}", s.q_standardized.ks);
    assert!(s.q_standardized.mean.abs() < 0.1);
    assert!((s.q_standardized.variance - 1.0).abs() < 0.1);
}

#[test]
fn summary_matches_small_clt_run() {
    let c = ModelConstants::derive(2).unwrap();
    let records = run_experiment(&ExperimentConfig::new(20_000, 2, 200, 3).with_collect(Collect::Core)).unwrap();
    let s = summarize(&records, &c).unwrap();
    assert!(s.q_standardized.mean.abs() < 0.3);
    assert!((0.7..1.3).contains(&s.q_standardized.variance));
    assert!(s.cycles.is_none() && s.extremes.is_none());
    assert!(s.all_reach_fraction > 0.95);
}

#[test]
fn summary_rejects_mixed_records() {
    let c = ModelConstants::derive(2).unwrap();
    let a = template(100);
    let b = template(200);
    assert!(summarize(&[a.clone(), b], &c).is_err());
    assert!(summarize(&[a.clone(), a], &ModelConstants::derive(3).unwrap()).is_err());
}

#[test]
fn csv_examples() {
    let mut buf = Vec::new();
    write_csv_to(&[], &mut buf).unwrap();
    assert_eq!(String::from_utf8(buf).unwrap(), format!("{}\n", CSV_COLUMNS.join(",")));

    let records = run_experiment(&ExperimentConfig::new(100, 2, 1, 4)).unwrap();
    let mut buf = Vec::new();
    write_csv_to(&records, &mut buf).unwrap();
    let text = String::from_utf8(buf.clone()).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert_eq!(read_csv_from(buf.as_slice()).unwrap(), vec![CsvRow::from(&records[0])]);
}

#[test]
fn core_only_csv_has_empty_cells() {
    let records = run_experiment(&ExperimentConfig::new(100, 2, 2, 4).with_collect(Collect::Core)).unwrap();
    let mut buf = Vec::new();
    write_csv_to(&records, &mut buf).unwrap();
    let line = String::from_utf8(buf).unwrap().lines().nth(1).unwrap().to_string();
    let cells: Vec<&str> = line.split(',').collect();
    assert_eq!(cells.len(), CSV_COLUMNS.len());
    let col = |name: &str| CSV_COLUMNS.iter().position(|c| *c == name).unwrap();
    assert_eq!(cells[col("cycles_total")], "");
    assert_eq!(cells[col("m")], "");
    assert_ne!(cells[col("q_size")], "");
}

#[test]
fn files_and_io_errors() {
    let dir = tempfile::tempdir().unwrap();
    let records = run_experiment(&ExperimentConfig::new(100, 2, 3, 4)).unwrap();
    let csv_path = dir.path().join("out.csv");
    write_csv(&records, &csv_path).unwrap();
    let rows = read_csv_from(std::fs::File::open(&csv_path).unwrap()).unwrap();
    assert_eq!(rows.len(), 3);
    let json_path = dir.path().join("out.json");
    write_json(&records, &json_path).unwrap();
    let back: Vec<ReplicateRecord> = serde_json::from_slice(&std::fs::read(&json_path).unwrap()).unwrap();
    assert_eq!(back, records);

    let missing = dir.path().join("no/such/dir/out.csv");
    let err = write_csv(&records, &missing).unwrap_err();
    assert!(err.is_io(), "{err}");
    assert!(matches!(err, Error::Io { ref path, .. } if *path == missing));
}

#[test]
fn thread_counts_do_not_change_results() {
    let base = ExperimentConfig::new(500, 2, 24, 8);
    let strip = |mut rs: Vec<ReplicateRecord>| {
        rs.iter_mut().for_each(|r| r.ms_elapsed = 0.0);
        rs
    };
    let one = strip(run_experiment(&base.clone().with_threads(1)).unwrap());
    let many = strip(run_experiment(&base.with_threads(8)).unwrap());
    assert_eq!(one, many);
    assert!(one.iter().enumerate().all(|(i, r)| r.replicate == i as u64));
}

#[test]
fn invalid_configs() {
    assert!(run_experiment(&ExperimentConfig::new(10, 2, 0, 1)).is_err());
    assert!(run_experiment(&ExperimentConfig::new(0, 2, 1, 1)).is_err());
}
