use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter};
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::manifest::{sidecar, RunManifest};
use super::{usage, AnalyzeArgs, CliError};
use crate::prng::{Generator, OUTPUT_LIMIT};
use crate::stats::{self, StatsError, CHI2_9DF_999};

/// Reads a stream in either `gen` format. Blank lines are not allowed.
pub(crate) fn read_stream(path: &Path) -> Result<Vec<u64>, CliError> {
    let file = File::open(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let mut values = Vec::new();
    let mut csv = false;
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| usage(format!("{}: {e}", path.display())))?;
        let bad = |why: &str| usage(format!("{}:{}: {why}: {line:?}", path.display(), i + 1));
        if i == 0 && line == "index,value" {
            csv = true;
            continue;
        }
        let field = if csv {
            let (index, value) = line.split_once(',').ok_or_else(|| bad("expected index,value"))?;
            if index.parse::<usize>().ok() != Some(values.len()) {
                return Err(bad("index out of sequence"));
            }
            value
        } else {
            line.as_str()
        };
        if field.is_empty() || !field.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad("not a decimal number"));
        }
        let v: u64 = field.parse().map_err(|_| bad("number too large"))?;
        if v >= OUTPUT_LIMIT {
            return Err(bad("value not below 10^10"));
        }
        values.push(v);
    }
    if values.is_empty() {
        return Err(usage(format!("{}: no values", path.display())));
    }
    Ok(values)
}

#[derive(Debug, Serialize)]
struct ChiReport {
    per_position: Vec<f64>,
    pooled: f64,
    max_position: f64,
    threshold: f64,
    pass: bool,
}

#[derive(Debug, Serialize)]
struct LagReport {
    lag: usize,
    r: Option<f64>,
    pass: Option<bool>,
    note: Option<String>,
}

#[derive(Debug, Serialize)]
struct Report {
    samples: u64,
    buckets: usize,
    empty_buckets: usize,
    chi_square: Option<ChiReport>,
    chi_square_note: Option<String>,
    lag_correlation: Vec<LagReport>,
}

const LAG_LIMIT: f64 = 0.01;

fn output_path(dir: &Path, input: &Path, suffix: &str) -> PathBuf {
    let mut name = input.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(suffix);
    dir.join(name)
}

fn stats_err(e: StatsError) -> CliError {
    match e {
        StatsError::Io(e) => usage(e.to_string()),
        other => usage(other.to_string()),
    }
}

fn analyze(a: &AnalyzeArgs) -> Result<(), CliError> {
    if a.shards == 0 {
        return Err(usage("--shards must be at least 1"));
    }
    let values = read_stream(&a.input)?;
    let dir = match &a.out_dir {
        Some(d) => {
            std::fs::create_dir_all(d)?;
            d.clone()
        }
        None => a.input.parent().map(Path::to_path_buf).unwrap_or_default(),
    };
    let dir = if dir.as_os_str().is_empty() { PathBuf::from(".") } else { dir };

    let hist = stats::histogram_sharded(&values, a.histogram, a.shards).map_err(stats_err)?;
    let hist_path = output_path(&dir, &a.input, ".histogram.csv");
    hist.write_csv(BufWriter::new(File::create(&hist_path)?))?;

    let (chi_square, chi_square_note) = match stats::digit_chi_square_sharded(&values, a.shards) {
        Ok(c) => {
            let max = c.max_position();
            let pass = max < CHI2_9DF_999;
            let report = ChiReport {
                per_position: c.per_position,
                pooled: c.pooled,
                max_position: max,
                threshold: CHI2_9DF_999,
                pass,
            };
            (Some(report), None)
        }
        Err(e @ StatsError::TooShort { .. }) => (None, Some(e.to_string())),
        Err(e) => return Err(stats_err(e)),
    };
    let mut lag_correlation = Vec::new();
    for &lag in &a.lags {
        let entry = match stats::lag_correlation_sharded(&values, lag, a.shards) {
            Ok(r) => LagReport { lag, r: Some(r), pass: Some(r.abs() < LAG_LIMIT), note: None },
            Err(e @ (StatsError::Degenerate | StatsError::TooShort { .. })) => {
                LagReport { lag, r: None, pass: None, note: Some(e.to_string()) }
            }
            Err(e) => return Err(stats_err(e)),
        };
        lag_correlation.push(entry);
    }
    let report = Report {
        samples: values.len() as u64,
        buckets: hist.bucket_count(),
        empty_buckets: hist.empty_buckets(),
        chi_square,
        chi_square_note,
        lag_correlation,
    };
    let report_path = output_path(&dir, &a.input, ".report.json");
    std::fs::write(&report_path, serde_json::to_string_pretty(&report).expect("serializable") + "\n")?;

    let series_path = output_path(&dir, &a.input, ".series.csv");
    stats::export_series(&values, &series_path, a.series_first.min(values.len())).map_err(stats_err)?;

    println!("samples        {}", report.samples);
    println!("histogram      {} buckets, {} empty -> {}", report.buckets, report.empty_buckets, hist_path.display());
    match &report.chi_square {
        Some(c) => println!(
            "digit chi2     max {:.3}, pooled {:.3}, threshold {} -> {}",
            c.max_position,
            c.pooled,
            c.threshold,
            if c.pass { "pass" } else { "FAIL" }
        ),
        None => println!("digit chi2     skipped: {}", report.chi_square_note.as_deref().unwrap_or("")),
    }
    for l in &report.lag_correlation {
        match l.r {
            Some(r) => {
                println!("lag {:<3}        r = {r:+.6} -> {}", l.lag, if r.abs() < LAG_LIMIT { "pass" } else { "FAIL" })
            }
            None => println!("lag {:<3}        skipped: {}", l.lag, l.note.as_deref().unwrap_or("")),
        }
    }
    println!("report         {}", report_path.display());
    println!("series         {}", series_path.display());

    if a.cycle {
        let manifest_path = a.manifest.clone().unwrap_or_else(|| sidecar(&a.input));
        if !manifest_path.exists() {
            return Err(usage(format!("--cycle needs a manifest; {} not found", manifest_path.display())));
        }
        let m = RunManifest::read(&manifest_path)?;
        let seed = m.seed64().map_err(usage)?;
        let cfg = m.config().map_err(usage)?;
        let max_steps = a.max_steps.unwrap_or(m.n);
        if max_steps == 0 {
            return Err(usage("--max-steps must be at least 1"));
        }
        let mut g = Generator::new(seed, cfg).map_err(|e| usage(e.to_string()))?;
        let mut keys = Vec::with_capacity(max_steps as usize);
        for _ in 0..max_steps {
            g.next_output().map_err(|e| CliError::Runtime(e.to_string()))?;
            keys.push(g.state().key());
        }
        let cycle = stats::detect_cycle(keys, max_steps);
        let cycle_path = output_path(&dir, &a.input, ".cycle.json");
        std::fs::write(&cycle_path, cycle.to_json() + "\n")?;
        println!("cycle          {} -> {}", cycle.to_json(), cycle_path.display());
    }
    Ok(())
}

pub(crate) fn run(a: AnalyzeArgs) -> Result<(), CliError> {
    match a.threads {
        Some(0) => Err(usage("--threads must be at least 1")),
        Some(t) => {
            let pool =
                rayon::ThreadPoolBuilder::new().num_threads(t).build().map_err(|e| CliError::Runtime(e.to_string()))?;
            pool.install(|| analyze(&a))
        }
        None => analyze(&a),
    }
}
