use std::fs::File;
use std::io::{self, BufWriter, Write};

use super::manifest::{now_unix, sidecar, RunManifest};
use super::{resolve_layer, usage, CliError, Format, GenArgs};
use crate::prng::{GenError, Generator, GeneratorConfig, Seed64, DEFAULT_DT, DEFAULT_WARMUP};
use crate::sensorio::{os_entropy_seed, pack_seed64, read_seed_file, read_sensor_log};

struct Plan {
    seed: Seed64,
    seed_source: String,
    cfg: GeneratorConfig,
    n: u64,
    format: Format,
}

fn plan(a: &GenArgs) -> Result<Plan, CliError> {
    let s = &a.seed;
    if let Some(path) = &s.manifest {
        let m = RunManifest::read(path)?;
        let seed = m.seed64().map_err(usage)?;
        let cfg = m.config().map_err(usage)?;
        return Ok(Plan { seed, seed_source: format!("manifest:{}", path.display()), cfg, n: m.n, format: m.format });
    }
    let (seed, seed_source) = if let Some(seed) = s.seed_hex {
        (seed, "seed-hex".to_string())
    } else if let Some(path) = &s.seed_file {
        let seed = read_seed_file(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        (seed, format!("seed-file:{}", path.display()))
    } else if let Some(path) = &s.sensor_log {
        let recs = read_sensor_log(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        let first = recs.first().ok_or_else(|| usage(format!("{}: no records", path.display())))?;
        (pack_seed64(first), format!("sensor-log:{}", path.display()))
    } else if s.os_entropy {
        let rec = os_entropy_seed().map_err(|e| CliError::Runtime(e.to_string()))?;
        (pack_seed64(&rec), "os-entropy".to_string())
    } else {
        return Err(usage("no seed source given"));
    };
    let c = &a.config;
    let cfg = GeneratorConfig {
        layer: resolve_layer(c.layer)?,
        dt: c.dt.unwrap_or(DEFAULT_DT),
        warmup_steps: c.warmup.unwrap_or(DEFAULT_WARMUP),
        steps_per_output: c.steps_per_output.unwrap_or(1),
        reseed_policy: c.reseed.unwrap_or_default(),
    };
    cfg.validate().map_err(|e| usage(e.to_string()))?;
    let n = a.count.ok_or_else(|| usage("-n is required"))?;
    if n == 0 {
        return Err(usage("-n must be at least 1"));
    }
    Ok(Plan { seed, seed_source, cfg, n, format: a.format.unwrap_or_default() })
}

fn runtime(e: GenError) -> CliError {
    match e {
        GenError::Config(m) => usage(m),
        GenError::Degenerate { step, state } => CliError::Runtime(format!(
            "degenerate denominator at step {step} {state}; rerun with --reseed perturb-counter to continue past it"
        )),
        other => CliError::Runtime(other.to_string()),
    }
}

fn write_stream<W: Write>(out: &mut W, g: &mut Generator, n: u64, format: Format) -> Result<(), CliError> {
    if format == Format::Csv {
        writeln!(out, "index,value")?;
    }
    for i in 0..n {
        let v = g.next_output().map_err(runtime)?;
        match format {
            Format::Text => writeln!(out, "{v}")?,
            Format::Csv => writeln!(out, "{i},{v}")?,
        }
    }
    out.flush()?;
    Ok(())
}

pub(crate) fn run(a: GenArgs) -> Result<(), CliError> {
    let p = plan(&a)?;
    let started = now_unix();
    let mut g = Generator::new(p.seed, p.cfg).map_err(runtime)?;
    let result = match &a.out {
        Some(path) => {
            let file = File::create(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            write_stream(&mut BufWriter::new(file), &mut g, p.n, p.format)
        }
        None => write_stream(&mut BufWriter::new(io::stdout().lock()), &mut g, p.n, p.format),
    };
    let report = g.report();
    let manifest = RunManifest {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        seed: p.seed.to_string(),
        seed_source: p.seed_source,
        layer: p.cfg.layer,
        dt: p.cfg.dt.to_string(),
        warmup: p.cfg.warmup_steps,
        steps_per_output: p.cfg.steps_per_output,
        reseed_policy: p.cfg.reseed_policy,
        n: p.n,
        format: p.format,
        started_unix: started,
        finished_unix: now_unix(),
        reseed_events: g.events().len() as u64,
        wraps: report.wraps,
        unassigned_trig: report.unassigned_trig,
    };
    let target = a.manifest_out.clone().or_else(|| a.out.as_deref().map(sidecar));
    match target {
        Some(path) => {
            std::fs::write(&path, manifest.to_json() + "\n").map_err(|e| usage(format!("{}: {e}", path.display())))?
        }
        None => eprintln!("{}", serde_json::to_string(&manifest).expect("plain struct serializes")),
    }
    result
}
