use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};

use super::{resolve_layer, usage, CensusArgs, CliError, SelftestArgs, TraceArgs};
use crate::fixnum::census::{self, CensusDigest};
use crate::pendulum::{write_trajectory, TrajectoryError};
use crate::prng::{seed_to_initial, DEFAULT_DT};
use crate::selftest;
use crate::sensorio::read_seed_file;

pub(crate) fn selftest(a: SelftestArgs) -> Result<(), CliError> {
    let mut reader = match &a.census {
        Some(p) => Some(BufReader::new(File::open(p).map_err(|e| usage(format!("{}: {e}", p.display())))?)),
        None => None,
    };
    let outcomes = selftest::run_all(a.quick, reader.as_mut().map(|r| r as &mut dyn io::BufRead));
    let mut first_failure = None;
    for o in &outcomes {
        println!("{} {:<20} {:>7.2}s  {}", if o.passed { "PASS" } else { "FAIL" }, o.name, o.seconds, o.detail);
        if !o.passed && first_failure.is_none() {
            first_failure = Some(format!("{}: {}", o.name, o.detail));
        }
    }
    match first_failure {
        None => Ok(()),
        Some(f) => Err(CliError::Selftest(f)),
    }
}

pub(crate) fn census(a: CensusArgs) -> Result<(), CliError> {
    let c = census::run(a.max_int);
    if let Some(path) = &a.out {
        let f = File::create(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        c.write_csv(BufWriter::new(f))?;
    }
    let digest = CensusDigest::of(&c, a.max_int);
    match a.digest.as_deref() {
        Some(p) if p.as_os_str() == "-" => print!("{}", digest.render()),
        Some(p) => std::fs::write(p, digest.render()).map_err(|e| usage(format!("{}: {e}", p.display())))?,
        None => {}
    }
    for (op, t) in &c.tallies {
        eprintln!("{op:<7} pairs {:>9}  divergent {:>7}  skipped {:>8}", t.pairs, t.divergent, t.skipped);
    }
    eprintln!("rows {}  sha256 {}", digest.rows, digest.sha256);
    let unclassified = c.unclassified().count();
    if unclassified > 0 {
        eprintln!("{unclassified} rows outside the known anomaly families");
    }
    Ok(())
}

pub(crate) fn trace(a: TraceArgs) -> Result<(), CliError> {
    let seed = match (&a.seed.seed_hex, &a.seed.seed_file) {
        (Some(s), _) => *s,
        (None, Some(p)) => read_seed_file(p).map_err(|e| usage(format!("{}: {e}", p.display())))?,
        (None, None) => return Err(usage("no seed given")),
    };
    let layer = resolve_layer(a.layer)?;
    let dt = a.dt.unwrap_or(DEFAULT_DT);
    if dt.is_negative() || !(1..=50).contains(&dt.decode()) {
        return Err(usage(format!("dt {dt} outside [+0.01, +0.50]")));
    }
    let (params, initial) = seed_to_initial(seed);
    let result = match &a.out {
        Some(p) => {
            let f = File::create(p).map_err(|e| usage(format!("{}: {e}", p.display())))?;
            write_trajectory(&mut BufWriter::new(f), layer, &params, initial, dt, a.steps)
        }
        None => write_trajectory(&mut BufWriter::new(io::stdout().lock()), layer, &params, initial, dt, a.steps),
    };
    match result {
        Ok(report) => {
            if !report.is_clean() {
                eprintln!("{} integer wraps, {} unassigned sine branches", report.wraps, report.unassigned_trig);
            }
            io::stdout().flush()?;
            Ok(())
        }
        Err(TrajectoryError::Io(e)) => Err(e.into()),
        Err(e @ TrajectoryError::Step { .. }) => Err(CliError::Runtime(e.to_string())),
    }
}
