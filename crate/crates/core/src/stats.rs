//! Randomness evidence for an output stream: histogram, exact cycle
//! detection, per-digit chi-square, lag correlation and series export.
//!
//! Every statistic is a fold over integer tallies, so a stream can be cut
//! into shards, folded in parallel and merged with results identical to a
//! single pass. The `*_sharded` variants do exactly that.

use std::collections::HashMap;
use std::io::{self, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::prng::OUTPUT_LIMIT;

pub const DEFAULT_BUCKETS: usize = 100;

/// Critical value of chi-square with 9 degrees of freedom at the 99.9th
/// percentile.
pub const CHI2_9DF_999: f64 = 27.88;

#[derive(Debug, Error)]
pub enum StatsError {
    #[error("empty stream")]
    Empty,
    #[error("need at least {need} values, got {got}")]
    TooShort { need: usize, got: usize },
    #[error("bucket count must be at least 2")]
    Buckets,
    #[error("value {0} is not below 10^10")]
    OutOfRange(u64),
    #[error("correlation undefined for a constant stream")]
    Degenerate,
    #[error("lag must be at least 1")]
    Lag,
    #[error("requested {requested} rows from a stream of {available}")]
    SeriesLength { requested: usize, available: usize },
    #[error("stream too long for exact correlation sums")]
    SumOverflow,
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Histogram {
    pub counts: Vec<u64>,
    pub total: u64,
}

impl Histogram {
    pub fn empty(bucket_count: usize) -> Result<Self, StatsError> {
        if bucket_count < 2 {
            return Err(StatsError::Buckets);
        }
        Ok(Histogram { counts: vec![0; bucket_count], total: 0 })
    }

    pub fn bucket_count(&self) -> usize {
        self.counts.len()
    }

    /// Equal-width buckets over `[0, 10^10)`.
    pub fn bucket_of(&self, value: u64) -> usize {
        (value as u128 * self.counts.len() as u128 / OUTPUT_LIMIT as u128) as usize
    }

    /// `[low, high)` of a bucket, floored to integers.
    pub fn bounds(&self, bucket: usize) -> (u64, u64) {
        let n = self.counts.len() as u128;
        let lo = bucket as u128 * OUTPUT_LIMIT as u128 / n;
        let hi = (bucket as u128 + 1) * OUTPUT_LIMIT as u128 / n;
        (lo as u64, hi as u64)
    }

    pub fn add(&mut self, value: u64) -> Result<(), StatsError> {
        if value >= OUTPUT_LIMIT {
            return Err(StatsError::OutOfRange(value));
        }
        let b = self.bucket_of(value);
        self.counts[b] += 1;
        self.total += 1;
        Ok(())
    }

    pub fn merge(&mut self, other: &Histogram) {
        assert_eq!(self.counts.len(), other.counts.len(), "bucket counts differ");
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.total += other.total;
    }

    pub fn empty_buckets(&self) -> usize {
        self.counts.iter().filter(|&&c| c == 0).count()
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "bucket_low,bucket_high,count")?;
        for (i, c) in self.counts.iter().enumerate() {
            let (lo, hi) = self.bounds(i);
            writeln!(out, "{lo},{hi},{c}")?;
        }
        out.flush()
    }
}

pub fn histogram(stream: &[u64], bucket_count: usize) -> Result<Histogram, StatsError> {
    histogram_sharded(stream, bucket_count, 1)
}

pub fn histogram_sharded(stream: &[u64], bucket_count: usize, shards: usize) -> Result<Histogram, StatsError> {
    let mut h = Histogram::empty(bucket_count)?;
    if stream.is_empty() {
        return Err(StatsError::Empty);
    }
    let parts: Vec<Result<Histogram, StatsError>> = stream
        .par_chunks(shard_len(stream.len(), shards))
        .map(|chunk| {
            let mut local = Histogram::empty(bucket_count)?;
            for &v in chunk {
                local.add(v)?;
            }
            Ok(local)
        })
        .collect();
    for p in parts {
        h.merge(&p?);
    }
    Ok(h)
}

fn shard_len(len: usize, shards: usize) -> usize {
    len.div_ceil(shards.max(1)).max(1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CycleReport {
    pub steps: u64,
    pub found: bool,
    pub start: Option<u64>,
    pub length: Option<u64>,
}

impl CycleReport {
    /// Single-line record `{"steps":..,"found":..,"start":..,"length":..}`.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain struct serializes")
    }
}

/// Scans up to `max_steps` states and stops at the first state seen before.
/// `start` is the index of its first occurrence and `length` the distance to
/// the repeat.
pub fn detect_cycle<I>(states: I, max_steps: u64) -> CycleReport
where
    I: IntoIterator<Item = u128>,
{
    let mut seen: HashMap<u128, u64> = HashMap::new();
    let mut steps = 0;
    for (i, key) in states.into_iter().take(max_steps as usize).enumerate() {
        let i = i as u64;
        steps = i + 1;
        if let Some(&first) = seen.get(&key) {
            return CycleReport { steps, found: true, start: Some(first), length: Some(i - first) };
        }
        seen.insert(key, i);
    }
    CycleReport { steps, found: false, start: None, length: None }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DigitChiSquare {
    pub samples: u64,
    /// Digit tallies per position, index 0 being the most significant digit.
    pub counts: Vec<[u64; 10]>,
    pub per_position: Vec<f64>,
    pub pooled: f64,
}

impl DigitChiSquare {
    pub fn max_position(&self) -> f64 {
        self.per_position.iter().copied().fold(0.0, f64::max)
    }
}

/// Chi-square of `counts` against a uniform distribution over 10 cells,
/// computed as `(10 * sum(o^2) - n^2) / n` from exact integers.
fn chi_square(counts: &[u64; 10]) -> f64 {
    let n: u128 = counts.iter().map(|&c| c as u128).sum();
    if n == 0 {
        return 0.0;
    }
    let sq: u128 = counts.iter().map(|&c| c as u128 * c as u128).sum();
    (10 * sq - n * n) as f64 / n as f64
}

pub const MIN_CHI_SAMPLES: usize = 1000;

pub fn digit_chi_square(stream: &[u64]) -> Result<DigitChiSquare, StatsError> {
    digit_chi_square_sharded(stream, 1)
}

pub fn digit_chi_square_sharded(stream: &[u64], shards: usize) -> Result<DigitChiSquare, StatsError> {
    if stream.len() < MIN_CHI_SAMPLES {
        return Err(StatsError::TooShort { need: MIN_CHI_SAMPLES, got: stream.len() });
    }
    let parts: Vec<Result<[[u64; 10]; 10], StatsError>> = stream
        .par_chunks(shard_len(stream.len(), shards))
        .map(|chunk| {
            let mut t = [[0u64; 10]; 10];
            for &v in chunk {
                if v >= OUTPUT_LIMIT {
                    return Err(StatsError::OutOfRange(v));
                }
                let mut x = v;
                for pos in (0..10).rev() {
                    t[pos][(x % 10) as usize] += 1;
                    x /= 10;
                }
            }
            Ok(t)
        })
        .collect();
    let mut counts = vec![[0u64; 10]; 10];
    for p in parts {
        let p = p?;
        for (acc, part) in counts.iter_mut().zip(p.iter()) {
            for (a, b) in acc.iter_mut().zip(part) {
                *a += b;
            }
        }
    }
    let mut pooled_counts = [0u64; 10];
    for c in &counts {
        for (p, v) in pooled_counts.iter_mut().zip(c) {
            *p += v;
        }
    }
    Ok(DigitChiSquare {
        samples: stream.len() as u64,
        per_position: counts.iter().map(chi_square).collect(),
        pooled: chi_square(&pooled_counts),
        counts,
    })
}

#[derive(Debug, Clone, Copy, Default)]
struct LagSums {
    n: i128,
    sx: i128,
    sy: i128,
    sxx: i128,
    syy: i128,
    sxy: i128,
}

impl LagSums {
    fn merge(self, o: LagSums) -> LagSums {
        LagSums {
            n: self.n + o.n,
            sx: self.sx + o.sx,
            sy: self.sy + o.sy,
            sxx: self.sxx + o.sxx,
            syy: self.syy + o.syy,
            sxy: self.sxy + o.sxy,
        }
    }
}

/// Pearson correlation between `x[i]` and `x[i + lag]`. Values are on the
/// `[0, 1)` scale (divided by 10^10); the coefficient is scale invariant so
/// the sums are kept as exact integers on the raw values.
pub fn lag_correlation(stream: &[u64], lag: usize) -> Result<f64, StatsError> {
    lag_correlation_sharded(stream, lag, 1)
}

pub fn lag_correlation_sharded(stream: &[u64], lag: usize, shards: usize) -> Result<f64, StatsError> {
    if lag == 0 {
        return Err(StatsError::Lag);
    }
    if stream.len() <= lag {
        return Err(StatsError::TooShort { need: lag + 1, got: stream.len() });
    }
    let pairs = stream.len() - lag;
    let idx: Vec<usize> = (0..pairs).collect();
    let sums = idx
        .par_chunks(shard_len(pairs, shards))
        .map(|chunk| {
            let mut s = LagSums::default();
            for &i in chunk {
                let (x, y) = (stream[i] as i128, stream[i + lag] as i128);
                s.n += 1;
                s.sx += x;
                s.sy += y;
                s.sxx += x * x;
                s.syy += y * y;
                s.sxy += x * y;
            }
            s
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(LagSums::default(), LagSums::merge);

    let ovf = || StatsError::SumOverflow;
    let cov = sums.n.checked_mul(sums.sxy).ok_or_else(ovf)? - sums.sx * sums.sy;
    let vx = sums.n.checked_mul(sums.sxx).ok_or_else(ovf)? - sums.sx * sums.sx;
    let vy = sums.n.checked_mul(sums.syy).ok_or_else(ovf)? - sums.sy * sums.sy;
    if vx == 0 || vy == 0 {
        return Err(StatsError::Degenerate);
    }
    Ok(cov as f64 / ((vx as f64).sqrt() * (vy as f64).sqrt()))
}

/// CSV `index,value` for the first `first_n` values.
pub fn write_series<W: Write>(out: &mut W, stream: &[u64], first_n: usize) -> Result<(), StatsError> {
    if first_n > stream.len() {
        return Err(StatsError::SeriesLength { requested: first_n, available: stream.len() });
    }
    writeln!(out, "index,value")?;
    for (i, v) in stream[..first_n].iter().enumerate() {
        writeln!(out, "{i},{v:010}")?;
    }
    out.flush()?;
    Ok(())
}

pub fn export_series(stream: &[u64], path: &Path, first_n: usize) -> Result<(), StatsError> {
    let mut w = io::BufWriter::new(std::fs::File::create(path)?);
    write_series(&mut w, stream, first_n)
}
