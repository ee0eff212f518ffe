//! Exhaustive hardware-vs-reference differential sweep.
//!
//! Operands range over both signs, integer parts `0..=max_int` and every
//! normalized fraction. A row is emitted for every pair where both layers
//! produce a word and the two words decode to different values. Pairs where
//! either layer errors (reference overflow, zero divisor) are counted but
//! not listed.

use std::fmt;
use std::io::{self, Write};

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use super::{hw, reference, Fix32, FixError};

pub const CENSUS_HEADER: &str = "op,a_raw_hex,b_raw_hex,hw_raw_hex,ref_raw_hex";
pub const DEFAULT_MAX_INT: u8 = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Op {
    Plus,
    Minus,
    Times,
    Divide,
}

impl Op {
    pub const ALL: [Op; 4] = [Op::Plus, Op::Minus, Op::Times, Op::Divide];

    pub fn name(self) -> &'static str {
        match self {
            Op::Plus => "plus",
            Op::Minus => "minus",
            Op::Times => "times",
            Op::Divide => "divide",
        }
    }

    pub fn parse(s: &str) -> Option<Op> {
        Op::ALL.into_iter().find(|op| op.name() == s)
    }

    pub fn hw(self, a: Fix32, b: Fix32) -> Result<Fix32, FixError> {
        match self {
            Op::Plus => Ok(hw::plus(a, b)),
            Op::Minus => Ok(hw::minus(a, b)),
            Op::Times => Ok(hw::times(a, b)),
            Op::Divide => hw::divide(a, b),
        }
    }

    pub fn reference(self, a: Fix32, b: Fix32) -> Result<Fix32, FixError> {
        match self {
            Op::Plus => reference::plus(a, b),
            Op::Minus => reference::minus(a, b),
            Op::Times => reference::times(a, b),
            Op::Divide => reference::divide(a, b),
        }
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Known anomaly families of the hardware listing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// Mixed-sign addition with equal integer parts and a smaller fraction on
    /// the side whose integer "wins" the comparison (cases 4'b0101, 4'b1001).
    EqualIntegerMixedSign,
    /// Subtract-with-borrow that leaves 100 in the fraction field.
    FractionBorrow,
    Unclassified,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Row {
    pub op: Op,
    pub a: Fix32,
    pub b: Fix32,
    pub hw: Fix32,
    pub reference: Fix32,
}

impl Row {
    pub fn family(&self) -> Family {
        let b = match self.op {
            Op::Plus => self.b,
            Op::Minus => super::neg(self.b),
            Op::Times | Op::Divide => return self.borrow_or_unclassified(),
        };
        let mixed = self.a.is_negative() != b.is_negative();
        if mixed && self.a.int_part() == b.int_part() && self.a.frac_part() < b.frac_part() {
            Family::EqualIntegerMixedSign
        } else {
            self.borrow_or_unclassified()
        }
    }

    fn borrow_or_unclassified(&self) -> Family {
        if self.hw.frac_part() == 100 {
            Family::FractionBorrow
        } else {
            Family::Unclassified
        }
    }
}

impl fmt::Display for Row {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{:08x},{:08x},{:08x},{:08x}",
            self.op,
            self.a.raw(),
            self.b.raw(),
            self.hw.raw(),
            self.reference.raw()
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OpTally {
    pub pairs: u64,
    pub divergent: u64,
    /// Pairs outside the comparison domain (either layer errored).
    pub skipped: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Census {
    pub rows: Vec<Row>,
    pub tallies: Vec<(Op, OpTally)>,
}

impl Census {
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{CENSUS_HEADER}")?;
        for row in &self.rows {
            writeln!(out, "{row}")?;
        }
        out.flush()
    }

    /// SHA-256 of the exact CSV bytes `write_csv` produces.
    pub fn sha256_hex(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(CENSUS_HEADER.as_bytes());
        hasher.update(b"\n");
        let mut line = String::with_capacity(48);
        for row in &self.rows {
            line.clear();
            use std::fmt::Write as _;
            let _ = writeln!(line, "{row}");
            hasher.update(line.as_bytes());
        }
        hasher.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn unclassified(&self) -> impl Iterator<Item = &Row> {
        self.rows.iter().filter(|r| r.family() == Family::Unclassified)
    }
}

/// Sweep operands in a fixed order: sign `+` then `-`, integer ascending,
/// fraction ascending.
pub fn operands(max_int: u8) -> Vec<Fix32> {
    let mut v = Vec::with_capacity(2 * (max_int as usize + 1) * 100);
    for negative in [false, true] {
        for int in 0..=max_int {
            for frac in 0..100 {
                v.push(Fix32::from_fields(negative, int, frac));
            }
        }
    }
    v
}

pub fn run(max_int: u8) -> Census {
    run_ops(&Op::ALL, max_int)
}

pub fn run_ops(ops: &[Op], max_int: u8) -> Census {
    let values = operands(max_int);
    let mut rows = Vec::new();
    let mut tallies = Vec::new();
    for &op in ops {
        let per_a: Vec<(Vec<Row>, OpTally)> = values
            .par_iter()
            .map(|&a| {
                let mut rows = Vec::new();
                let mut tally = OpTally::default();
                for &b in &values {
                    tally.pairs += 1;
                    match (op.hw(a, b), op.reference(a, b)) {
                        (Ok(h), Ok(r)) => {
                            if h.decode() != r.decode() {
                                tally.divergent += 1;
                                rows.push(Row { op, a, b, hw: h, reference: r });
                            }
                        }
                        _ => tally.skipped += 1,
                    }
                }
                (rows, tally)
            })
            .collect();
        let mut total = OpTally::default();
        for (r, t) in per_a {
            rows.extend(r);
            total.pairs += t.pairs;
            total.divergent += t.divergent;
            total.skipped += t.skipped;
        }
        tallies.push((op, total));
    }
    Census { rows, tallies }
}

/// First line where `committed` and the regenerated census disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub line: usize,
    pub expected: Option<String>,
    pub found: Option<String>,
}

pub fn compare_csv<R: io::BufRead>(census: &Census, committed: R) -> io::Result<Option<Mismatch>> {
    let mut regenerated = std::iter::once(CENSUS_HEADER.to_string()).chain(census.rows.iter().map(Row::to_string));
    let mut lines = committed.lines();
    let mut n = 0;
    loop {
        n += 1;
        let found = lines.next().transpose()?;
        let expected = regenerated.next();
        if found.is_none() && expected.is_none() {
            return Ok(None);
        }
        if found != expected {
            return Ok(Some(Mismatch { line: n, expected, found }));
        }
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Rows sharing an op and the sign and integer part of the first operand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub op: Op,
    pub negative: bool,
    pub int_part: u8,
    pub rows: u64,
    pub sha256: String,
}

impl Block {
    pub fn describe(&self) -> String {
        let sign = if self.negative { '-' } else { '+' };
        format!("{} with a in {sign}{}.00..{sign}{}.99", self.op, self.int_part, self.int_part)
    }
}

/// Compact committed form of a census: the digest of the full CSV, per-op
/// tallies and a digest per block so a mismatch can be localized without the
/// CSV itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusDigest {
    pub max_int: u8,
    pub rows: u64,
    pub sha256: String,
    pub tallies: Vec<(Op, OpTally)>,
    pub blocks: Vec<Block>,
}

impl CensusDigest {
    pub fn of(census: &Census, max_int: u8) -> CensusDigest {
        let mut blocks: Vec<Block> = Vec::new();
        let mut hasher: Option<Sha256> = None;
        let mut line = String::with_capacity(48);
        let close = |blocks: &mut Vec<Block>, hasher: &mut Option<Sha256>| {
            if let (Some(b), Some(h)) = (blocks.last_mut(), hasher.take()) {
                b.sha256 = hex(&h.finalize());
            }
        };
        for row in &census.rows {
            let key = (row.op, row.a.is_negative(), row.a.int_part());
            let same = blocks.last().is_some_and(|b| (b.op, b.negative, b.int_part) == key);
            if !same {
                close(&mut blocks, &mut hasher);
                blocks.push(Block { op: key.0, negative: key.1, int_part: key.2, rows: 0, sha256: String::new() });
                hasher = Some(Sha256::new());
            }
            line.clear();
            use std::fmt::Write as _;
            let _ = writeln!(line, "{row}");
            if let (Some(b), Some(h)) = (blocks.last_mut(), hasher.as_mut()) {
                b.rows += 1;
                h.update(line.as_bytes());
            }
        }
        close(&mut blocks, &mut hasher);
        CensusDigest {
            max_int,
            rows: census.rows.len() as u64,
            sha256: census.sha256_hex(),
            tallies: census.tallies.clone(),
            blocks,
        }
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        s.push_str("# hardware-vs-reference quirk census, regenerate with `chaospend census --digest`\n");
        s.push_str(&format!("max_int {}\n", self.max_int));
        s.push_str(&format!("csv {} {}\n", self.rows, self.sha256));
        for (op, t) in &self.tallies {
            s.push_str(&format!("op {op} {} {} {}\n", t.pairs, t.divergent, t.skipped));
        }
        for b in &self.blocks {
            let sign = if b.negative { '-' } else { '+' };
            s.push_str(&format!("block {} {sign} {} {} {}\n", b.op, b.int_part, b.rows, b.sha256));
        }
        s
    }

    pub fn parse(text: &str) -> Result<CensusDigest, String> {
        let mut max_int = None;
        let mut csv = None;
        let mut tallies = Vec::new();
        let mut blocks = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = || format!("line {}: cannot parse {line:?}", i + 1);
            let f: Vec<&str> = line.split_whitespace().collect();
            let num = |s: &str| s.parse::<u64>().map_err(|_| bad());
            match f.as_slice() {
                ["max_int", v] => max_int = Some(v.parse::<u8>().map_err(|_| bad())?),
                ["csv", n, h] => csv = Some((num(n)?, h.to_string())),
                ["op", op, p, d, s] => {
                    let op = Op::parse(op).ok_or_else(bad)?;
                    tallies.push((op, OpTally { pairs: num(p)?, divergent: num(d)?, skipped: num(s)? }));
                }
                ["block", op, sign, int, n, h] => blocks.push(Block {
                    op: Op::parse(op).ok_or_else(bad)?,
                    negative: match *sign {
                        "+" => false,
                        "-" => true,
                        _ => return Err(bad()),
                    },
                    int_part: int.parse().map_err(|_| bad())?,
                    rows: num(n)?,
                    sha256: h.to_string(),
                }),
                _ => return Err(bad()),
            }
        }
        let (rows, sha256) = csv.ok_or("missing csv line")?;
        Ok(CensusDigest { max_int: max_int.ok_or("missing max_int line")?, rows, sha256, tallies, blocks })
    }

    /// First difference against `committed`, described for a human.
    pub fn first_difference(&self, committed: &CensusDigest) -> Option<String> {
        if self.max_int != committed.max_int {
            return Some(format!("sweep range differs: max_int {} vs {}", self.max_int, committed.max_int));
        }
        for (ours, theirs) in self.tallies.iter().zip(&committed.tallies) {
            if ours != theirs {
                return Some(format!("{} tallies differ: regenerated {:?}, committed {:?}", ours.0, ours.1, theirs.1));
            }
        }
        let n = self.blocks.len().max(committed.blocks.len());
        for i in 0..n {
            match (self.blocks.get(i), committed.blocks.get(i)) {
                (Some(a), Some(b)) if a == b => continue,
                (Some(a), _) => return Some(format!("divergent rows differ for {}", a.describe())),
                (None, Some(b)) => return Some(format!("committed rows missing for {}", b.describe())),
                (None, None) => unreachable!(),
            }
        }
        if self.tallies.len() != committed.tallies.len() {
            return Some("op list differs".into());
        }
        if (self.rows, &self.sha256) != (committed.rows, &committed.sha256) {
            return Some(format!("csv digest differs: {} vs {}", self.sha256, committed.sha256));
        }
        None
    }
}
