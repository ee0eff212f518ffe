//! Built-in verification: golden words, the reference layer against the
//! exact oracle, the committed quirk census and the sine/cosine grid.
//!
//! Each check reports the first failing case so a red run is actionable.

use std::io::BufRead;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fixnum::census::{self, CensusDigest, Op};
use crate::fixnum::{self, trig, Fix32, FixError, Layer, MAX_HUNDREDTHS};
use crate::refcalc::{r_add, r_div_trunc, r_mul_trunc, r_sin, ExactHundredths};

/// The committed census digest for the default sweep.
pub const COMMITTED_CENSUS: &str = include_str!("../data/quirk_census.digest");
/// Same, for the reduced sweep used by `--quick`.
pub const COMMITTED_CENSUS_QUICK: &str = include_str!("../data/quirk_census_quick.digest");
pub const QUICK_CENSUS_MAX_INT: u8 = 8;

pub const QUICK_PAIRS: u64 = 10_000;
pub const FULL_PAIRS: u64 = 1_000_000;
pub const TRIG_TOLERANCE: f64 = 0.05;

const ORACLE_SEED: u64 = 0x5EED_0F0E_AC1E;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl CheckOutcome {
    fn timed(name: &'static str, f: impl FnOnce() -> Result<String, String>) -> CheckOutcome {
        let t = Instant::now();
        let r = f();
        let seconds = t.elapsed().as_secs_f64();
        match r {
            Ok(detail) => CheckOutcome { name, passed: true, detail, seconds },
            Err(detail) => CheckOutcome { name, passed: false, detail, seconds },
        }
    }
}

fn fx(s: &str) -> Fix32 {
    s.parse().expect("literal")
}

/// Bit-map and worked-example words in both layers.
pub fn golden_vectors() -> Result<String, String> {
    let mut checked = 0;
    let mut expect = |what: String, got: Fix32, want: Fix32| {
        checked += 1;
        if got.raw() == want.raw() {
            Ok(())
        } else {
            Err(format!("{what}: got {got} ({:#010x}), want {want} ({:#010x})", got.raw(), want.raw()))
        }
    };
    let w = Fix32::encode(false, 33, 73).map_err(|e| e.to_string())?;
    expect("encode(0,33,73)".into(), w, Fix32::from_raw((33 << 23) | 73))?;
    if w.decode() != 3373 {
        return Err(format!("decode(+33.73) = {}", w.decode()));
    }
    let b = Fix32::encode(true, 21, 84).map_err(|e| e.to_string())?;
    expect("encode(1,21,84)".into(), b, Fix32::from_raw(0x8000_0000 | (21 << 23) | 84))?;
    for layer in [Layer::Hw, Layer::Ref] {
        let plus = fixnum::plus(layer, fx("+33.73"), fx("-21.84")).map_err(|e| e.to_string())?;
        expect(format!("{layer} plus(+33.73, -21.84)"), plus, fx("+11.89"))?;
        let minus = fixnum::minus(layer, fx("+33.73"), fx("+21.84")).map_err(|e| e.to_string())?;
        expect(format!("{layer} minus(+33.73, +21.84)"), minus, fx("+11.89"))?;
        let times = fixnum::times(layer, fx("+13.73"), fx("-7.84")).map_err(|e| e.to_string())?;
        expect(format!("{layer} times(+13.73, -7.84)"), times, fx("-107.64"))?;
    }
    Ok(format!("{checked} words exact"))
}

fn random_operand(rng: &mut ChaCha8Rng) -> Fix32 {
    let negative = rng.gen::<bool>();
    let int = rng.gen_range(0..=255u32);
    let frac = rng.gen_range(0..=99u32);
    Fix32::encode(negative, int, frac).expect("in range")
}

fn exact(a: Fix32) -> ExactHundredths {
    ExactHundredths::new(a.decode())
}

/// Expected reference-layer outcome, in hundredths, from the oracle.
fn oracle(op: Op, a: Fix32, b: Fix32) -> Result<i64, FixError> {
    let r = match op {
        Op::Plus => r_add(&exact(a), &exact(b)),
        Op::Minus => r_add(&exact(a), &-exact(b)),
        Op::Times => r_mul_trunc(&exact(a), &exact(b)),
        Op::Divide => r_div_trunc(&exact(a), &exact(b)).map_err(|_| FixError::DivideByZero)?,
    };
    let v = r.to_i64().ok_or(FixError::Overflow { hundredths: i64::MAX })?;
    if v.abs() > MAX_HUNDREDTHS {
        return Err(FixError::Overflow { hundredths: v });
    }
    Ok(v)
}

fn agrees(got: &Result<Fix32, FixError>, want: &Result<i64, FixError>) -> bool {
    match (got, want) {
        (Ok(g), Ok(w)) => g.is_normalized() && g.decode() == *w,
        (Err(FixError::Overflow { .. }), Err(FixError::Overflow { .. })) => true,
        (Err(FixError::DivideByZero), Err(FixError::DivideByZero)) => true,
        _ => false,
    }
}

/// Second operand for `op`. Products are steered towards the representable
/// range so most draws exercise exact values rather than overflow.
fn second_operand(rng: &mut ChaCha8Rng, op: Op, a: Fix32) -> Fix32 {
    if op != Op::Times || a.decode() == 0 {
        return random_operand(rng);
    }
    let bound = (MAX_HUNDREDTHS * 100 / a.decode().abs()).min(MAX_HUNDREDTHS);
    let magnitude = rng.gen_range(0..=(2 * bound).min(MAX_HUNDREDTHS));
    let v = Fix32::from_hundredths(magnitude).expect("in range");
    if rng.gen::<bool>() {
        fixnum::neg(v)
    } else {
        v
    }
}

/// Reference layer against the oracle until `pairs` in-range pairs per op
/// have matched exactly; overflowing draws along the way must signal. Also
/// checks zero-divisor signalling in both layers.
pub fn oracle_equivalence(pairs: u64) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(ORACLE_SEED);
    let mut overflow = 0u64;
    for op in Op::ALL {
        let mut exact_matches = 0u64;
        while exact_matches < pairs {
            let a = random_operand(&mut rng);
            let b = second_operand(&mut rng, op, a);
            let got = op.reference(a, b);
            let want = oracle(op, a, b);
            if !agrees(&got, &want) {
                return Err(format!("ref {op}({a}, {b}): got {got:?}, oracle {want:?}"));
            }
            match want {
                Ok(_) => exact_matches += 1,
                Err(_) => overflow += 1,
            }
        }
    }
    for _ in 0..pairs.min(10_000) {
        let a = random_operand(&mut rng);
        for layer in [Layer::Hw, Layer::Ref] {
            for zero in [Fix32::ZERO, Fix32::NEG_ZERO] {
                if fixnum::divide(layer, a, zero) != Err(FixError::DivideByZero) {
                    return Err(format!("{layer} divide({a}, {zero}) did not signal"));
                }
            }
        }
    }
    Ok(format!("{pairs} in-range pairs per op exact, {overflow} overflow draws signalled"))
}

/// Regenerates a census and compares it with the committed digest and, when
/// given, a full census CSV. A CSV always implies the full sweep.
pub fn census_check(quick: bool, full_csv: Option<&mut dyn BufRead>) -> Result<String, String> {
    let text = if quick && full_csv.is_none() { COMMITTED_CENSUS_QUICK } else { COMMITTED_CENSUS };
    let committed = CensusDigest::parse(text).map_err(|e| format!("committed digest: {e}"))?;
    let census = census::run(committed.max_int);
    let ours = CensusDigest::of(&census, committed.max_int);
    if let Some(diff) = ours.first_difference(&committed) {
        return Err(diff);
    }
    if let Some(r) = census.unclassified().next() {
        return Err(format!("row outside the known families: {r}"));
    }
    if let Some(reader) = full_csv {
        match census::compare_csv(&census, reader).map_err(|e| e.to_string())? {
            None => {}
            Some(m) => return Err(describe_mismatch(&m)),
        }
    }
    Ok(format!("max_int {}: {} divergent rows, digest {}", ours.max_int, ours.rows, &ours.sha256[..16]))
}

fn describe_mismatch(m: &census::Mismatch) -> String {
    let row = m.expected.as_deref().or(m.found.as_deref()).unwrap_or("");
    let mut parts = row.split(',');
    match (parts.next(), parts.next(), parts.next()) {
        (Some(op), Some(a), Some(b)) if Op::parse(op).is_some() => {
            let word = |h: &str| u32::from_str_radix(h, 16).map(|w| Fix32::from_raw(w).to_string()).unwrap_or(h.into());
            format!(
                "census line {}: {op}({}, {}) expected {:?}, file has {:?}",
                m.line,
                word(a),
                word(b),
                m.expected,
                m.found
            )
        }
        _ => format!("census line {}: expected {:?}, file has {:?}", m.line, m.expected, m.found),
    }
}

/// Reference sine and cosine on 0.00..=6.28 against the true functions, and
/// the two exact quarter-turn values.
pub fn trig_grid() -> Result<String, String> {
    let mut worst = 0.0f64;
    for h in 0..=628i64 {
        let theta = Fix32::from_hundredths(h).expect("grid in range");
        let s = trig::sin(Layer::Ref, theta).map_err(|e| format!("sin({theta}): {e}"))?;
        let c = trig::cos(Layer::Ref, theta).map_err(|e| format!("cos({theta}): {e}"))?;
        let es = (s.decode() as f64 / 100.0 - r_sin(h)).abs();
        let ec = (c.decode() as f64 / 100.0 - true_cos(h)).abs();
        worst = worst.max(es).max(ec);
        if es > TRIG_TOLERANCE {
            return Err(format!("sin({theta}) = {s}, error {es:.4}"));
        }
        if ec > TRIG_TOLERANCE {
            return Err(format!("cos({theta}) = {c}, error {ec:.4}"));
        }
    }
    for (theta, want) in [("+1.57", "+1.00"), ("+4.71", "-1.00")] {
        let got = trig::sin(Layer::Ref, fx(theta)).map_err(|e| e.to_string())?;
        if got != fx(want) {
            return Err(format!("sin({theta}) = {got}, want {want}"));
        }
    }
    Ok(format!("629 grid points, worst error {worst:.4}"))
}

fn true_cos(h: i64) -> f64 {
    (h as f64 / 100.0).cos()
}

pub fn run_all(quick: bool, full_csv: Option<&mut dyn BufRead>) -> Vec<CheckOutcome> {
    let pairs = if quick { QUICK_PAIRS } else { FULL_PAIRS };
    vec![
        CheckOutcome::timed("golden vectors", golden_vectors),
        CheckOutcome::timed("oracle equivalence", || oracle_equivalence(pairs)),
        CheckOutcome::timed("quirk census", || census_check(quick, full_csv)),
        CheckOutcome::timed("trig grid", trig_grid),
    ]
}
