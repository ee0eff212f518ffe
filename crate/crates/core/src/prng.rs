//! Seed-to-stream pipeline.
//!
//! A 64-bit seed fixes the pendulum constants and starting angles; the
//! pendulum is then stepped and each output is read off the state as a
//! 10-digit number.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fixnum::{Fix32, Layer};
use crate::pendulum::{self, PendulumError, PendulumParams, PendulumState, StepReport};

/// Sensor seed. Fields from most to least significant: magnetic field,
/// microphone, light, temperature/humidity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Seed64(pub u64);

impl Seed64 {
    pub const fn from_fields(mag: u16, mic: u16, light: u16, temp_hum: u16) -> Self {
        Seed64((mag as u64) << 48 | (mic as u64) << 32 | (light as u64) << 16 | temp_hum as u64)
    }

    pub const fn mag(self) -> u16 {
        (self.0 >> 48) as u16
    }

    pub const fn mic(self) -> u16 {
        (self.0 >> 32) as u16
    }

    pub const fn light(self) -> u16 {
        (self.0 >> 16) as u16
    }

    pub const fn temp_hum(self) -> u16 {
        self.0 as u16
    }
}

/// 16 upper-case hex digits.
impl fmt::Display for Seed64 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:016X}", self.0)
    }
}

impl FromStr for Seed64 {
    type Err = std::num::ParseIntError;

    /// Hex, optional `0x` prefix, at most 16 digits.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let t = t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")).unwrap_or(t);
        u64::from_str_radix(t, 16).map(Seed64)
    }
}

/// Seed used by the acceptance runs and as the CLI example.
pub const DEFAULT_SEED: Seed64 = Seed64(0x0123_4567_89AB_CDEF);

pub const OUTPUT_LIMIT: u64 = 10_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct OutputNumber(u64);

impl OutputNumber {
    pub fn new(value: u64) -> Option<Self> {
        (value < OUTPUT_LIMIT).then_some(OutputNumber(value))
    }

    pub const fn value(self) -> u64 {
        self.0
    }

    /// Digits from most significant (`d9`) to least (`d0`).
    pub fn digits(self) -> [u8; 10] {
        let mut out = [0u8; 10];
        let mut v = self.0;
        for d in out.iter_mut().rev() {
            *d = (v % 10) as u8;
            v /= 10;
        }
        out
    }
}

/// Always ten digits, zero padded.
impl fmt::Display for OutputNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:010}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReseedPolicy {
    /// Stop with an error at the first degenerate step.
    Halt,
    /// XOR the low 7 bits of the step counter into the fraction of omega1 and
    /// carry on.
    #[default]
    PerturbCounter,
}

impl FromStr for ReseedPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "halt" => Ok(ReseedPolicy::Halt),
            "perturb-counter" => Ok(ReseedPolicy::PerturbCounter),
            other => Err(format!("unknown reseed policy {other:?} (expected halt or perturb-counter)")),
        }
    }
}

impl fmt::Display for ReseedPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReseedPolicy::Halt => "halt",
            ReseedPolicy::PerturbCounter => "perturb-counter",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GeneratorConfig {
    pub layer: Layer,
    pub dt: Fix32,
    pub warmup_steps: u64,
    pub steps_per_output: u64,
    pub reseed_policy: ReseedPolicy,
}

pub const DEFAULT_DT: Fix32 = Fix32::from_raw(20);
pub const DEFAULT_WARMUP: u64 = 100;

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            layer: Layer::Hw,
            dt: DEFAULT_DT,
            warmup_steps: DEFAULT_WARMUP,
            steps_per_output: 1,
            reseed_policy: ReseedPolicy::PerturbCounter,
        }
    }
}

impl GeneratorConfig {
    pub fn validate(&self) -> Result<(), GenError> {
        let dt = self.dt.decode();
        if self.dt.is_negative() || !self.dt.is_normalized() || !(1..=50).contains(&dt) {
            return Err(GenError::Config(format!("dt {} outside [+0.01, +0.50]", self.dt)));
        }
        if self.steps_per_output == 0 {
            return Err(GenError::Config("steps_per_output must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("invalid generator config: {0}")]
    Config(String),
    #[error("degenerate denominator at step {step}")]
    Degenerate { step: u64, state: PendulumState },
    #[error("step {step}: {source}")]
    Step { step: u64, source: PendulumError },
}

impl GenError {
    pub fn step(&self) -> Option<u64> {
        match self {
            GenError::Config(_) => None,
            GenError::Degenerate { step, .. } | GenError::Step { step, .. } => Some(*step),
        }
    }
}

fn hundredths(v: u32) -> Fix32 {
    Fix32::from_hundredths(v as i64).expect("seed mapping stays in range")
}

/// Masses 1.00-9.99, lengths 0.50-1.99, g = 9.81, angles 0.00-6.27, at rest.
pub fn seed_to_initial(seed: Seed64) -> (PendulumParams, PendulumState) {
    let (mag, mic, light, th) = (seed.mag() as u32, seed.mic() as u32, seed.light() as u32, seed.temp_hum() as u32);
    let params = PendulumParams {
        m1: hundredths(100 + mag % 900),
        m2: hundredths(100 + mic % 900),
        l1: hundredths(50 + light % 150),
        l2: hundredths(50 + th % 150),
        g: hundredths(981),
    };
    let state = PendulumState {
        theta1: hundredths((mag ^ light) % 628),
        theta2: hundredths((mic ^ th) % 628),
        omega1: Fix32::ZERO,
        omega2: Fix32::ZERO,
    };
    (params, state)
}

/// Fractions of theta1, theta2, omega1, omega2 as digit pairs d9..d2, then
/// the sum of the four integer parts mod 100 as d1d0. Magnitudes are taken by
/// value, so a hardware fraction field of 100 reads as a carry.
pub fn extract(s: &PendulumState) -> OutputNumber {
    let mut value = 0u64;
    let mut int_sum = 0u64;
    for w in s.words() {
        let mag = w.decode().unsigned_abs();
        value = value * 100 + mag % 100;
        int_sum += mag / 100;
    }
    OutputNumber(value * 100 + int_sum % 100)
}

/// A logged reseed event.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReseedEvent {
    pub step: u64,
    pub mask: u32,
}

/// Sequential generator. Owns its state; one output per `next_output` call.
#[derive(Debug, Clone)]
pub struct Generator {
    cfg: GeneratorConfig,
    params: PendulumParams,
    state: PendulumState,
    steps: u64,
    warmed: bool,
    report: StepReport,
    events: Vec<ReseedEvent>,
}

impl Generator {
    pub fn new(seed: Seed64, cfg: GeneratorConfig) -> Result<Self, GenError> {
        cfg.validate()?;
        let (params, state) = seed_to_initial(seed);
        Ok(Generator { cfg, params, state, steps: 0, warmed: false, report: StepReport::default(), events: Vec::new() })
    }

    pub fn config(&self) -> &GeneratorConfig {
        &self.cfg
    }

    pub fn params(&self) -> &PendulumParams {
        &self.params
    }

    pub fn state(&self) -> &PendulumState {
        &self.state
    }

    /// Pendulum steps taken so far, warmup included.
    pub fn steps(&self) -> u64 {
        self.steps
    }

    /// Accumulated wrap and unassigned-branch counts.
    pub fn report(&self) -> StepReport {
        self.report
    }

    pub fn events(&self) -> &[ReseedEvent] {
        &self.events
    }

    fn advance(&mut self) -> Result<(), GenError> {
        let index = self.steps + 1;
        match pendulum::step(self.cfg.layer, &self.params, &self.state, self.cfg.dt) {
            Ok((next, report)) => {
                self.state = next;
                self.report.merge(report);
            }
            Err(PendulumError::DegenerateDenominator { state }) => match self.cfg.reseed_policy {
                ReseedPolicy::Halt => return Err(GenError::Degenerate { step: index, state }),
                ReseedPolicy::PerturbCounter => {
                    let mask = (index & 0x7F) as u32;
                    let w = self.state.omega1;
                    self.state.omega1 = Fix32::from_raw(w.raw() ^ mask);
                    log::warn!("degenerate denominator at step {index}; perturbing omega1 by {mask:#04x}");
                    self.events.push(ReseedEvent { step: index, mask });
                }
            },
            Err(source) => return Err(GenError::Step { step: index, source }),
        }
        self.steps = index;
        Ok(())
    }

    pub fn next_output(&mut self) -> Result<OutputNumber, GenError> {
        if !self.warmed {
            for _ in 0..self.cfg.warmup_steps {
                self.advance()?;
            }
            self.warmed = true;
        }
        for _ in 0..self.cfg.steps_per_output {
            self.advance()?;
        }
        Ok(extract(&self.state))
    }
}

impl Iterator for Generator {
    type Item = Result<OutputNumber, GenError>;

    fn next(&mut self) -> Option<Self::Item> {
        Some(self.next_output())
    }
}

pub fn generate(seed: Seed64, n: usize, cfg: GeneratorConfig) -> Result<Vec<OutputNumber>, GenError> {
    let mut g = Generator::new(seed, cfg)?;
    (0..n).map(|_| g.next_output()).collect()
}

/// Outputs together with the state each one was read from.
pub fn generate_with_states(
    seed: Seed64,
    n: usize,
    cfg: GeneratorConfig,
) -> Result<(Vec<OutputNumber>, Vec<PendulumState>), GenError> {
    let mut g = Generator::new(seed, cfg)?;
    let mut outs = Vec::with_capacity(n);
    let mut states = Vec::with_capacity(n);
    for _ in 0..n {
        outs.push(g.next_output()?);
        states.push(*g.state());
    }
    Ok((outs, states))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> Fix32 {
        s.parse().unwrap()
    }

    #[test]
    fn zero_seed() {
        let (p, s) = seed_to_initial(Seed64(0));
        assert_eq!((p.m1, p.m2), (f("1.00"), f("1.00")));
        assert_eq!((p.l1, p.l2), (f("0.50"), f("0.50")));
        assert_eq!(p.g, f("9.81"));
        assert_eq!(s, PendulumState::REST);
    }

    #[test]
    fn magnetic_field_only() {
        let (p, s) = seed_to_initial(Seed64::from_fields(900, 0, 0, 0));
        assert_eq!(p.m1, f("1.00"));
        assert_eq!(s.theta1, f("2.72"));
    }

    #[test]
    fn extraction_rule() {
        assert_eq!(extract(&PendulumState::REST).to_string(), "0000000000");
        let s = PendulumState { theta1: f("1.57"), theta2: f("0.33"), omega1: f("-2.08"), omega2: f("0.99") };
        assert_eq!(extract(&s).value(), 57_33_08_99_03);
        let t = PendulumState { theta1: f("1.58"), ..s };
        assert_eq!(extract(&t).digits()[2..], extract(&s).digits()[2..]);
        assert_ne!(extract(&t).digits()[..2], extract(&s).digits()[..2]);
    }

    #[test]
    fn extraction_folds_borrow_fraction() {
        let s = PendulumState { theta1: Fix32::from_fields(false, 1, 100), ..PendulumState::REST };
        assert_eq!(extract(&s).value(), 2);
    }

    #[test]
    fn seed_parse_and_views() {
        let s: Seed64 = "0123456789ABCDEF".parse().unwrap();
        assert_eq!(s, DEFAULT_SEED);
        assert_eq!((s.mag(), s.mic(), s.light(), s.temp_hum()), (0x0123, 0x4567, 0x89AB, 0xCDEF));
        assert_eq!(s.to_string(), "0123456789ABCDEF");
        assert!("0x1FFFFFFFFFFFFFFFF".parse::<Seed64>().is_err());
    }

    #[test]
    fn config_validation() {
        let mut cfg = GeneratorConfig::default();
        assert!(cfg.validate().is_ok());
        cfg.dt = Fix32::ZERO;
        assert!(cfg.validate().is_err());
        cfg.dt = f("0.51");
        assert!(cfg.validate().is_err());
        cfg = GeneratorConfig { steps_per_output: 0, ..Default::default() };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn rest_seed_stream_is_constant() {
        let out = generate(Seed64(0), 5, GeneratorConfig::default()).unwrap();
        assert!(out.iter().all(|o| o.value() == 0));
    }
}
