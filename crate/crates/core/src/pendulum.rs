//! Double-pendulum accelerations and a fixed-step integrator, evaluated
//! entirely in fixed-point arithmetic.
//!
//! Truncating arithmetic is not associative, so the expression trees below
//! are part of the contract: another implementation must nest the same
//! operations in the same order to get the same words.
//!
//! ```text
//! d   = theta1 - theta2
//! s12 = sin d    c12 = cos d    c2d = cos(2 * d)
//! den = (2*m1 + m2) - m2*c2d
//!
//! alpha1 = ( -(g*(2*m1 + m2)) * sin theta1
//!            - m2*(g*sin(theta1 - 2*theta2))
//!            - ((2*s12)*m2) * (omega2^2*L2 + (omega1^2*L1)*c12) ) / (L1*den)
//!
//! alpha2 = (2*s12) * ( (omega1^2*L1)*(m1 + m2)
//!                      + (g*(m1 + m2))*cos theta1
//!                      + (omega2^2*L2)*(m2*c12) ) / (L2*den)
//! ```

use std::fmt;
use std::io::{self, Write};

use thiserror::Error;

use crate::fixnum::{self, Fix32, FixError, Layer, SinBranch, CONSTANTS, MAX_HUNDREDTHS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PendulumParams {
    pub m1: Fix32,
    pub m2: Fix32,
    pub l1: Fix32,
    pub l2: Fix32,
    pub g: Fix32,
}

impl PendulumParams {
    /// Every parameter must be positive and within `[0.01, 99.99]`.
    pub fn new(m1: Fix32, m2: Fix32, l1: Fix32, l2: Fix32, g: Fix32) -> Result<Self, PendulumError> {
        for (name, v) in [("m1", m1), ("m2", m2), ("L1", l1), ("L2", l2), ("g", g)] {
            let h = v.decode();
            if v.is_negative() || !v.is_normalized() || !(1..=9999).contains(&h) {
                return Err(PendulumError::InvalidParam { name, value: v });
            }
        }
        Ok(PendulumParams { m1, m2, l1, l2, g })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct PendulumState {
    pub theta1: Fix32,
    pub theta2: Fix32,
    pub omega1: Fix32,
    pub omega2: Fix32,
}

impl PendulumState {
    pub const REST: PendulumState =
        PendulumState { theta1: Fix32::ZERO, theta2: Fix32::ZERO, omega1: Fix32::ZERO, omega2: Fix32::ZERO };

    /// The four raw words packed high-to-low, for exact cycle detection.
    pub fn key(&self) -> u128 {
        (self.theta1.raw() as u128) << 96
            | (self.theta2.raw() as u128) << 64
            | (self.omega1.raw() as u128) << 32
            | self.omega2.raw() as u128
    }

    pub fn words(&self) -> [Fix32; 4] {
        [self.theta1, self.theta2, self.omega1, self.omega2]
    }
}

impl fmt::Display for PendulumState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(theta1 {}, theta2 {}, omega1 {}, omega2 {})", self.theta1, self.theta2, self.omega1, self.omega2)
    }
}

/// Events observed while evaluating one step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct StepReport {
    /// Hardware-layer operations whose exact result did not fit the 8-bit
    /// integer field and therefore wrapped.
    pub wraps: u64,
    /// Hardware-layer sine evaluations where range reduction left the angle
    /// outside both branches.
    pub unassigned_trig: u64,
}

impl StepReport {
    pub fn merge(&mut self, other: StepReport) {
        self.wraps += other.wraps;
        self.unassigned_trig += other.unassigned_trig;
    }

    pub fn is_clean(&self) -> bool {
        self.wraps == 0 && self.unassigned_trig == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PendulumError {
    #[error("parameter {name} = {value} outside [0.01, 99.99]")]
    InvalidParam { name: &'static str, value: Fix32 },
    #[error("denominator truncated to zero at state {state}")]
    DegenerateDenominator { state: PendulumState },
    #[error("arithmetic error at state {state}: {source}")]
    Arithmetic { source: FixError, state: PendulumState },
}

/// Arithmetic in one layer, tallying wrap and unassigned-branch events.
struct Alu {
    layer: Layer,
    report: StepReport,
}

impl Alu {
    fn new(layer: Layer) -> Self {
        Alu { layer, report: StepReport::default() }
    }

    fn note_range(&mut self, exact: i64) {
        if exact.abs() > MAX_HUNDREDTHS {
            self.report.wraps += 1;
        }
    }

    fn plus(&mut self, a: Fix32, b: Fix32) -> Result<Fix32, FixError> {
        let r = fixnum::plus(self.layer, a, b)?;
        self.note_range(a.decode() + b.decode());
        Ok(r)
    }

    fn minus(&mut self, a: Fix32, b: Fix32) -> Result<Fix32, FixError> {
        self.plus(a, fixnum::neg(b))
    }

    fn times(&mut self, a: Fix32, b: Fix32) -> Result<Fix32, FixError> {
        let r = fixnum::times(self.layer, a, b)?;
        self.note_range(a.decode() * b.decode() / 100);
        Ok(r)
    }

    fn divide(&mut self, a: Fix32, b: Fix32) -> Result<Fix32, FixError> {
        let r = fixnum::divide(self.layer, a, b)?;
        if b.decode() != 0 {
            self.note_range(a.decode() * 100 / b.decode());
        }
        Ok(r)
    }

    fn trig(&mut self, eval: Result<fixnum::SinEval, FixError>) -> Result<Fix32, FixError> {
        let e = eval?;
        if e.branch == SinBranch::Unassigned {
            self.report.unassigned_trig += 1;
        }
        Ok(e.value)
    }

    fn sin(&mut self, theta: Fix32) -> Result<Fix32, FixError> {
        self.trig(fixnum::sin_eval(self.layer, theta))
    }

    fn cos(&mut self, theta: Fix32) -> Result<Fix32, FixError> {
        self.trig(fixnum::trig::cos_eval(self.layer, theta))
    }
}

struct Shared {
    s12: Fix32,
    c12: Fix32,
    /// `(2*m1 + m2) - m2*cos(2d)`
    den: Fix32,
    two_m1_m2: Fix32,
}

fn shared(alu: &mut Alu, p: &PendulumParams, s: &PendulumState) -> Result<Shared, FixError> {
    let two = CONSTANTS.const2;
    let d = alu.minus(s.theta1, s.theta2)?;
    let s12 = alu.sin(d)?;
    let c12 = alu.cos(d)?;
    let twice_d = alu.times(two, d)?;
    let c2d = alu.cos(twice_d)?;
    let two_m1 = alu.times(two, p.m1)?;
    let two_m1_m2 = alu.plus(two_m1, p.m2)?;
    let m2_c2d = alu.times(p.m2, c2d)?;
    let den = alu.minus(two_m1_m2, m2_c2d)?;
    Ok(Shared { s12, c12, den, two_m1_m2 })
}

fn alpha1_with(alu: &mut Alu, p: &PendulumParams, s: &PendulumState, sh: &Shared) -> Result<Fix32, FixError> {
    let two = CONSTANTS.const2;
    let denominator = alu.times(p.l1, sh.den)?;

    let g_mass = alu.times(p.g, sh.two_m1_m2)?;
    let sin_t1 = alu.sin(s.theta1)?;
    let gravity1 = fixnum::neg(alu.times(g_mass, sin_t1)?);

    let twice_t2 = alu.times(two, s.theta2)?;
    let skew = alu.minus(s.theta1, twice_t2)?;
    let sin_skew = alu.sin(skew)?;
    let g_sin_skew = alu.times(p.g, sin_skew)?;
    let gravity2 = alu.times(p.m2, g_sin_skew)?;

    let two_s12 = alu.times(two, sh.s12)?;
    let coupling = alu.times(two_s12, p.m2)?;
    let w2_sq = alu.times(s.omega2, s.omega2)?;
    let w2_term = alu.times(w2_sq, p.l2)?;
    let w1_sq = alu.times(s.omega1, s.omega1)?;
    let w1_l1 = alu.times(w1_sq, p.l1)?;
    let w1_term = alu.times(w1_l1, sh.c12)?;
    let bracket = alu.plus(w2_term, w1_term)?;
    let inertia = alu.times(coupling, bracket)?;

    let partial = alu.minus(gravity1, gravity2)?;
    let numerator = alu.minus(partial, inertia)?;
    alu.divide(numerator, denominator)
}

fn alpha2_with(alu: &mut Alu, p: &PendulumParams, s: &PendulumState, sh: &Shared) -> Result<Fix32, FixError> {
    let two = CONSTANTS.const2;
    let two_s12 = alu.times(two, sh.s12)?;

    let m12 = alu.plus(p.m1, p.m2)?;
    let w1_sq = alu.times(s.omega1, s.omega1)?;
    let w1_l1 = alu.times(w1_sq, p.l1)?;
    let first = alu.times(w1_l1, m12)?;

    let g_m12 = alu.times(p.g, m12)?;
    let cos_t1 = alu.cos(s.theta1)?;
    let second = alu.times(g_m12, cos_t1)?;

    let w2_sq = alu.times(s.omega2, s.omega2)?;
    let w2_l2 = alu.times(w2_sq, p.l2)?;
    let m2_c12 = alu.times(p.m2, sh.c12)?;
    let third = alu.times(w2_l2, m2_c12)?;

    let inner = alu.plus(first, second)?;
    let bracket = alu.plus(inner, third)?;
    let numerator = alu.times(two_s12, bracket)?;
    let denominator = alu.times(p.l2, sh.den)?;
    alu.divide(numerator, denominator)
}

fn lift(state: &PendulumState) -> impl Fn(FixError) -> PendulumError + '_ {
    move |e| match e {
        FixError::DivideByZero => PendulumError::DegenerateDenominator { state: *state },
        source => PendulumError::Arithmetic { source, state: *state },
    }
}

/// Angular acceleration of the first rod.
pub fn alpha1(layer: Layer, p: &PendulumParams, s: &PendulumState) -> Result<Fix32, PendulumError> {
    let mut alu = Alu::new(layer);
    let go = |alu: &mut Alu| {
        let sh = shared(alu, p, s)?;
        alpha1_with(alu, p, s, &sh)
    };
    go(&mut alu).map_err(lift(s))
}

/// Angular acceleration of the second rod.
pub fn alpha2(layer: Layer, p: &PendulumParams, s: &PendulumState) -> Result<Fix32, PendulumError> {
    let mut alu = Alu::new(layer);
    let go = |alu: &mut Alu| {
        let sh = shared(alu, p, s)?;
        alpha2_with(alu, p, s, &sh)
    };
    go(&mut alu).map_err(lift(s))
}

/// One semi-implicit Euler step: velocities first, then angles from the new
/// velocities.
pub fn step(
    layer: Layer,
    p: &PendulumParams,
    s: &PendulumState,
    dt: Fix32,
) -> Result<(PendulumState, StepReport), PendulumError> {
    let mut alu = Alu::new(layer);
    let go = |alu: &mut Alu| -> Result<PendulumState, FixError> {
        let sh = shared(alu, p, s)?;
        let a1 = alpha1_with(alu, p, s, &sh)?;
        let a2 = alpha2_with(alu, p, s, &sh)?;
        let dw1 = alu.times(a1, dt)?;
        let omega1 = alu.plus(s.omega1, dw1)?;
        let dw2 = alu.times(a2, dt)?;
        let omega2 = alu.plus(s.omega2, dw2)?;
        let dth1 = alu.times(omega1, dt)?;
        let theta1 = alu.plus(s.theta1, dth1)?;
        let dth2 = alu.times(omega2, dt)?;
        let theta2 = alu.plus(s.theta2, dth2)?;
        Ok(PendulumState { theta1, theta2, omega1, omega2 })
    };
    let next = go(&mut alu).map_err(lift(s))?;
    Ok((next, alu.report))
}

pub const TRAJECTORY_HEADER: &str = "step,theta1,theta2,omega1,omega2";

/// Writes `steps + 1` rows (the initial state is row 0). Stops at the first
/// error after flushing the rows produced so far.
pub fn write_trajectory<W: Write>(
    out: &mut W,
    layer: Layer,
    p: &PendulumParams,
    initial: PendulumState,
    dt: Fix32,
    steps: u64,
) -> Result<StepReport, TrajectoryError> {
    writeln!(out, "{TRAJECTORY_HEADER}")?;
    let mut s = initial;
    let mut total = StepReport::default();
    for i in 0..=steps {
        writeln!(out, "{i},{},{},{},{}", s.theta1, s.theta2, s.omega1, s.omega2)?;
        if i == steps {
            break;
        }
        match step(layer, p, &s, dt) {
            Ok((next, report)) => {
                total.merge(report);
                s = next;
            }
            Err(e) => {
                out.flush()?;
                return Err(TrajectoryError::Step { step: i + 1, source: e });
            }
        }
    }
    out.flush()?;
    Ok(total)
}

#[derive(Debug, Error)]
pub enum TrajectoryError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("step {step}: {source}")]
    Step { step: u64, source: PendulumError },
}
