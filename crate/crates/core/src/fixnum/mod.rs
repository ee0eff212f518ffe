//! 32-bit sign-magnitude, base-100 fixed-point numbers.
//!
//! A word is laid out as
//!
//! ```text
//!  31 | 30 ........ 23 | 22 ................................ 0
//! sign|  integer 0-255 |  hundredths (0-99 when normalized)
//! ```
//!
//! Every arithmetic entry point takes a [`Layer`]:
//!
//! * [`Layer::Hw`] replays the original Verilog `Math` module statement for
//!   statement, including its register widths, wrap-around and the known
//!   anomalies in the mixed-sign `plus` branches.
//! * [`Layer::Ref`] implements exact two-decimal sign-magnitude arithmetic with
//!   truncation toward zero, and reports overflow instead of wrapping.
//!
//! Both layers share the trigonometric composition in [`trig`].

pub mod census;
pub mod hw;
pub mod reference;
pub mod trig;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use trig::{cos, sin, sin_eval, SinBranch, SinEval};

pub(crate) const SIGN_BIT: u32 = 1 << 31;
pub(crate) const INT_SHIFT: u32 = 23;
pub(crate) const FRAC_MASK: u32 = (1 << 23) - 1;

/// Largest magnitude (in hundredths) a word can hold with a normalized fraction.
pub const MAX_HUNDREDTHS: i64 = 255 * 100 + 99;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fix32(u32);

impl Fix32 {
    pub const ZERO: Fix32 = Fix32(0);
    pub const NEG_ZERO: Fix32 = Fix32(SIGN_BIT);

    pub const fn from_raw(raw: u32) -> Self {
        Fix32(raw)
    }

    pub const fn raw(self) -> u32 {
        self.0
    }

    /// Builds a word from its three fields.
    pub fn encode(negative: bool, int_part: u32, hundredths: u32) -> Result<Self, FixError> {
        if int_part > 255 || hundredths > 99 {
            return Err(FixError::FieldRange { int_part, hundredths });
        }
        Ok(Self::from_fields(negative, int_part as u8, hundredths))
    }

    /// Unchecked field assembly; the fraction is masked to 23 bits.
    pub(crate) const fn from_fields(negative: bool, int_part: u8, frac: u32) -> Self {
        let sign = if negative { SIGN_BIT } else { 0 };
        Fix32(sign | ((int_part as u32) << INT_SHIFT) | (frac & FRAC_MASK))
    }

    /// Exact conversion from signed hundredths. Zero maps to `+0.00`.
    pub fn from_hundredths(value: i64) -> Result<Self, FixError> {
        let mag = value.unsigned_abs();
        if mag > MAX_HUNDREDTHS as u64 {
            return Err(FixError::Overflow { hundredths: value });
        }
        Ok(Self::from_fields(value < 0, (mag / 100) as u8, (mag % 100) as u32))
    }

    pub const fn is_negative(self) -> bool {
        self.0 & SIGN_BIT != 0
    }

    pub const fn int_part(self) -> u8 {
        (self.0 >> INT_SHIFT) as u8
    }

    pub const fn frac_part(self) -> u32 {
        self.0 & FRAC_MASK
    }

    pub const fn is_normalized(self) -> bool {
        self.frac_part() <= 99
    }

    /// Signed value in hundredths, `int_part * 100 + frac_part` with the sign
    /// applied. Total over all words, including un-normalized fractions.
    pub const fn decode(self) -> i64 {
        let mag = self.int_part() as i64 * 100 + self.frac_part() as i64;
        if self.is_negative() {
            -mag
        } else {
            mag
        }
    }

    pub const fn is_zero(self) -> bool {
        self.0 & !SIGN_BIT == 0
    }

    pub(crate) const fn with_sign(self, negative: bool) -> Self {
        if negative {
            Fix32(self.0 | SIGN_BIT)
        } else {
            Fix32(self.0 & !SIGN_BIT)
        }
    }

    pub(crate) const fn with_frac(self, frac: u32) -> Self {
        Fix32((self.0 & !FRAC_MASK) | (frac & FRAC_MASK))
    }

    /// Rough float view, for reports and plots only.
    pub fn to_f64(self) -> f64 {
        self.decode() as f64 / 100.0
    }
}

/// Prints the value with an explicit sign and two decimals, e.g. `-21.84`.
/// Un-normalized fractions are folded into the integer part by value; the
/// sign always follows bit 31, so `-0.00` prints as such.
impl fmt::Display for Fix32 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mag = self.decode().unsigned_abs();
        let sign = if self.is_negative() { '-' } else { '+' };
        write!(f, "{sign}{}.{:02}", mag / 100, mag % 100)
    }
}

impl FromStr for Fix32 {
    type Err = FixError;

    /// Accepts `[+-]I[.F]` with at most two fraction digits.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || FixError::Parse(s.to_string());
        let t = s.trim();
        let (negative, body) = match t.as_bytes().first() {
            Some(b'-') => (true, &t[1..]),
            Some(b'+') => (false, &t[1..]),
            _ => (false, t),
        };
        let (int_s, frac_s) = body.split_once('.').unwrap_or((body, ""));
        if int_s.is_empty() || frac_s.len() > 2 {
            return Err(bad());
        }
        if !int_s.bytes().all(|c| c.is_ascii_digit()) || !frac_s.bytes().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let int_part: u32 = int_s.parse().map_err(|_| bad())?;
        let hundredths = match frac_s.len() {
            0 => 0,
            1 => frac_s.parse::<u32>().map_err(|_| bad())? * 10,
            _ => frac_s.parse::<u32>().map_err(|_| bad())?,
        };
        Fix32::encode(negative, int_part, hundredths)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Layer {
    /// Statement-for-statement replay of the hardware listing.
    #[default]
    Hw,
    /// Exact two-decimal semantics.
    Ref,
}

impl fmt::Display for Layer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Layer::Hw => "hw",
            Layer::Ref => "ref",
        })
    }
}

impl FromStr for Layer {
    type Err = FixError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "hw" => Ok(Layer::Hw),
            "ref" => Ok(Layer::Ref),
            _ => Err(FixError::Parse(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FixError {
    #[error("field out of range: integer {int_part} (max 255), hundredths {hundredths} (max 99)")]
    FieldRange { int_part: u32, hundredths: u32 },
    #[error("result {hundredths} hundredths does not fit the 8-bit integer field")]
    Overflow { hundredths: i64 },
    #[error("division by zero")]
    DivideByZero,
    #[error("sin range reduction left theta at {theta}, outside [0, 2pi]")]
    Unreduced { theta: Fix32 },
    #[error("cannot parse {0:?} as a fixed-point value or layer")]
    Parse(String),
}

/// The listing's module constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Constants {
    pub pi: Fix32,
    pub pi_2: Fix32,
    pub const16: Fix32,
    pub const5: Fix32,
    pub const4: Fix32,
    pub const2: Fix32,
    pub const1: Fix32,
}

pub const CONSTANTS: Constants = Constants {
    pi: Fix32::from_fields(false, 3, 14),
    pi_2: Fix32::from_fields(false, 6, 28),
    const16: Fix32::from_fields(false, 16, 0),
    const5: Fix32::from_fields(false, 5, 0),
    const4: Fix32::from_fields(false, 4, 0),
    const2: Fix32::from_fields(false, 2, 0),
    const1: Fix32::from_fields(false, 1, 0),
};

pub fn plus(layer: Layer, a: Fix32, b: Fix32) -> Result<Fix32, FixError> {
    match layer {
        Layer::Hw => Ok(hw::plus(a, b)),
        Layer::Ref => reference::plus(a, b),
    }
}

/// `plus(a, neg(b))` in either layer.
pub fn minus(layer: Layer, a: Fix32, b: Fix32) -> Result<Fix32, FixError> {
    plus(layer, a, neg(b))
}

pub fn times(layer: Layer, a: Fix32, b: Fix32) -> Result<Fix32, FixError> {
    match layer {
        Layer::Hw => Ok(hw::times(a, b)),
        Layer::Ref => reference::times(a, b),
    }
}

pub fn divide(layer: Layer, a: Fix32, b: Fix32) -> Result<Fix32, FixError> {
    match layer {
        Layer::Hw => hw::divide(a, b),
        Layer::Ref => reference::divide(a, b),
    }
}

/// Clears the sign bit. The listing calls this `mod`.
pub const fn abs(a: Fix32) -> Fix32 {
    a.with_sign(false)
}

pub const fn neg(a: Fix32) -> Fix32 {
    Fix32(a.0 ^ SIGN_BIT)
}

/// Operand flattening shared by both `divide` implementations: integer field
/// times 100 plus bits 7:0 of the fraction field.
pub(crate) const fn flatten(a: Fix32) -> u32 {
    a.int_part() as u32 * 100 + (a.0 & 0xFF)
}
