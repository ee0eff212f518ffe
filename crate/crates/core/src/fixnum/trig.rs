//! Sine and cosine composed from the layer's own arithmetic.
//!
//! The argument is first range-reduced into `[0, 2pi]` using
//! `store = divide(theta, pi_2)`, then evaluated with the rational
//! approximation `16x(pi - x) / (5pi^2 - 4x(pi - x))` on `[0, pi]` and its
//! mirror `-16(x - 2pi)(pi - x) / (5pi^2 - 4(x - 2pi)(pi - x))` on `(pi, 2pi]`.
//! Branch selection compares raw words as unsigned integers, so a reduced
//! angle with the sign bit set falls through both branches.
//!
//! Two places differ between layers:
//!
//! * On `[0, pi]` the listing forms the denominator with a plain 32-bit `-`
//!   of the two packed words rather than `Math.minus`. The hardware layer does
//!   the same; a borrow out of the fraction field then reaches `divide`, which
//!   only reads fraction bits 7:0. The reference layer uses `minus`.
//! * When neither branch is taken the hardware result register is never
//!   written. The hardware layer reports `+0.00` and marks the evaluation as
//!   [`SinBranch::Unassigned`]; the reference layer returns
//!   [`FixError::Unreduced`].

use super::{abs, divide, minus, neg, plus, times, Fix32, FixError, Layer, CONSTANTS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SinBranch {
    /// Reduced angle in `[0, pi]`.
    Rising,
    /// Reduced angle in `(pi, 2pi]`.
    Falling,
    /// Neither range check matched (hardware layer only).
    Unassigned,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SinEval {
    pub value: Fix32,
    /// Angle after range reduction.
    pub reduced: Fix32,
    pub branch: SinBranch,
}

pub fn sin(layer: Layer, theta: Fix32) -> Result<Fix32, FixError> {
    sin_eval(layer, theta).map(|e| e.value)
}

/// `sin(pi/2 - theta)`, composed as `sin(minus(divide(pi, 2), theta))`.
pub fn cos(layer: Layer, theta: Fix32) -> Result<Fix32, FixError> {
    cos_eval(layer, theta).map(|e| e.value)
}

pub fn cos_eval(layer: Layer, theta: Fix32) -> Result<SinEval, FixError> {
    let c = CONSTANTS;
    let half_pi = divide(layer, c.pi, c.const2)?;
    sin_eval(layer, minus(layer, half_pi, theta)?)
}

pub fn sin_eval(layer: Layer, theta: Fix32) -> Result<SinEval, FixError> {
    let c = CONSTANTS;
    let store = divide(layer, theta, c.pi_2)?;
    let theta = match (theta.is_negative(), store.int_part() >= 1) {
        (false, false) => theta,
        (false, true) => {
            let turns = store.with_sign(false).with_frac(0);
            minus(layer, theta, times(layer, turns, c.pi_2)?)?
        }
        (true, false) => minus(layer, c.pi_2, abs(theta))?,
        (true, true) => {
            let turns = store.with_sign(false).with_frac(0);
            let whole = times(layer, plus(layer, c.const1, turns)?, c.pi_2)?;
            plus(layer, theta, whole)?
        }
    };

    let raw = theta.raw();
    if raw <= c.pi.raw() {
        let num = times(layer, times(layer, c.const16, theta)?, minus(layer, c.pi, theta)?)?;
        let five_pi_sq = times(layer, times(layer, c.pi, c.pi)?, c.const5)?;
        let sub = times(layer, times(layer, c.const4, theta)?, minus(layer, c.pi, theta)?)?;
        let den = match layer {
            Layer::Hw => Fix32::from_raw(five_pi_sq.raw().wrapping_sub(sub.raw())),
            Layer::Ref => minus(layer, five_pi_sq, sub)?,
        };
        Ok(SinEval { value: divide(layer, num, den)?, reduced: theta, branch: SinBranch::Rising })
    } else if raw > c.pi.raw() && raw <= c.pi_2.raw() {
        let shifted = minus(layer, theta, c.pi_2)?;
        let num = times(layer, times(layer, neg(c.const16), shifted)?, minus(layer, c.pi, theta)?)?;
        let five_pi_sq = times(layer, times(layer, c.pi, c.pi)?, c.const5)?;
        let sub = times(layer, times(layer, c.const4, shifted)?, minus(layer, c.pi, theta)?)?;
        let den = minus(layer, five_pi_sq, sub)?;
        Ok(SinEval { value: divide(layer, num, den)?, reduced: theta, branch: SinBranch::Falling })
    } else {
        match layer {
            Layer::Hw => Ok(SinEval { value: Fix32::ZERO, reduced: theta, branch: SinBranch::Unassigned }),
            Layer::Ref => Err(FixError::Unreduced { theta }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> Fix32 {
        s.parse().unwrap()
    }

    #[test]
    fn reference_quarter_turns() {
        assert_eq!(sin(Layer::Ref, Fix32::ZERO).unwrap(), Fix32::ZERO);
        assert_eq!(sin(Layer::Ref, f("+1.57")).unwrap(), f("+1.00"));
        assert_eq!(sin(Layer::Ref, f("+4.71")).unwrap(), f("-1.00"));
        assert_eq!(sin(Layer::Ref, f("-1.57")).unwrap(), f("-1.00"));
        assert_eq!(cos(Layer::Ref, Fix32::ZERO).unwrap(), f("+1.00"));
        assert!(cos(Layer::Ref, f("+1.57")).unwrap().is_zero());
        assert_eq!(cos(Layer::Ref, f("+3.14")).unwrap(), f("-1.00"));
    }

    #[test]
    fn hardware_raw_subtraction_in_rising_branch() {
        // 5pi^2 = 49.25 and 4x(pi-x) = 9.85 at x = 1.57. The packed-word
        // subtraction borrows out of the fraction field: int 39, frac 2^23-60,
        // whose low byte is 196. divide reads 39*100 + 196 = 4096, and
        // 3943 / 4096 truncates to 0.96.
        assert_eq!(sin(Layer::Hw, f("+1.57")).unwrap(), f("+0.96"));
        assert_eq!(cos(Layer::Hw, Fix32::ZERO).unwrap(), f("+0.96"));
        // The falling branch uses Math.minus and matches the reference.
        assert_eq!(sin(Layer::Hw, f("+4.71")).unwrap(), f("-1.00"));
        assert_eq!(sin(Layer::Hw, f("-1.57")).unwrap(), f("-1.00"));
        assert_eq!(cos(Layer::Hw, f("+3.14")).unwrap(), f("-1.00"));
    }

    #[test]
    fn hardware_unassigned_branch() {
        // -12.50: store = 1, plus(-12.50, 12.56) hits the equal-integer
        // anomaly and yields -0.94, which neither range check accepts.
        let e = sin_eval(Layer::Hw, f("-12.50")).unwrap();
        assert_eq!(e.reduced, f("-0.94"));
        assert_eq!(e.branch, SinBranch::Unassigned);
        assert_eq!(e.value, Fix32::ZERO);
        // The reference layer reduces correctly to +0.06.
        let r = sin_eval(Layer::Ref, f("-12.50")).unwrap();
        assert_eq!(r.reduced, f("+0.06"));
    }

    #[test]
    fn reference_reports_overflowing_reduction() {
        // 41 turns of 6.28 exceed the integer field.
        assert!(matches!(sin(Layer::Ref, f("-255.00")), Err(FixError::Overflow { .. })));
    }

    #[test]
    fn positive_reduction() {
        let e = sin_eval(Layer::Hw, f("+12.60")).unwrap();
        assert_eq!(e.reduced, f("+0.04"));
        let e = sin_eval(Layer::Ref, f("+6.28")).unwrap();
        assert_eq!(e.reduced, Fix32::ZERO);
    }
}
