//! Exact two-decimal semantics. Results are always normalized; anything that
//! would not fit the 8-bit integer field is an [`FixError::Overflow`].

use super::{flatten, Fix32, FixError};

/// Exact sum. A zero result is `+0.00`.
pub fn plus(a: Fix32, b: Fix32) -> Result<Fix32, FixError> {
    Fix32::from_hundredths(a.decode() + b.decode())
}

pub fn minus(a: Fix32, b: Fix32) -> Result<Fix32, FixError> {
    plus(a, super::neg(b))
}

/// Product truncated toward zero at hundredths. The sign is the XOR of the
/// operand signs, zero results included.
pub fn times(a: Fix32, b: Fix32) -> Result<Fix32, FixError> {
    let negative = a.is_negative() ^ b.is_negative();
    let mag = a.decode().unsigned_abs() * b.decode().unsigned_abs() / 100;
    signed(negative, mag)
}

/// Quotient truncated toward zero at hundredths, sign by XOR.
pub fn divide(a: Fix32, b: Fix32) -> Result<Fix32, FixError> {
    let divisor = flatten(b) as u64;
    if divisor == 0 {
        return Err(FixError::DivideByZero);
    }
    let negative = a.is_negative() ^ b.is_negative();
    signed(negative, flatten(a) as u64 * 100 / divisor)
}

fn signed(negative: bool, mag: u64) -> Result<Fix32, FixError> {
    if mag > super::MAX_HUNDREDTHS as u64 {
        let v = mag as i64;
        return Err(FixError::Overflow { hundredths: if negative { -v } else { v } });
    }
    Ok(Fix32::from_fields(negative, (mag / 100) as u8, (mag % 100) as u32))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> Fix32 {
        s.parse().unwrap()
    }

    #[test]
    fn golden_values() {
        assert_eq!(plus(f("+33.73"), f("-21.84")).unwrap(), f("+11.89"));
        assert_eq!(minus(f("+33.73"), f("+21.84")).unwrap(), f("+11.89"));
        assert_eq!(times(f("+13.73"), f("-7.84")).unwrap(), f("-107.64"));
        assert_eq!(times(f("+1.41"), f("+1.41")).unwrap(), f("+1.98"));
        assert_eq!(divide(f("+1.00"), f("+3.00")).unwrap(), f("+0.33"));
        assert_eq!(divide(f("-10.00"), f("+4.00")).unwrap(), f("-2.50"));
    }

    #[test]
    fn intended_mixed_sign_results() {
        assert_eq!(plus(f("+5.20"), f("-5.80")).unwrap(), f("-0.60"));
        assert_eq!(plus(f("-5.20"), f("+5.80")).unwrap(), f("+0.60"));
    }

    #[test]
    fn zero_sign_rules() {
        assert_eq!(minus(f("+1.00"), f("+1.00")).unwrap(), Fix32::ZERO);
        assert_eq!(plus(f("-1.00"), f("+1.00")).unwrap(), Fix32::ZERO);
        assert_eq!(times(f("+0.05"), f("-0.05")).unwrap(), Fix32::NEG_ZERO);
        assert_eq!(divide(f("-0.00"), f("+2.00")).unwrap(), Fix32::NEG_ZERO);
    }

    #[test]
    fn overflow_and_div_zero() {
        assert!(matches!(plus(f("+200.00"), f("+56.00")), Err(FixError::Overflow { hundredths: 25600 })));
        assert!(plus(f("+200.00"), f("+55.99")).is_ok());
        assert!(matches!(times(f("+16.00"), f("+16.00")), Err(FixError::Overflow { .. })));
        assert!(matches!(divide(f("+30.00"), f("+0.10")), Err(FixError::Overflow { .. })));
        assert_eq!(divide(f("+1.00"), Fix32::ZERO), Err(FixError::DivideByZero));
        assert_eq!(divide(f("+1.00"), Fix32::NEG_ZERO), Err(FixError::DivideByZero));
    }
}
