//! Statement-level replay of the Verilog `Math` functions.
//!
//! Register slices are modelled by their widths: `[30:23]` is a `u8` with
//! wrapping arithmetic, `[22:0]` is a `u32` masked to 23 bits, `[30:0]` is
//! masked to 31 bits. Case keys are built exactly as the listing concatenates
//! them, and the unreachable `default: var = 32'd100` arms are kept.

use super::{flatten, Fix32, FixError, FRAC_MASK};

const MASK31: u32 = (1 << 31) - 1;

#[inline]
fn m23(x: u32) -> u32 {
    x & FRAC_MASK
}

/// `Math.plus`, keyed on `{a[31], b[31], ~(A >= B), ~(a >= b)}`.
pub fn plus(a: Fix32, b: Fix32) -> Fix32 {
    let (mut ai, mut bi) = (a.int_part(), b.int_part());
    let (af, bf) = (a.frac_part(), b.frac_part());
    let key = (a.is_negative() as u8) << 3 | (b.is_negative() as u8) << 2 | ((ai < bi) as u8) << 1 | (af < bf) as u8;

    let mut sign;
    let int: u8;
    let frac: u32;
    match key {
        0b0000..=0b0011 | 0b1100..=0b1111 => {
            sign = key >= 0b1100;
            let (mut i, mut f) = (ai.wrapping_add(bi), m23(af + bf));
            // while (var[22:0] >= 100) { var[30:23] += 1; var[22:0] -= 100; }
            let carries = f / 100;
            i = i.wrapping_add((carries & 0xFF) as u8);
            f -= carries * 100;
            int = i;
            frac = f;
        }
        0b0100 => {
            sign = false;
            int = ai.wrapping_sub(bi);
            frac = m23(af.wrapping_sub(bf));
        }
        0b0101 => {
            sign = false;
            if ai == bi {
                sign = true;
                ai = ai.wrapping_add(1);
                // var[22:0] = b - a is overwritten below
            }
            int = ai.wrapping_sub(bi).wrapping_sub(1);
            frac = m23((af + 100).wrapping_sub(bf));
        }
        0b0110 => {
            sign = true;
            if ai == bi {
                bi = bi.wrapping_add(1);
            }
            int = bi.wrapping_sub(ai).wrapping_sub(1);
            frac = m23((100 + bf).wrapping_sub(af));
        }
        0b0111 => {
            sign = true;
            int = bi.wrapping_sub(ai);
            frac = m23(bf.wrapping_sub(af));
        }
        0b1000 => {
            sign = true;
            int = ai.wrapping_sub(bi);
            frac = m23(af.wrapping_sub(bf));
        }
        0b1001 => {
            // no sign flip on the equal-integer path
            sign = true;
            if ai == bi {
                ai = ai.wrapping_add(1);
            }
            int = ai.wrapping_sub(bi).wrapping_sub(1);
            frac = m23((100 + af).wrapping_sub(bf));
        }
        0b1010 => {
            sign = false;
            if ai == bi {
                bi = bi.wrapping_add(1);
            }
            int = bi.wrapping_sub(ai).wrapping_sub(1);
            frac = m23((100 + bf).wrapping_sub(af));
        }
        0b1011 => {
            sign = false;
            int = bi.wrapping_sub(ai);
            frac = m23(bf.wrapping_sub(af));
        }
        _ => return Fix32::from_raw(100),
    }
    Fix32::from_fields(sign, int, frac)
}

pub fn minus(a: Fix32, b: Fix32) -> Fix32 {
    plus(a, super::neg(b))
}

/// `Math.times`: partial products accumulated in 23-bit registers, integer
/// field wrapping modulo 256.
pub fn times(a: Fix32, b: Fix32) -> Fix32 {
    let (ai, bi) = (a.int_part() as u32, b.int_part() as u32);
    let (af, bf) = (a.frac_part(), b.frac_part());

    let var2 = m23(ai * bf);
    let var3 = m23(bi * af);
    let var4 = m23(af.wrapping_mul(bf));
    let var5_lo = (var4 / 100) & 0xFF;
    let dec = m23(var2 + var3 + var5_lo);
    let carry = (dec / 100) & 0xFF;
    let int = ((ai * bi + carry) & 0xFF) as u8;
    let frac = m23(dec - (dec / 100) * 100);

    let key = (a.is_negative() as u8) << 1 | b.is_negative() as u8;
    let sign = match key {
        0b00 | 0b11 => false,
        0b01 | 0b10 => true,
        _ => return Fix32::from_raw(100),
    };
    Fix32::from_fields(sign, int, frac)
}

/// `Math.divide` on operands flattened to hundredths.
///
/// A zero divisor is an `x` in simulation; here it is an error.
pub fn divide(a: Fix32, b: Fix32) -> Result<Fix32, FixError> {
    let am = flatten(a) & MASK31;
    let bm = flatten(b) & MASK31;
    if bm == 0 {
        return Err(FixError::DivideByZero);
    }
    let key = (a.is_negative() as u8) << 2 | (b.is_negative() as u8) << 1 | (am < bm) as u8;

    let whole = |negative: bool| {
        let int = ((am / bm) & 0xFF) as u8;
        let quo = am.wrapping_sub((int as u32).wrapping_mul(bm)) & MASK31;
        let dec = m23(quo.wrapping_mul(100) / bm);
        Fix32::from_fields(negative, int, dec)
    };
    let fraction = |negative: bool| Fix32::from_fields(negative, 0, m23(am.wrapping_mul(100) / bm));

    Ok(match key {
        0b000 | 0b110 => whole(false),
        0b001 | 0b111 => fraction(false),
        0b011 | 0b101 => fraction(true),
        0b010 | 0b100 => whole(true),
        _ => Fix32::from_raw(100),
    })
}
