//! Exact-arithmetic oracle.
//!
//! Values are arbitrary-precision integers counting hundredths. Nothing here
//! touches the fixed-point module, so differential tests against it cannot
//! share a bug with the code under test.

use std::ops::{Add, Neg, Sub};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactHundredths(pub BigInt);

impl ExactHundredths {
    pub fn new(hundredths: i64) -> Self {
        ExactHundredths(BigInt::from(hundredths))
    }

    pub fn to_i64(&self) -> Option<i64> {
        self.0.to_i64()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl From<i64> for ExactHundredths {
    fn from(v: i64) -> Self {
        ExactHundredths::new(v)
    }
}

impl Add for ExactHundredths {
    type Output = ExactHundredths;
    fn add(self, rhs: Self) -> Self {
        r_add(&self, &rhs)
    }
}

impl Sub for ExactHundredths {
    type Output = ExactHundredths;
    fn sub(self, rhs: Self) -> Self {
        ExactHundredths(self.0 - rhs.0)
    }
}

impl Neg for ExactHundredths {
    type Output = ExactHundredths;
    fn neg(self) -> Self {
        ExactHundredths(-self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("oracle division by zero")]
pub struct ZeroDivisor;

pub fn r_add(a: &ExactHundredths, b: &ExactHundredths) -> ExactHundredths {
    ExactHundredths(&a.0 + &b.0)
}

/// Quotient of two big integers rounded toward zero.
fn div_trunc(n: &BigInt, d: &BigInt) -> BigInt {
    let (q, _) = n.abs().div_rem(&d.abs());
    if n.is_negative() != d.is_negative() {
        -q
    } else {
        q
    }
}

/// `trunc(a * b / 100)`.
pub fn r_mul_trunc(a: &ExactHundredths, b: &ExactHundredths) -> ExactHundredths {
    ExactHundredths(div_trunc(&(&a.0 * &b.0), &BigInt::from(100)))
}

/// `trunc(100 * a / b)`.
pub fn r_div_trunc(a: &ExactHundredths, b: &ExactHundredths) -> Result<ExactHundredths, ZeroDivisor> {
    if b.0.is_zero() {
        return Err(ZeroDivisor);
    }
    Ok(ExactHundredths(div_trunc(&(&a.0 * 100), &b.0)))
}

/// Decimal digits carried by the sine evaluation.
const DIGITS: u32 = 60;

fn scale() -> BigInt {
    BigInt::from(10).pow(DIGITS)
}

/// pi scaled by 10^DIGITS, via Machin's formula with ten guard digits.
fn pi_scaled() -> &'static BigInt {
    static PI: OnceLock<BigInt> = OnceLock::new();
    PI.get_or_init(|| {
        let guard = BigInt::from(10).pow(DIGITS + 10);
        let arctan_inv = |x: i64| {
            let x = BigInt::from(x);
            let x2 = &x * &x;
            let mut power = &guard / &x;
            let mut sum = BigInt::zero();
            let mut k = 0u32;
            while !power.is_zero() {
                let term = &power / BigInt::from(2 * k + 1);
                if k.is_multiple_of(2) {
                    sum += term;
                } else {
                    sum -= term;
                }
                power /= &x2;
                k += 1;
            }
            sum
        };
        let pi = (arctan_inv(5) * 16) - (arctan_inv(239) * 4);
        pi / BigInt::from(10).pow(10)
    })
}

/// Sine of `theta_hundredths / 100` radians, accurate far beyond f64.
pub fn r_sin(theta_hundredths: i64) -> f64 {
    let s = scale();
    let two_pi = pi_scaled() * 2;
    // x = theta/100 at the working scale, reduced into [0, 2pi).
    let x: BigInt = BigInt::from(theta_hundredths) * &s / 100;
    let x = x.mod_floor(&two_pi);
    // Taylor series; |x| < 7 so terms shrink quickly past k ~ 10.
    let x2 = &x * &x / &s;
    let mut term = x.clone();
    let mut sum = BigInt::zero();
    let mut k = 1u64;
    let mut positive = true;
    while !term.is_zero() {
        if positive {
            sum += &term;
        } else {
            sum -= &term;
        }
        term = &term * &x2 / &s / BigInt::from((k + 1) * (k + 2));
        k += 2;
        positive = !positive;
    }
    // Keep 20 digits for the float conversion.
    let shrink = BigInt::from(10).pow(DIGITS - 20);
    let top = sum / shrink;
    top.to_f64().unwrap_or(0.0) / 1e20
}
