use std::f64::consts::LN_2;
use std::ops::{Div, Mul};

/// A signed real number stored as `sign * mantissa * 2^exponent` with the
/// mantissa normalized to `[1, 2)`.
///
/// Products of thousands of pivots neither overflow nor underflow, and
/// powers of two stay exact, so `ln()` of an exact power of two returns
/// exactly `exponent * ln 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled {
    sign: i8,
    mantissa: f64,
    exponent: i64,
}

impl Scaled {
    pub const ZERO: Scaled = Scaled {
        sign: 0,
        mantissa: 0.0,
        exponent: 0,
    };
    pub const ONE: Scaled = Scaled {
        sign: 1,
        mantissa: 1.0,
        exponent: 0,
    };

    pub fn from_f64(x: f64) -> Self {
        debug_assert!(x.is_finite());
        if x == 0.0 {
            return Self::ZERO;
        }
        let (mantissa, exponent) = split(x.abs());
        Scaled {
            sign: if x < 0.0 { -1 } else { 1 },
            mantissa,
            exponent,
        }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// Natural log of the magnitude; `-inf` for zero.
    pub fn ln_abs(&self) -> f64 {
        if self.sign == 0 {
            f64::NEG_INFINITY
        } else {
            self.mantissa.ln() + self.exponent as f64 * LN_2
        }
    }

    /// Linear value; saturates to 0 or ±inf outside the f64 range.
    pub fn to_f64(&self) -> f64 {
        if self.sign == 0 {
            return 0.0;
        }
        f64::from(self.sign) * ldexp(self.mantissa, self.exponent)
    }

    pub fn negate(self) -> Self {
        Scaled {
            sign: -self.sign,
            ..self
        }
    }
}

impl Mul for Scaled {
    type Output = Scaled;
    fn mul(self, rhs: Scaled) -> Scaled {
        if self.sign == 0 || rhs.sign == 0 {
            return Scaled::ZERO;
        }
        let (mantissa, e) = split(self.mantissa * rhs.mantissa);
        Scaled {
            sign: self.sign * rhs.sign,
            mantissa,
            exponent: self.exponent + rhs.exponent + e,
        }
    }
}

impl Div for Scaled {
    type Output = Scaled;
    fn div(self, rhs: Scaled) -> Scaled {
        assert!(rhs.sign != 0, "division by a zero Scaled value");
        if self.sign == 0 {
            return Scaled::ZERO;
        }
        let (mantissa, e) = split(self.mantissa / rhs.mantissa);
        Scaled {
            sign: self.sign * rhs.sign,
            mantissa,
            exponent: self.exponent - rhs.exponent + e,
        }
    }
}

/// Splits a positive finite `x` into `(m, e)` with `x = m * 2^e`, `m ∈ [1, 2)`.
fn split(x: f64) -> (f64, i64) {
    debug_assert!(x > 0.0 && x.is_finite());
    let mut bits = x.to_bits();
    let mut offset = 0i64;
    if (bits >> 52) & 0x7ff == 0 {
        // subnormal: bring into the normal range first
        bits = (x * f64::from_bits(0x4350_0000_0000_0000)).to_bits(); // 2^54
        offset = -54;
    }
    let biased = ((bits >> 52) & 0x7ff) as i64;
    let mantissa = f64::from_bits((bits & 0x000f_ffff_ffff_ffff) | 0x3ff0_0000_0000_0000);
    (mantissa, biased - 1023 + offset)
}

fn ldexp(m: f64, e: i64) -> f64 {
    let mut value = m;
    let mut e = e;
    while e > 1000 {
        value *= f64::from_bits(((1000 + 1023) as u64) << 52);
        e -= 1000;
        if value.is_infinite() {
            return value;
        }
    }
    while e < -1000 {
        value *= f64::from_bits(((1023 - 1000) as u64) << 52);
        e += 1000;
        if value == 0.0 {
            return value;
        }
    }
    value * f64::from_bits(((e + 1023) as u64) << 52)
}
