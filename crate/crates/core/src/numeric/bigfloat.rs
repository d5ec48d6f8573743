//! Minimal arbitrary-precision dyadic floats (mantissa * 2^exp) for the
//! numeric layer of root expansions. Default precision 512 bits, well past
//! the 50 significant digits the reports promise.

use crate::rational::Rat;
use num_bigint::{BigInt, Sign};
use num_traits::{Signed, ToPrimitive, Zero};
use std::cmp::Ordering;

pub const DEFAULT_PREC: u32 = 512;

#[derive(Clone, Debug)]
pub struct BigFloat {
    mantissa: BigInt,
    exp: i64,
    prec: u32,
}

impl BigFloat {
    pub fn zero(prec: u32) -> Self {
        BigFloat {
            mantissa: BigInt::zero(),
            exp: 0,
            prec,
        }
    }

    pub fn from_rat(r: &Rat, prec: u32) -> Self {
        // mantissa = round(r * 2^prec)
        let num = r.numer() << prec;
        let (q, rem) = num_integer::Integer::div_rem(&num, r.denom());
        let rounded = if (&rem * 2u8).magnitude() >= r.denom().magnitude() {
            if num.sign() == Sign::Minus {
                q - 1
            } else {
                q + 1
            }
        } else {
            q
        };
        BigFloat {
            mantissa: rounded,
            exp: -(prec as i64),
            prec,
        }
        .normalized()
    }

    pub fn from_int(n: i64, prec: u32) -> Self {
        BigFloat {
            mantissa: BigInt::from(n),
            exp: 0,
            prec,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    fn normalized(mut self) -> Self {
        if self.mantissa.is_zero() {
            self.exp = 0;
            return self;
        }
        let bits = self.mantissa.bits() as i64;
        let excess = bits - self.prec as i64;
        if excess > 0 {
            // round to nearest on the dropped bits
            let half = BigInt::from(1) << (excess - 1) as u64;
            let add = if self.mantissa.is_negative() { -half } else { half };
            self.mantissa = (self.mantissa + add) >> excess as u64;
            self.exp += excess;
        }
        self
    }

    pub fn neg(&self) -> Self {
        BigFloat {
            mantissa: -self.mantissa.clone(),
            exp: self.exp,
            prec: self.prec,
        }
    }

    pub fn abs(&self) -> Self {
        BigFloat {
            mantissa: self.mantissa.abs(),
            exp: self.exp,
            prec: self.prec,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let prec = self.prec.max(other.prec);
        let (a, b) = (self, other);
        let (lo, hi) = if a.exp <= b.exp { (a, b) } else { (b, a) };
        let shift = (hi.exp - lo.exp) as u64;
        // cap the alignment shift: beyond the precision the smaller operand
        // only contributes rounding noise
        let capped = shift.min(prec as u64 + 64);
        let hi_m = hi.mantissa.clone() << capped;
        let adjust = shift as i64 - capped as i64;
        let lo_m = if adjust > 0 {
            lo.mantissa.clone() >> adjust as u64
        } else {
            lo.mantissa.clone()
        };
        BigFloat {
            mantissa: hi_m + lo_m,
            exp: hi.exp - capped as i64,
            prec,
        }
        .normalized()
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        BigFloat {
            mantissa: &self.mantissa * &other.mantissa,
            exp: self.exp + other.exp,
            prec: self.prec.max(other.prec),
        }
        .normalized()
    }

    pub fn div(&self, other: &Self) -> Self {
        assert!(!other.is_zero(), "division by zero BigFloat");
        let prec = self.prec.max(other.prec);
        let scale = 2 * prec as u64 + 8;
        let num = self.mantissa.clone() << scale;
        let q = num / &other.mantissa;
        BigFloat {
            mantissa: q,
            exp: self.exp - other.exp - scale as i64,
            prec,
        }
        .normalized()
    }

    pub fn scale_pow2(&self, k: i64) -> Self {
        BigFloat {
            mantissa: self.mantissa.clone(),
            exp: self.exp + k,
            prec: self.prec,
        }
    }

    pub fn cmp_abs(&self, other: &Self) -> Ordering {
        self.abs().sub(&other.abs()).sign_of()
    }

    fn sign_of(&self) -> Ordering {
        match self.mantissa.sign() {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }

    pub fn to_f64(&self) -> f64 {
        let m = self.mantissa.to_f64().unwrap_or(f64::NAN);
        m * 2f64.powi(self.exp.clamp(i32::MIN as i64, i32::MAX as i64) as i32)
    }

    /// |self| < 2^-bits
    pub fn below_pow2(&self, bits: i64) -> bool {
        if self.mantissa.is_zero() {
            return true;
        }
        (self.mantissa.bits() as i64 + self.exp) < -bits
    }
}

impl PartialEq for BigFloat {
    fn eq(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }
}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.sub(other).sign_of())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn arithmetic_round_trip() {
        let a = BigFloat::from_rat(&rat(1, 3), 256);
        let b = BigFloat::from_rat(&rat(2, 7), 256);
        let s = a.add(&b).sub(&b).sub(&a);
        assert!(s.below_pow2(250));
        let p = a.mul(&b).div(&b).sub(&a);
        assert!(p.below_pow2(250));
    }

    #[test]
    fn f64_conversion_sanity() {
        let x = BigFloat::from_rat(&rat(-355, 113), 128);
        assert!((x.to_f64() + 3.14159292).abs() < 1e-7);
    }

    #[test]
    fn tiny_magnitude_detection() {
        let x = BigFloat::from_rat(&rat(1, 1_000_000), 128);
        assert!(x.below_pow2(10));
        assert!(!x.below_pow2(30));
    }
}
