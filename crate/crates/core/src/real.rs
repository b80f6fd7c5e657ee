//! Real values produced by the generators: an exact rational, or a dyadic
//! approximation with an absolute error bound.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use crate::hp::{fract_fixed128, rational_to_f64};

/// Fractional parts are trusted only when the value is known to this many bits.
pub const FRACT_BITS: i64 = 40;

#[derive(Clone, Debug, PartialEq)]
pub struct Real {
    pub value: BigRational,
    /// `None` for exact values, otherwise `|true - value| <= 2^err_log2`.
    pub err_log2: Option<i64>,
}

impl Real {
    pub fn exact(value: BigRational) -> Self {
        Real { value, err_log2: None }
    }

    pub fn from_int(v: BigInt) -> Self {
        Real::exact(BigRational::from_integer(v))
    }

    pub fn approx(value: BigRational, err_log2: i64) -> Self {
        Real {
            value,
            err_log2: Some(err_log2),
        }
    }

    pub fn is_exact(&self) -> bool {
        self.err_log2.is_none()
    }

    /// True when the fractional part is known to `2^-40`.
    pub fn fract_trusted(&self) -> bool {
        self.err_log2.map_or(true, |e| e <= -FRACT_BITS)
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.value)
    }

    pub fn fract_f64(&self) -> f64 {
        let f = (self.fract_fixed() >> 64) as u64;
        f as f64 / 18446744073709551616.0
    }

    /// `{x}` as a 128-bit fixed-point phase.
    pub fn fract_fixed(&self) -> u128 {
        fract_fixed128(&self.value)
    }

    /// `floor(x)` when it is certain given the error bound.
    pub fn floor(&self) -> Option<BigInt> {
        let f = self.value.floor().to_integer();
        match self.err_log2 {
            None => Some(f),
            Some(e) => {
                let err = pow2(e);
                let lo = (&self.value - &err).floor().to_integer();
                let hi = (&self.value + &err).floor().to_integer();
                (lo == hi).then_some(f)
            }
        }
    }

    pub fn sub(&self, other: &Real) -> Real {
        let value = &self.value - &other.value;
        let err_log2 = match (self.err_log2, other.err_log2) {
            (None, None) => None,
            (Some(a), None) | (None, Some(a)) => Some(a),
            (Some(a), Some(b)) => Some(a.max(b) + 1),
        };
        Real { value, err_log2 }
    }

    pub fn is_positive(&self) -> bool {
        self.value.is_positive()
    }
}

pub(crate) fn pow2(e: i64) -> BigRational {
    if e >= 0 {
        BigRational::from_integer(BigInt::from(1) << (e as usize))
    } else {
        BigRational::new(BigInt::from(1), BigInt::from(1) << ((-e) as usize))
    }
}

/// Integer part of `log2 |r|` (rounded up), `None` for zero.
pub(crate) fn log2_ceil(r: &BigRational) -> Option<i64> {
    if r.is_zero() {
        return None;
    }
    Some(r.numer().bits() as i64 - r.denom().bits() as i64 + 1)
}

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(self.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floor_uncertain_near_integer() {
        let v = BigRational::new(BigInt::from((1i64 << 50) - 1), BigInt::from(1i64 << 50));
        assert_eq!(Real::approx(v.clone(), -60).floor(), Some(BigInt::from(0)));
        assert_eq!(Real::approx(v, -40).floor(), None);
    }

    #[test]
    fn fract_of_negative() {
        let r = Real::exact(BigRational::new((-5).into(), 4.into()));
        assert_eq!(r.fract_f64(), 0.75);
    }
}
