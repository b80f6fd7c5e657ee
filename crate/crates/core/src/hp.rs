//! Thin layer over `astro-float` used by every module that needs more than
//! `f64`: conversions to and from exact integers/rationals, and the handful of
//! transcendental functions the sequence generators use.
//!
//! All values leave this module as exact dyadic rationals (`m * 2^e`), so the
//! rest of the crate never touches `BigFloat` directly.

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_bigint::{BigInt, BigUint, Sign as BigSign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Default working precision in significant bits.
pub const DEFAULT_PRECISION: usize = 128;

/// Smallest precision accepted anywhere in the crate.
pub const MIN_PRECISION: usize = 64;

/// Largest precision the automatic refinement loops will climb to.
pub const MAX_PRECISION: usize = 4096;

const RM: RoundingMode = RoundingMode::ToEven;

/// Evaluation context: a working precision and the constant cache.
pub struct Hp {
    prec: usize,
    cc: Consts,
}

impl std::fmt::Debug for Hp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Hp").field("prec", &self.prec).finish()
    }
}

impl Hp {
    pub fn new(prec: usize) -> Self {
        let prec = prec.max(MIN_PRECISION);
        Hp {
            prec,
            cc: Consts::new().expect("constant cache allocation"),
        }
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    pub fn from_u64(&self, v: u64) -> BigFloat {
        BigFloat::from_u64(v, self.prec)
    }

    pub fn from_int(&self, v: &BigInt) -> BigFloat {
        if v.is_zero() {
            return BigFloat::from_u64(0, self.prec);
        }
        let digits = v.magnitude().to_u64_digits();
        let sign = if v.is_negative() { Sign::Neg } else { Sign::Pos };
        let e = (digits.len() * 64) as i32;
        let mut x = BigFloat::from_words(&digits, sign, e);
        // from_words keeps every supplied bit; round to the working precision.
        let _ = x.set_precision(self.prec.max(64), RM);
        x
    }

    pub fn from_ratio(&self, r: &BigRational) -> BigFloat {
        let n = self.from_int_wide(r.numer());
        if r.denom().is_one() {
            let mut n = n;
            let _ = n.set_precision(self.prec, RM);
            return n;
        }
        let d = self.from_int_wide(r.denom());
        n.div(&d, self.prec, RM)
    }

    // Exact conversion (no rounding) for use as an intermediate operand.
    fn from_int_wide(&self, v: &BigInt) -> BigFloat {
        if v.is_zero() {
            return BigFloat::from_u64(0, self.prec);
        }
        let digits = v.magnitude().to_u64_digits();
        let sign = if v.is_negative() { Sign::Neg } else { Sign::Pos };
        BigFloat::from_words(&digits, sign, (digits.len() * 64) as i32)
    }

    pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.prec, RM)
    }

    pub fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.prec, RM)
    }

    pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.prec, RM)
    }

    pub fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.prec, RM)
    }

    pub fn sqrt(&self, a: &BigFloat) -> BigFloat {
        a.sqrt(self.prec, RM)
    }

    pub fn ln(&mut self, a: &BigFloat) -> BigFloat {
        a.ln(self.prec, RM, &mut self.cc)
    }

    pub fn exp(&mut self, a: &BigFloat) -> BigFloat {
        a.exp(self.prec, RM, &mut self.cc)
    }

    /// `a^b` for real `b`; `a` must be positive unless `b` is an integer.
    pub fn pow(&mut self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.pow(b, self.prec, RM, &mut self.cc)
    }

    /// `a^n` for an integer exponent.
    pub fn powi(&self, a: &BigFloat, n: i64) -> BigFloat {
        let p = a.powi(n.unsigned_abs() as usize, self.prec, RM);
        if n < 0 {
            BigFloat::from_u64(1, self.prec).div(&p, self.prec, RM)
        } else {
            p
        }
    }

    pub fn pi(&mut self) -> BigFloat {
        self.cc.pi(self.prec, RM)
    }

    pub fn e(&mut self) -> BigFloat {
        self.cc.e(self.prec, RM)
    }
}

/// Returns `Some(e)` with `2^(e-1) <= |x| < 2^e`, or `None` for zero.
pub fn magnitude_exponent(x: &BigFloat) -> Option<i64> {
    if x.is_zero() {
        None
    } else {
        x.exponent().map(|e| e as i64)
    }
}

pub fn is_finite(x: &BigFloat) -> bool {
    !x.is_nan() && !x.is_inf()
}

/// Exact decomposition `x = m * 2^e`.
pub fn to_dyadic(x: &BigFloat) -> Result<(BigInt, i64)> {
    if !is_finite(x) {
        return Err(Error::domain("non-finite value (overflow or invalid operation)"));
    }
    if x.is_zero() {
        return Ok((BigInt::zero(), 0));
    }
    let (words, _bits, sign, exp, _inexact) = x
        .as_raw_parts()
        .ok_or_else(|| Error::domain("value has no mantissa"))?;
    let mut bytes = Vec::with_capacity(words.len() * 8);
    for w in words {
        bytes.extend_from_slice(&w.to_le_bytes());
    }
    let mag = BigUint::from_bytes_le(&bytes);
    let s = if matches!(sign, Sign::Neg) {
        BigSign::Minus
    } else {
        BigSign::Plus
    };
    let m = BigInt::from_biguint(s, mag);
    Ok((m, exp as i64 - (words.len() as i64) * 64))
}

/// Exact rational value of a finite `BigFloat`.
pub fn to_rational(x: &BigFloat) -> Result<BigRational> {
    let (m, e) = to_dyadic(x)?;
    Ok(dyadic_to_rational(m, e))
}

pub fn dyadic_to_rational(m: BigInt, e: i64) -> BigRational {
    if e >= 0 {
        BigRational::from_integer(m << (e as usize))
    } else {
        BigRational::new(m, BigInt::one() << ((-e) as usize))
    }
}

/// `floor(frac(r) * 2^128)`, i.e. the fractional part of `r` as a 128-bit
/// fixed-point phase.
pub fn fract_fixed128(r: &BigRational) -> u128 {
    let num = r.numer();
    let den = r.denom();
    let rem = num.mod_floor(den);
    let scaled: BigInt = (rem << 128usize) / den;
    let (_, digits) = scaled.to_u64_digits();
    match digits.len() {
        0 => 0,
        1 => digits[0] as u128,
        _ => (digits[0] as u128) | ((digits[1] as u128) << 64),
    }
}

/// Rational approximation of an `f64` — exact, since every finite double is a
/// dyadic rational.
pub fn f64_to_rational(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| Error::domain(format!("non-finite value {x}")))
}

/// Nearest `f64` to a rational.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    let n = r.numer();
    let d = r.denom();
    if d.is_one() {
        return int_to_f64(n);
    }
    // Scale so the integer quotient carries 64+ significant bits.
    let nb = n.bits() as i64;
    let db = d.bits() as i64;
    let shift = 80 - (nb - db);
    let q = if shift >= 0 {
        (n << (shift as usize)) / d
    } else {
        n / (d << ((-shift) as usize))
    };
    int_to_f64(&q) * 2f64.powi(-(shift as i32))
}

pub fn int_to_f64(n: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    n.to_f64().unwrap_or(if n.is_negative() {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_round_trip() {
        let hp = Hp::new(128);
        for v in [0i64, 1, -1, 7, 1 << 40, -(1 << 62) + 3] {
            let x = hp.from_int(&BigInt::from(v));
            assert_eq!(to_rational(&x).unwrap(), BigRational::from_integer(v.into()));
        }
    }

    #[test]
    fn sqrt_two_is_accurate() {
        let hp = Hp::new(128);
        let s = hp.sqrt(&hp.from_u64(2));
        let r = to_rational(&s).unwrap();
        let err = &r * &r - BigRational::from_integer(2.into());
        assert!(rational_to_f64(&err).abs() < 1e-36);
    }

    #[test]
    fn fixed_phase_of_half() {
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(fract_fixed128(&half), 1u128 << 127);
        let minus_quarter = BigRational::new((-1).into(), 4.into());
        assert_eq!(fract_fixed128(&minus_quarter), 3u128 << 126);
    }

    #[test]
    fn rational_to_f64_matches_division() {
        let r = BigRational::new(1.into(), 3.into());
        assert_eq!(rational_to_f64(&r), 1.0 / 3.0);
        let big = BigRational::new(BigInt::from(10).pow(30) + 1, BigInt::from(7));
        assert!((rational_to_f64(&big) / (1e30 / 7.0) - 1.0).abs() < 1e-15);
    }
}
