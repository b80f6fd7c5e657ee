//! The `×q` map `T x = {qx}` and the digits it produces.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::RealExpr;
use crate::hp::{to_rational, Hp, MAX_PRECISION};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DigitMapSystem {
    pub q: u32,
    pub x: RealExpr,
}

impl DigitMapSystem {
    pub fn new(q: u32, x: RealExpr) -> Result<Self> {
        if q < 2 {
            return Err(Error::domain("base must be at least 2"));
        }
        if x.has_var() {
            return Err(Error::domain("point must be a constant"));
        }
        Ok(DigitMapSystem { q, x })
    }

    /// `T x = {qx}`, available for rational points.
    pub fn step(&self) -> Result<Self> {
        let r = self
            .x
            .as_rational()
            .ok_or_else(|| Error::domain("exact step needs a rational point"))?;
        let y = r * BigInt::from(self.q);
        Ok(DigitMapSystem {
            q: self.q,
            x: RealExpr::rational(y.clone() - y.floor()),
        })
    }
}

fn digits_of(mut r: BigRational, q: u32, count: usize) -> Vec<u32> {
    let qb = BigInt::from(q);
    (0..count)
        .map(|_| {
            r *= &qb;
            let d = r.floor();
            r -= &d;
            d.to_integer().to_u32().expect("digit below q")
        })
        .collect()
}

fn check_unit(r: &BigRational) -> Result<()> {
    if r.is_negative() || r >= &BigRational::one() {
        return Err(Error::domain(format!("point {r} is outside [0, 1)")));
    }
    Ok(())
}

/// `a_1, ..., a_count` with `a_j = i` iff `T^{j-1} x ∈ [i/q, (i+1)/q)`.
/// Rationals are expanded exactly; other points are evaluated with
/// `count·log2(q) + 64` bits and every digit is checked against both ends of
/// the error interval.
pub fn qary_digits(sys: &DigitMapSystem, count: usize) -> Result<Vec<u32>> {
    if let Some(r) = sys.x.as_rational() {
        check_unit(&r)?;
        return Ok(digits_of(r, sys.q, count));
    }
    let bits = (count as f64 * (sys.q as f64).log2()).ceil() as usize + 64;
    if bits > MAX_PRECISION * 16 {
        return Err(Error::capacity("digit precision bits", (MAX_PRECISION * 16) as u64));
    }
    let mut hp = Hp::new(bits);
    let r = to_rational(&sys.x.eval(&mut hp, None)?)?;
    check_unit(&r)?;
    // The evaluation is correct to a few ulps of a value below 1.
    let err = BigRational::new(BigInt::one(), BigInt::one() << (bits - 8));
    let lo = &r - &err;
    let hi = &r + &err;
    if lo.is_negative() || hi >= BigRational::one() {
        return Err(Error::precision(0, "point too close to 0 or 1 to fix the first digit"));
    }
    let a = digits_of(lo, sys.q, count);
    let b = digits_of(hi, sys.q, count);
    match a.iter().zip(&b).position(|(x, y)| x != y) {
        None => Ok(a),
        Some(j) => Err(Error::precision(
            j as u64,
            format!("digits trustworthy only through index {j}"),
        )),
    }
}

/// `Σ a_j q^{-j}`.
pub fn reconstruct(digits: &[u32], q: u32) -> BigRational {
    let qb = BigInt::from(q);
    let mut acc = BigRational::zero();
    for &d in digits.iter().rev() {
        acc = (acc + BigRational::from_integer(d.into())) / BigRational::from_integer(qb.clone());
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(q: u32, x: &str) -> DigitMapSystem {
        DigitMapSystem::new(q, RealExpr::parse(x).unwrap()).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(qary_digits(&sys(10, "1/3"), 4).unwrap(), vec![3, 3, 3, 3]);
        assert_eq!(qary_digits(&sys(2, "1/2"), 3).unwrap(), vec![1, 0, 0]);
        assert_eq!(qary_digits(&sys(10, "22/7 - 3"), 6).unwrap(), vec![1, 4, 2, 8, 5, 7]);
    }

    #[test]
    fn irrational_point() {
        let d = qary_digits(&sys(10, "sqrt(2) - 1"), 10).unwrap();
        assert_eq!(d, vec![4, 1, 4, 2, 1, 3, 5, 6, 2, 3]);
        let d = qary_digits(&sys(10, "pi - 3"), 500).unwrap();
        assert_eq!(&d[..5], &[1, 4, 1, 5, 9]);
    }

    #[test]
    fn shift_and_reconstruction() {
        let s = sys(7, "5/13");
        let d = qary_digits(&s, 30).unwrap();
        let shifted = qary_digits(&s.step().unwrap(), 29).unwrap();
        assert_eq!(&d[1..], &shifted[..]);
        let x = s.x.as_rational().unwrap();
        let gap = x - reconstruct(&d, 7);
        assert!(gap >= BigRational::zero() && gap < BigRational::new(1.into(), BigInt::from(7).pow(30)));
    }
}
