//! Circle rotation `T x = {x + α}` on `[0, 1)` with an interval `A = [u, v)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::equidist::weyl::cis;
use crate::error::{Error, Result};
use crate::expr::RealExpr;
use crate::generators::set::{generate_set, SetSpec};
use crate::hp::{fract_fixed128, rational_to_f64, to_rational, Hp, MAX_PRECISION};
use crate::real::{pow2, Real};
use crate::sum::block_sum2;

/// Fixed-point bits used for `{nα}` when `α` is irrational.
pub const ANGLE_BITS: usize = 192;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RotationSystem {
    pub alpha: RealExpr,
    pub u: RealExpr,
    pub v: RealExpr,
}

impl RotationSystem {
    pub fn new(alpha: RealExpr, u: BigRational, v: BigRational) -> Result<Self> {
        let sys = RotationSystem {
            alpha,
            u: RealExpr::rational(u),
            v: RealExpr::rational(v),
        };
        sys.validate()?;
        Ok(sys)
    }

    pub fn parse(alpha: &str, u: &str, v: &str) -> Result<Self> {
        let sys = RotationSystem {
            alpha: RealExpr::parse(alpha)?,
            u: RealExpr::parse(u)?,
            v: RealExpr::parse(v)?,
        };
        sys.validate()?;
        Ok(sys)
    }

    pub fn validate(&self) -> Result<()> {
        let (u, v) = self.endpoints()?;
        if u.is_negative() || u >= v || v > BigRational::one() {
            return Err(Error::domain(format!("interval [{u}, {v}) must satisfy 0 <= u < v <= 1")));
        }
        if v.clone() - u == BigRational::one() {
            return Err(Error::domain("interval must have measure below 1"));
        }
        if self.alpha.has_var() {
            return Err(Error::domain("angle must be a constant"));
        }
        Ok(())
    }

    /// Interval endpoints; both must be rational.
    pub fn endpoints(&self) -> Result<(BigRational, BigRational)> {
        let r = |e: &RealExpr| {
            e.as_rational()
                .ok_or_else(|| Error::domain(format!("interval endpoint `{e}` must be rational")))
        };
        Ok((r(&self.u)?, r(&self.v)?))
    }

    pub fn measure(&self) -> Result<BigRational> {
        let (u, v) = self.endpoints()?;
        Ok(v - u)
    }

    /// `{nα}`: exact for rational `α`, otherwise within `|n| 2^-bits`.
    pub fn shift(&self, n: &BigInt, bits: usize) -> Result<Real> {
        if let Some(a) = self.alpha.as_rational() {
            let x = a * BigRational::from_integer(n.clone());
            return Ok(Real::exact(x.clone() - x.floor()));
        }
        let mut hp = Hp::new(bits + 64);
        let a = to_rational(&self.alpha.eval(&mut hp, None)?)?;
        let scale = BigInt::one() << bits;
        let fixed = (a.numer() * &scale).div_floor(a.denom());
        let t = (fixed * n).mod_floor(&scale);
        let err = (n.abs() + 1u32).bits() as i64 - bits as i64 + 1;
        Ok(Real::approx(BigRational::new(t, scale), err))
    }
}

/// Length of `[u, v) ∩ ([u, v) + t mod 1)` for `t ∈ [0, 1)`:
/// `max(0, β − t) + max(0, t − (1 − β))`.
pub fn circle_overlap(beta: &BigRational, t: &BigRational) -> BigRational {
    let zero = BigRational::zero();
    let a = beta - t;
    let b = t - (BigRational::one() - beta);
    (if a > zero { a } else { zero.clone() }) + (if b > zero { b } else { zero })
}

/// `μ(A ∩ T^{-n} A)`. The overlap is 1-Lipschitz in `t`, so the error bound
/// of `{nα}` carries over unchanged.
pub fn rotation_overlap(sys: &RotationSystem, n: &BigInt) -> Result<Real> {
    overlap_at(sys, n, ANGLE_BITS)
}

fn overlap_at(sys: &RotationSystem, n: &BigInt, bits: usize) -> Result<Real> {
    if n.is_zero() {
        return Err(Error::domain("overlap needs n != 0"));
    }
    let beta = sys.measure()?;
    let t = sys.shift(n, bits)?;
    Ok(Real {
        value: circle_overlap(&beta, &t.value),
        err_log2: t.err_log2,
    })
}

/// Monte Carlo estimate of `μ(A ∩ T^{-n} A)`. Samples are jittered: one
/// uniform point in each cell `[i/S, (i+1)/S)`, which keeps the error near
/// `1/S` for interval indicators.
pub fn overlap_monte_carlo(sys: &RotationSystem, n: &BigInt, samples: usize, seed: u64) -> Result<f64> {
    let (u, v) = sys.endpoints()?;
    let (u, v) = (rational_to_f64(&u), rational_to_f64(&v));
    let t = sys.shift(n, ANGLE_BITS)?.to_f64();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inside = |x: f64| x >= u && x < v;
    let hits = (0..samples)
        .filter(|&i| {
            let x = (i as f64 + rng.gen::<f64>()) / samples as f64;
            inside(x) && inside((x + t).fract())
        })
        .count();
    Ok(hits as f64 / samples as f64)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RecurrenceHit {
    #[serde(serialize_with = "crate::bigser::int")]
    pub n: BigInt,
    pub t: f64,
    pub overlap: f64,
    /// Exact overlap as a fraction when the angle is rational.
    pub overlap_exact: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RecurrenceReport {
    pub measure: f64,
    pub epsilon: f64,
    /// `μ(A)^2 − ε`.
    pub threshold: f64,
    pub horizon: u64,
    pub checked: usize,
    pub hits: Vec<RecurrenceHit>,
    pub inequality: String,
    pub note: String,
}

/// Every `n ∈ H ∩ [1, horizon]` with `μ(A ∩ T^{-n}A) > μ(A)^2 − ε`. The set
/// is enumerated over its own index horizon; elements outside
/// `[1, horizon]` are skipped.
pub fn recurrence_scan(
    sys: &RotationSystem,
    set: &SetSpec,
    epsilon: &BigRational,
    horizon: u64,
) -> Result<RecurrenceReport> {
    if set.dimension() != 1 {
        return Err(Error::Dimension {
            expected: 1,
            got: set.dimension(),
        });
    }
    let beta = sys.measure()?;
    let beta2 = &beta * &beta;
    if !epsilon.is_positive() || epsilon >= &beta2 {
        return Err(Error::domain("epsilon must lie in (0, μ(A)^2)"));
    }
    if horizon < 10 {
        return Err(Error::domain("horizon must be at least 10"));
    }
    let threshold = &beta2 - epsilon;
    let elements = generate_set(set, set.horizon)?.elements;
    let top = BigInt::from(horizon);
    let mut candidates: Vec<BigInt> = elements
        .into_iter()
        .map(|mut e| e.remove(0))
        .filter(|n| n.is_positive() && n <= &top)
        .collect();
    candidates.sort();
    candidates.dedup();
    let exact = sys.alpha.as_rational().is_some();
    let mut hits = Vec::new();
    for n in &candidates {
        let mut bits = ANGLE_BITS;
        let ov = loop {
            let ov = overlap_at(sys, n, bits)?;
            let gap = &ov.value - &threshold;
            let decided = match ov.err_log2 {
                None => true,
                Some(e) => gap.abs() > pow2(e),
            };
            if decided {
                break ov;
            }
            bits *= 2;
            if bits > MAX_PRECISION {
                return Err(Error::precision(n.to_u64().unwrap_or(u64::MAX), "overlap too close to threshold"));
            }
        };
        if ov.value > threshold {
            let t = sys.shift(n, bits)?;
            hits.push(RecurrenceHit {
                n: n.clone(),
                t: t.to_f64(),
                overlap: ov.to_f64(),
                overlap_exact: exact.then(|| ov.value.to_string()),
            });
        }
    }
    Ok(RecurrenceReport {
        measure: rational_to_f64(&beta),
        epsilon: rational_to_f64(epsilon),
        threshold: rational_to_f64(&threshold),
        horizon,
        checked: candidates.len(),
        hits,
        inequality: "mu(A ∩ T^-n A) > mu(A)^2 - epsilon".into(),
        note: "intersection used; the union form is trivially satisfied".into(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Observable {
    Constant,
    Indicator { u: RealExpr, v: RealExpr },
    Cos { h: i64 },
    Sin { h: i64 },
}

/// `(1/N) Σ_{n<N} f(T^n x0)` along a 128-bit fixed-point orbit.
pub fn birkhoff_average(sys: &RotationSystem, f: &Observable, n: u64, x0: &RealExpr) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("N must be at least 1"));
    }
    let mut hp = Hp::new(256);
    let fixed = |e: &RealExpr, hp: &mut Hp| -> Result<u128> {
        Ok(match e.as_rational() {
            Some(r) => fract_fixed128(&r),
            None => fract_fixed128(&to_rational(&e.eval(hp, None)?)?),
        })
    };
    let a = fixed(&sys.alpha, &mut hp)?;
    let x = fixed(x0, &mut hp)?;
    let orbit = |i: usize| x.wrapping_add(a.wrapping_mul(i as u128));
    let len = usize::try_from(n).map_err(|_| Error::capacity("orbit length", usize::MAX as u64))?;
    let total = match f {
        Observable::Constant => return Ok(1.0),
        Observable::Indicator { u, v } => {
            let (ur, vr) = (
                u.as_rational().ok_or_else(|| Error::domain("indicator endpoints must be rational"))?,
                v.as_rational().ok_or_else(|| Error::domain("indicator endpoints must be rational"))?,
            );
            if ur.is_negative() || ur >= vr || vr > BigRational::one() {
                return Err(Error::domain("indicator interval must satisfy 0 <= u < v <= 1"));
            }
            let lo = fract_fixed128(&ur);
            let hi = (vr < BigRational::one()).then(|| fract_fixed128(&vr));
            let inside = |p: u128| p >= lo && hi.map_or(true, |h| p < h);
            let count = (0..len).filter(|&i| inside(orbit(i))).count();
            return Ok(count as f64 / n as f64);
        }
        Observable::Cos { h } | Observable::Sin { h } => {
            let h = *h as i128 as u128;
            let (re, im) = block_sum2(len, |i| cis((h.wrapping_mul(orbit(i)) >> 64) as u64));
            if matches!(f, Observable::Cos { .. }) {
                re
            } else {
                im
            }
        }
    };
    Ok(total / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half() -> RotationSystem {
        RotationSystem::parse("phi", "0", "1/2").unwrap()
    }

    fn q(s: &str) -> BigRational {
        RealExpr::parse(s).unwrap().as_rational().unwrap()
    }

    #[test]
    fn closed_form_cases() {
        let beta = q("1/2");
        assert_eq!(circle_overlap(&beta, &BigRational::zero()), beta);
        assert_eq!(circle_overlap(&beta, &q("1/2")), BigRational::zero());
        let ov = rotation_overlap(&half(), &BigInt::from(3)).unwrap().to_f64();
        let t = (3.0 * 1.618_033_988_749_895f64).fract();
        assert!((ov - (t - 0.5)).abs() < 1e-12);
    }

    #[test]
    fn rational_period_gives_full_overlap() {
        let sys = RotationSystem::parse("1/3", "1/4", "1/2").unwrap();
        let ov = rotation_overlap(&sys, &BigInt::from(6)).unwrap();
        assert!(ov.is_exact());
        assert_eq!(ov.value, q("1/4"));
    }

    #[test]
    fn monte_carlo_agrees() {
        let sys = half();
        for n in [1, 3, 10, 55] {
            let n = BigInt::from(n);
            let exact = rotation_overlap(&sys, &n).unwrap().to_f64();
            let mc = overlap_monte_carlo(&sys, &n, 200_000, 1).unwrap();
            assert!((exact - mc).abs() < 1e-4, "n={n}: {exact} vs {mc}");
        }
    }

    #[test]
    fn scans() {
        use crate::generators::sequence::SequenceSpec;
        let eps = q("1/20");
        let all = SetSpec::new(SequenceSpec::polynomial(&["n"]).unwrap(), 100);
        let r = recurrence_scan(&half(), &all, &eps, 100).unwrap();
        assert!(!r.hits.is_empty());
        let odd = SetSpec::new(SequenceSpec::polynomial(&["2n+1"]).unwrap(), 100);
        let rigid = RotationSystem::parse("1/2", "0", "1/2").unwrap();
        assert!(recurrence_scan(&rigid, &odd, &eps, 200).unwrap().hits.is_empty());
    }

    #[test]
    fn birkhoff_examples() {
        let ind = Observable::Indicator {
            u: RealExpr::int(0),
            v: RealExpr::ratio(1, 2),
        };
        let avg = birkhoff_average(&half(), &ind, 100_000, &RealExpr::int(0)).unwrap();
        assert!((avg - 0.5).abs() < 0.01);
        let fixed = RotationSystem::parse("0", "0", "1/2").unwrap();
        assert_eq!(birkhoff_average(&fixed, &ind, 1000, &RealExpr::ratio(1, 4)).unwrap(), 1.0);
        assert_eq!(birkhoff_average(&half(), &Observable::Constant, 10, &RealExpr::int(0)).unwrap(), 1.0);
        let c = birkhoff_average(&half(), &Observable::Cos { h: 1 }, 100_000, &RealExpr::int(0)).unwrap();
        assert!(c.abs() < 0.01);
    }
}
