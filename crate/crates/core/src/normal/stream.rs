//! Concatenation-type digit streams: `0.⟨⌊g(1)⌋⟩_q ⟨⌊g(2)⌋⟩_q ...`, the same
//! along primes, and fixed digit lists.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::RealExpr;
use crate::generators::primes::PrimeIter;
use crate::generators::sequence::{integer_polynomial, Evaluator, SequenceSpec};
use crate::generators::set::floor_at;
use crate::hp::Hp;

/// Largest prefix any stream will produce.
pub const MAX_DIGITS: usize = 100_000_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Construction {
    Champernowne,
    Polynomial {
        g: RealExpr,
        /// Skip leading `n` with `g(n) < 1` instead of emitting `0`.
        #[serde(default)]
        positive_start: bool,
    },
    Primes,
    PrimesPolynomial {
        g: RealExpr,
        #[serde(default)]
        positive_start: bool,
    },
    Explicit { digits: Vec<u32> },
    /// Repeats `digits` forever.
    Periodic { digits: Vec<u32> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StreamSpec {
    pub q: u32,
    pub construction: Construction,
}

impl StreamSpec {
    pub fn new(q: u32, construction: Construction) -> Result<Self> {
        let s = StreamSpec { q, construction };
        s.validate()?;
        Ok(s)
    }

    pub fn champernowne(q: u32) -> Result<Self> {
        StreamSpec::new(q, Construction::Champernowne)
    }

    pub fn validate(&self) -> Result<()> {
        if !(2..=36).contains(&self.q) {
            return Err(Error::domain("base must lie in 2..=36"));
        }
        match &self.construction {
            Construction::Polynomial { g, .. } | Construction::PrimesPolynomial { g, .. } => {
                let coeffs = g
                    .to_polynomial()
                    .ok_or_else(|| Error::domain(format!("`{g}` is not a polynomial in n")))?;
                if coeffs.len() < 2 || coeffs[1..].iter().all(|c| c.is_zero()) {
                    return Err(Error::domain("g must be nonconstant"));
                }
            }
            Construction::Explicit { digits } | Construction::Periodic { digits } => {
                if let Some(d) = digits.iter().find(|&&d| d >= self.q) {
                    return Err(Error::domain(format!("digit {d} is not below the base")));
                }
                if matches!(self.construction, Construction::Periodic { .. }) && digits.is_empty() {
                    return Err(Error::domain("period must be nonempty"));
                }
            }
            _ => {}
        }
        Ok(())
    }
}

enum Source {
    Counter(u64),
    Poly {
        spec: SequenceSpec,
        exact: Option<Vec<BigInt>>,
        ev: Option<Evaluator>,
        hp: Hp,
        n: u64,
        primes: Option<PrimeIter>,
        skipping: bool,
    },
    Primes(PrimeIter),
    Fixed { digits: Vec<u32>, cycle: bool, pos: usize },
}

/// Lazy single-consumer digit producer; position `p` always yields the same
/// digit.
pub struct DigitStream {
    q: u32,
    source: Source,
    pending: VecDeque<u32>,
    position: usize,
}

fn push_radix(out: &mut VecDeque<u32>, v: &BigInt, q: u32) {
    out.extend(v.to_radix_be(q).1.into_iter().map(u32::from));
}

impl DigitStream {
    pub fn new(spec: &StreamSpec) -> Result<Self> {
        spec.validate()?;
        let poly = |g: &RealExpr, positive_start: bool, over_primes: bool| -> Result<Source> {
            let spec = if over_primes {
                SequenceSpec::prime_polynomial(&[&g.to_string()])?
            } else {
                SequenceSpec::polynomial(&[&g.to_string()])?
            };
            let exact = integer_polynomial(&spec).map(|mut v| v.remove(0));
            let ev = match exact {
                Some(_) => None,
                // Indices are bounded by the digit budget.
                None => Some(Evaluator::new(&spec, MAX_DIGITS as u64 * 4)?),
            };
            let hp = Hp::new(spec.precision_bits);
            Ok(Source::Poly {
                spec,
                exact,
                ev,
                hp,
                n: 1,
                primes: over_primes.then(PrimeIter::new),
                skipping: positive_start,
            })
        };
        let source = match &spec.construction {
            Construction::Champernowne => Source::Counter(1),
            Construction::Polynomial { g, positive_start } => poly(g, *positive_start, false)?,
            Construction::PrimesPolynomial { g, positive_start } => poly(g, *positive_start, true)?,
            Construction::Primes => Source::Primes(PrimeIter::new()),
            Construction::Explicit { digits } => Source::Fixed {
                digits: digits.clone(),
                cycle: false,
                pos: 0,
            },
            Construction::Periodic { digits } => Source::Fixed {
                digits: digits.clone(),
                cycle: true,
                pos: 0,
            },
        };
        Ok(DigitStream {
            q: spec.q,
            source,
            pending: VecDeque::new(),
            position: 0,
        })
    }

    pub fn base(&self) -> u32 {
        self.q
    }

    /// Digits consumed so far.
    pub fn position(&self) -> usize {
        self.position
    }

    // Appends the next block; false when the stream is exhausted.
    fn refill(&mut self) -> Result<bool> {
        let q = self.q;
        match &mut self.source {
            Source::Counter(n) => {
                push_radix(&mut self.pending, &BigInt::from(*n), q);
                *n += 1;
            }
            Source::Primes(it) => {
                let p = it.next().expect("primes are unbounded");
                push_radix(&mut self.pending, &BigInt::from(p), q);
            }
            Source::Fixed { digits, cycle, pos } => {
                if *pos >= digits.len() {
                    if !*cycle || digits.is_empty() {
                        return Ok(false);
                    }
                    *pos = 0;
                }
                self.pending.push_back(digits[*pos]);
                *pos += 1;
            }
            Source::Poly {
                spec,
                exact,
                ev,
                hp,
                n,
                primes,
                skipping,
            } => loop {
                let arg = match primes {
                    Some(it) => it.next().expect("primes are unbounded"),
                    None => *n,
                };
                let index = *n;
                *n += 1;
                let v = match exact {
                    Some(c) => {
                        let x = BigInt::from(arg);
                        c.iter().rev().fold(BigInt::from(0), |acc, k| acc * &x + k)
                    }
                    None => floor_at(spec, ev.as_ref().expect("evaluator"), hp, index)?.remove(0),
                };
                if *skipping && v < BigInt::one() {
                    if index > 1_000_000 {
                        return Err(Error::domain("g(n) stays below 1 for the first 10^6 indices"));
                    }
                    continue;
                }
                *skipping = false;
                if v.is_negative() {
                    return Err(Error::domain(format!("floor of g is negative at n = {index}")));
                }
                push_radix(&mut self.pending, &v, q);
                break;
            },
        }
        Ok(true)
    }

    pub fn next_digit(&mut self) -> Result<Option<u32>> {
        while self.pending.is_empty() {
            if !self.refill()? {
                return Ok(None);
            }
        }
        self.position += 1;
        Ok(self.pending.pop_front())
    }

    /// The next `count` digits (fewer if a finite stream ends).
    pub fn take_digits(&mut self, count: usize) -> Result<Vec<u32>> {
        if self.position.saturating_add(count) > MAX_DIGITS {
            return Err(Error::capacity("digits", MAX_DIGITS as u64));
        }
        let mut out = Vec::with_capacity(count);
        while out.len() < count {
            match self.next_digit()? {
                Some(d) => out.push(d),
                None => break,
            }
        }
        Ok(out)
    }
}

/// First `count` digits of the stream described by `spec`.
pub fn digit_prefix(spec: &StreamSpec, count: usize) -> Result<Vec<u32>> {
    DigitStream::new(spec)?.take_digits(count)
}

pub fn champernowne_digits(q: u32, count: usize) -> Result<Vec<u32>> {
    digit_prefix(&StreamSpec::champernowne(q)?, count)
}

/// Digits as text, one character per digit.
pub fn digits_to_string(digits: &[u32]) -> String {
    digits
        .iter()
        .map(|&d| char::from_digit(d, 36).expect("digit below 36"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn text(spec: &StreamSpec, n: usize) -> String {
        digits_to_string(&digit_prefix(spec, n).unwrap())
    }

    fn poly(g: &str) -> Construction {
        Construction::Polynomial {
            g: RealExpr::parse(g).unwrap(),
            positive_start: false,
        }
    }

    #[test]
    fn champernowne_prefixes() {
        assert_eq!(digits_to_string(&champernowne_digits(10, 15).unwrap()), "123456789101112");
        assert_eq!(digits_to_string(&champernowne_digits(2, 8).unwrap()), "11011100");
        assert_eq!(digits_to_string(&champernowne_digits(10, 1).unwrap()), "1");
    }

    #[test]
    fn constructions() {
        assert_eq!(text(&StreamSpec::new(10, poly("n^2")).unwrap(), 12), "149162536496");
        assert_eq!(text(&StreamSpec::new(10, Construction::Primes).unwrap(), 10), "2357111317");
        let lin = StreamSpec::new(7, poly("n")).unwrap();
        assert_eq!(digit_prefix(&lin, 5000).unwrap(), champernowne_digits(7, 5000).unwrap());
    }

    #[test]
    fn zero_and_negative_values() {
        let s = StreamSpec::new(10, poly("n - 1")).unwrap();
        assert_eq!(text(&s, 3), "012");
        let skip = StreamSpec::new(
            10,
            Construction::Polynomial {
                g: RealExpr::parse("n - 3").unwrap(),
                positive_start: true,
            },
        )
        .unwrap();
        assert_eq!(text(&skip, 3), "123");
        let neg = StreamSpec::new(10, poly("5 - n")).unwrap();
        assert!(digit_prefix(&neg, 20).is_err());
    }

    #[test]
    fn irrational_coefficients() {
        let s = StreamSpec::new(10, poly("sqrt(2) n")).unwrap();
        // 1, 2, 4, 5, 7, 8, 9, 11
        assert_eq!(text(&s, 9), "124578911");
    }

    #[test]
    fn finite_streams() {
        let s = StreamSpec::new(
            2,
            Construction::Periodic { digits: vec![0, 1] },
        )
        .unwrap();
        assert_eq!(text(&s, 5), "01010");
        let e = StreamSpec::new(2, Construction::Explicit { digits: vec![1, 1] }).unwrap();
        assert_eq!(digit_prefix(&e, 5).unwrap().len(), 2);
    }
}
