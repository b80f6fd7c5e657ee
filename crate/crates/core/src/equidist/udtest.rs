//! Weyl-criterion screening: moduli of normalised exponential sums over a
//! finite frequency budget compared against `τ(N) = 4/√N`.
//!
//! A "consistent" verdict is statistical evidence only; the criterion itself
//! is asymptotic.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::sequence::{fractional_parts, generate_family, SequenceSpec};
use crate::sum::block_sum2;
use crate::equidist::weyl::{cis, phase_fixed};

pub const DEFAULT_RADIUS: i64 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UdVerdict {
    ConsistentWithUd,
    InconsistentWithUd,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrequencyModulus {
    pub h: Vec<i64>,
    pub modulus: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UdReport {
    #[serde(rename = "N")]
    pub n: u64,
    pub threshold: f64,
    pub threshold_rule: String,
    pub moduli: Vec<FrequencyModulus>,
    pub max_modulus: f64,
    pub argmax: Vec<i64>,
    pub verdict: UdVerdict,
    pub note: String,
}

impl UdReport {
    pub fn consistent(&self) -> bool {
        self.verdict == UdVerdict::ConsistentWithUd
    }
}

pub fn default_threshold(n: u64) -> f64 {
    4.0 / (n as f64).sqrt()
}

/// Default budget radius by dimension: all of `|h|∞ <= 64` in one dimension,
/// shrinking in higher dimensions to keep the budget near a few hundred.
pub fn default_radius(k: usize) -> i64 {
    match k {
        1 => DEFAULT_RADIUS,
        2 => 8,
        3 => 3,
        _ => 1,
    }
}

/// One representative of each `±h` pair with `0 < |h|∞ <= radius`.
pub fn frequency_budget(k: usize, radius: i64) -> Vec<Vec<i64>> {
    let side = (2 * radius + 1) as usize;
    let total = side.pow(k as u32);
    let mut out = Vec::new();
    for flat in 0..total {
        let mut r = flat;
        let mut h = vec![0i64; k];
        for j in (0..k).rev() {
            h[j] = (r % side) as i64 - radius;
            r /= side;
        }
        if let Some(first) = h.iter().find(|&&x| x != 0) {
            if *first > 0 {
                out.push(h);
            }
        }
    }
    out.sort_by_key(|h| (h.iter().map(|x| x.abs()).max().unwrap_or(0), h.clone()));
    out
}

#[derive(Clone, Debug, Default)]
pub struct UdOptions {
    pub frequencies: Option<Vec<Vec<i64>>>,
    pub threshold: Option<f64>,
}

/// Screens fixed-point phases against the frequency budget.
pub fn ud_test_phases(points: &[Vec<u128>], opts: &UdOptions) -> Result<UdReport> {
    let k = points
        .first()
        .map(|p| p.len())
        .ok_or_else(|| Error::domain("no points"))?;
    let freqs = opts
        .frequencies
        .clone()
        .unwrap_or_else(|| frequency_budget(k, default_radius(k)));
    if freqs.is_empty() {
        return Err(Error::domain("empty frequency budget"));
    }
    let n = points.len() as u64;
    let (threshold, rule) = match opts.threshold {
        Some(t) => (t, "user".to_string()),
        None => (default_threshold(n), "4/sqrt(N)".to_string()),
    };
    let mut moduli = Vec::with_capacity(freqs.len());
    for h in &freqs {
        if h.len() != k {
            return Err(Error::Dimension {
                expected: k,
                got: h.len(),
            });
        }
        if h.iter().all(|&x| x == 0) {
            return Err(Error::domain("frequency must be nonzero"));
        }
        let (re, im) = block_sum2(points.len(), |i| cis(phase_fixed(h, &points[i])));
        moduli.push(FrequencyModulus {
            h: h.clone(),
            modulus: (re / n as f64).hypot(im / n as f64),
        });
    }
    let (argmax, max_modulus) = moduli
        .iter()
        .fold((Vec::new(), -1.0), |(bh, bm), m| {
            if m.modulus > bm {
                (m.h.clone(), m.modulus)
            } else {
                (bh, bm)
            }
        });
    let verdict = if max_modulus <= threshold {
        UdVerdict::ConsistentWithUd
    } else {
        UdVerdict::InconsistentWithUd
    };
    Ok(UdReport {
        n,
        threshold,
        threshold_rule: rule,
        moduli,
        max_modulus,
        argmax,
        verdict,
        note: "statistical screening over a finite frequency budget; not a proof".into(),
    })
}

/// Generates `N` terms of `family` and screens them.
pub fn ud_test(family: &SequenceSpec, n: usize, opts: &UdOptions) -> Result<UdReport> {
    let vals = generate_family(family, n)?;
    let phases = fractional_parts(&vals)?;
    ud_test_phases(&phases, opts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budget_shape() {
        assert_eq!(frequency_budget(1, 64).len(), 64);
        let b2 = frequency_budget(2, 2);
        assert_eq!(b2.len(), 12);
        assert!(b2.iter().all(|h| !b2.contains(&h.iter().map(|x| -x).collect())));
    }

    #[test]
    fn rational_rotation_is_caught() {
        let s = SequenceSpec::kronecker("1/3").unwrap();
        let r = ud_test(&s, 3000, &UdOptions::default()).unwrap();
        assert!(!r.consistent());
        let m3 = r.moduli.iter().find(|m| m.h == vec![3]).unwrap();
        assert_eq!(m3.modulus, 1.0);
    }
}
