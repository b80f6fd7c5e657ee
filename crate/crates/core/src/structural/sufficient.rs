//! Empirical check of the sufficient condition: for each `q`, the sequence
//! `h_n^{(q)} · x` over `D_q` should be uniformly distributed mod 1 for every
//! `x ∉ Q^m`. Finite samples can only support the hypothesis, never prove it.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::equidist::udtest::{default_threshold, ud_test_phases, UdOptions};
use crate::error::{Error, Result};
use crate::expr::RealExpr;
use crate::generators::sequence::SequenceSpec;
use crate::hp::{fract_fixed128, to_rational, Hp};
use crate::structural::dq::{factorial, reduce_basis, sampled_rank, scan, BasisValues, MAX_FACTORIAL_BITS};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct XSample {
    pub label: String,
    pub coords: Vec<RealExpr>,
}

const SMALL_PRIMES: [u64; 10] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29];

/// An algebraic sample `(√2, √3, √5, ...)`, a sample with a rational first
/// coordinate (when `m >= 2`), and a random one `(√r_1, ..., √r_m)` with
/// seeded non-square `r_j`.
pub fn default_samples(m: usize, seed: u64) -> Vec<XSample> {
    let sqrt = |v: u64| RealExpr::parse(&format!("sqrt({v})")).expect("valid");
    let alg: Vec<RealExpr> = (0..m).map(|j| sqrt(SMALL_PRIMES[j % SMALL_PRIMES.len()] + 30 * (j / 10) as u64)).collect();
    let mut out = vec![XSample {
        label: "algebraic".into(),
        coords: alg.clone(),
    }];
    if m >= 2 {
        let mut mixed = alg;
        mixed[0] = RealExpr::ratio(1, 2);
        out.push(XSample {
            label: "mixed_rational".into(),
            coords: mixed,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random = (0..m)
        .map(|_| loop {
            let r: u64 = rng.gen_range(2..1_000_000);
            let s = (r as f64).sqrt() as u64;
            if s * s != r && (s + 1) * (s + 1) != r {
                break sqrt(r);
            }
        })
        .collect();
    out.push(XSample {
        label: "random".into(),
        coords: random,
    });
    out
}

#[derive(Clone, Debug)]
pub struct SufficientOptions {
    /// Points per test.
    pub n: usize,
    /// Largest generator index scanned while collecting `D_q`.
    pub max_index: u64,
    /// Threshold is `factor · 4/√N`.
    pub threshold_factor: f64,
    pub frequencies: Option<Vec<Vec<i64>>>,
    pub max_factorial_bits: u64,
}

impl Default for SufficientOptions {
    fn default() -> Self {
        SufficientOptions {
            n: 10_000,
            max_index: 10_000_000,
            threshold_factor: 1.0,
            frequencies: None,
            max_factorial_bits: MAX_FACTORIAL_BITS,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleTest {
    pub label: String,
    pub x: Vec<String>,
    pub max_modulus: f64,
    pub argmax: Vec<i64>,
    pub threshold: f64,
    pub consistent: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QStatus {
    Tested,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QEntry {
    pub q: u64,
    pub status: QStatus,
    pub elements: usize,
    pub last_index: u64,
    pub tests: Vec<SampleTest>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub q: u64,
    pub label: String,
    pub h: Vec<i64>,
    pub modulus: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SufficientReport {
    pub basis: Vec<usize>,
    pub requested_basis: Option<Vec<usize>>,
    pub sampled_rank: usize,
    pub warnings: Vec<String>,
    pub per_q: Vec<QEntry>,
    pub hypothesis_consistent: bool,
    pub failing: Option<Failure>,
    pub note: String,
}

fn fixed_coords(x: &[RealExpr]) -> Result<Vec<u128>> {
    let mut hp = Hp::new(256);
    x.iter()
        .map(|e| Ok(fract_fixed128(&to_rational(&e.eval(&mut hp, None)?)?)))
        .collect()
}

fn is_rational_vector(x: &[RealExpr]) -> bool {
    x.iter().all(|e| e.as_rational().is_some())
}

// {h·x} as a 128-bit phase; exact up to Σ|h_j| 2^-128.
fn dot_phase(h: &[BigInt], x: &[u128], modulus: &BigInt) -> u128 {
    let mut acc: u128 = 0;
    for (hj, xj) in h.iter().zip(x) {
        let r = hj.mod_floor(modulus).to_u128().expect("reduced below 2^128");
        acc = acc.wrapping_add(r.wrapping_mul(*xj));
    }
    acc
}

/// Runs the screening for every `q` and sample. When `basis` is `None` a
/// Q-independent basis is chosen greedily from sampled values.
pub fn sufficient_condition_test(
    g: &SequenceSpec,
    basis: Option<&[usize]>,
    q_list: &[u64],
    x_samples: &[XSample],
    opts: &SufficientOptions,
) -> Result<SufficientReport> {
    let chosen = match basis {
        Some(b) => b.to_vec(),
        None => reduce_basis(g)?,
    };
    let m = chosen.len();
    let rank = sampled_rank(g, &chosen)?;
    let mut warnings = Vec::new();
    if rank < m {
        warnings.push(format!(
            "sampled rank {rank} < {m}: basis components look Q-dependent; pass no basis to reduce automatically"
        ));
    }
    for s in x_samples {
        if s.coords.len() != m {
            return Err(Error::Dimension {
                expected: m,
                got: s.coords.len(),
            });
        }
        if is_rational_vector(&s.coords) {
            return Err(Error::domain(format!("sample `{}` lies in Q^m", s.label)));
        }
    }
    let xs: Vec<Vec<u128>> = x_samples.iter().map(|s| fixed_coords(&s.coords)).collect::<Result<_>>()?;
    let start = g.start();
    let values = BasisValues::new(g, &chosen, opts.max_index)?;
    let two128 = BigInt::from(1) << 128usize;
    let limit = BigInt::from(1) << 88usize;
    let mut per_q = Vec::new();
    let mut failing = None;
    for &q in q_list {
        let fact = factorial(q, opts.max_factorial_bits)?;
        let mut collected: Vec<(u64, Vec<BigInt>)> = Vec::new();
        let mut from = start;
        let mut chunk = (opts.n as u64).max(1024);
        while collected.len() < opts.n && from < opts.max_index {
            let count = chunk.min(opts.max_index - from);
            collected.extend(scan(&values, &fact, from, count)?);
            from += count;
            chunk = chunk.saturating_mul(2);
        }
        collected.truncate(opts.n);
        let last_index = collected.last().map_or(0, |c| c.0);
        if collected.is_empty() {
            per_q.push(QEntry {
                q,
                status: QStatus::Inconclusive,
                elements: 0,
                last_index,
                tests: vec![],
            });
            continue;
        }
        if collected.len() < opts.n {
            warnings.push(format!(
                "q = {q}: only {} elements of D_q below index {}",
                collected.len(),
                opts.max_index
            ));
        }
        if let Some((n, _)) = collected.iter().find(|(_, h)| h.iter().any(|v| v.abs() >= limit)) {
            return Err(Error::precision(*n, "basis values beyond 2^88 exceed the fixed-point phase budget"));
        }
        let mut tests = Vec::new();
        for (s, x) in x_samples.iter().zip(&xs) {
            let phases: Vec<Vec<u128>> = collected
                .iter()
                .map(|(_, h)| vec![dot_phase(h, x, &two128)])
                .collect();
            let threshold = opts.threshold_factor * default_threshold(phases.len() as u64);
            let rep = ud_test_phases(
                &phases,
                &UdOptions {
                    frequencies: opts.frequencies.clone(),
                    threshold: Some(threshold),
                },
            )?;
            let consistent = rep.consistent();
            if !consistent && failing.is_none() {
                failing = Some(Failure {
                    q,
                    label: s.label.clone(),
                    h: rep.argmax.clone(),
                    modulus: rep.max_modulus,
                });
            }
            tests.push(SampleTest {
                label: s.label.clone(),
                x: s.coords.iter().map(|c| c.to_string()).collect(),
                max_modulus: rep.max_modulus,
                argmax: rep.argmax,
                threshold,
                consistent,
            });
        }
        per_q.push(QEntry {
            q,
            status: QStatus::Tested,
            elements: collected.len(),
            last_index,
            tests,
        });
    }
    let hypothesis_consistent = failing.is_none() && per_q.iter().all(|e| e.status == QStatus::Tested);
    Ok(SufficientReport {
        basis: chosen,
        requested_basis: basis.map(|b| b.to_vec()),
        sampled_rank: rank,
        warnings,
        per_q,
        hypothesis_consistent,
        failing,
        note: "supporting evidence from finite samples; not a proof".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_family_with_golden_ratio() {
        let g = SequenceSpec::polynomial(&["n"]).unwrap();
        let x = vec![XSample {
            label: "phi".into(),
            coords: vec![RealExpr::parse("phi").unwrap()],
        }];
        let r = sufficient_condition_test(&g, Some(&[0]), &[1, 2, 3], &x, &SufficientOptions::default()).unwrap();
        assert!(r.hypothesis_consistent, "{r:?}");
    }

    #[test]
    fn dependent_pair_reduces_to_one_component() {
        let g = SequenceSpec::polynomial(&["n^2", "n^2"]).unwrap();
        let x = default_samples(1, 7);
        let r = sufficient_condition_test(&g, None, &[1, 2], &x, &SufficientOptions::default()).unwrap();
        assert_eq!(r.basis, vec![0]);
        assert!(r.hypothesis_consistent, "{r:?}");
    }

    #[test]
    fn rational_samples_rejected() {
        let g = SequenceSpec::polynomial(&["n"]).unwrap();
        let x = vec![XSample {
            label: "half".into(),
            coords: vec![RealExpr::ratio(1, 2)],
        }];
        assert!(sufficient_condition_test(&g, Some(&[0]), &[1], &x, &SufficientOptions::default()).is_err());
    }
}
