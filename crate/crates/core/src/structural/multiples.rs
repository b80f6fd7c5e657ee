//! A set with only finitely many multiples of some `q` is not van der Corput.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::sequence::SequenceKind;
use crate::generators::set::{generate_set, SetSpec};
use crate::structural::cert::{CertificateKind, ProofMode, Recheck, RefutationCertificate};

pub const MIN_HORIZON: u64 = 1000;

/// Longest residue period examined by the exact test.
const MAX_PERIOD: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiplesCount {
    pub q: u64,
    pub count: u64,
    /// `Some(true)` if infinitely many multiples are proven to exist,
    /// `Some(false)` if proven absent, `None` if undecided.
    pub exact_infinite: Option<bool>,
}

/// `x_n = Q(n)/D` with integer `Q` and `D > 0`, for single-component
/// polynomial (or rational affine) generators with positive leading term.
fn rational_polynomial(set: &SetSpec) -> Option<(Vec<BigInt>, BigInt, u64)> {
    let (coeffs, start): (Vec<BigRational>, u64) = match &set.generator.kind {
        SequenceKind::Polynomial { components, start } if components.len() == 1 => (
            components[0].iter().map(|c| c.as_rational()).collect::<Option<_>>()?,
            *start,
        ),
        SequenceKind::Kronecker { matrix, offset, start } if matrix.len() == 1 && matrix[0].len() == 1 => {
            let b = offset.first().map_or(Some(BigRational::zero()), |o| o.as_rational())?;
            (vec![b, matrix[0][0].as_rational()?], *start)
        }
        _ => return None,
    };
    let mut coeffs = coeffs;
    while coeffs.len() > 1 && coeffs.last().map_or(false, |c| c.is_zero()) {
        coeffs.pop();
    }
    if coeffs.len() < 2 || !coeffs.last()?.is_positive() {
        return None;
    }
    let d = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let q = coeffs
        .iter()
        .map(|c| (c * BigRational::from_integer(d.clone())).to_integer())
        .collect();
    Some((q, d, start))
}

/// Whether some `n` has `q | floor(Q(n)/D)`: that happens iff
/// `Q(n) mod qD < D`, which depends only on `n mod qD`.
fn residue_hits(qp: &[BigInt], d: &BigInt, q: u64) -> Option<bool> {
    let modulus = d * BigInt::from(q);
    let period: u64 = (&modulus).try_into().ok()?;
    if period > MAX_PERIOD {
        return None;
    }
    let red: Vec<BigInt> = qp.iter().map(|c| c.mod_floor(&modulus)).collect();
    Some((0..period).any(|n| {
        let nb = BigInt::from(n);
        let v = red
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| (acc * &nb + c).mod_floor(&modulus));
        &v < d
    }))
}

/// Counts multiples of each `q` in the set up to the horizon and returns the
/// first `q` whose multiples are finite: proven so for polynomial and affine
/// generators, observed (none in the second half of the horizon) otherwise.
pub fn refute_by_multiples(
    set: &SetSpec,
    q_range: &[u64],
    horizon: u64,
) -> Result<Option<RefutationCertificate>> {
    Ok(scan_multiples(set, q_range, horizon)?.1)
}

pub fn scan_multiples(
    set: &SetSpec,
    q_range: &[u64],
    horizon: u64,
) -> Result<(Vec<MultiplesCount>, Option<RefutationCertificate>)> {
    if set.dimension() != 1 {
        return Err(Error::Dimension {
            expected: 1,
            got: set.dimension(),
        });
    }
    if horizon < MIN_HORIZON {
        return Err(Error::domain(format!("horizon must be at least {MIN_HORIZON}")));
    }
    if q_range.iter().any(|&q| q < 2) {
        return Err(Error::domain("moduli must be at least 2"));
    }
    let spec = SetSpec::new(set.generator.clone(), horizon.max(set.horizon));
    let elems = generate_set(&spec, horizon)?;
    let exact = rational_polynomial(set);
    let mut counts = Vec::new();
    for &q in q_range {
        let qb = BigInt::from(q);
        let mut found = Vec::new();
        let mut late = 0u64;
        for (e, &n) in elems.elements.iter().zip(&elems.indices) {
            let v = &e[0];
            if v.is_positive() && (v % &qb).is_zero() {
                found.push(v.clone());
                if n - spec.generator.start() >= horizon / 2 {
                    late += 1;
                }
            }
        }
        let decided = exact.as_ref().and_then(|(qp, d, _)| residue_hits(qp, d, q));
        counts.push(MultiplesCount {
            q,
            count: found.len() as u64,
            exact_infinite: decided,
        });
        let mode = match decided {
            Some(false) => Some(ProofMode::Exact),
            Some(true) => None,
            None if late == 0 => Some(ProofMode::EmpiricalUpToHorizon),
            None => None,
        };
        if let Some(mode) = mode {
            let summary = match mode {
                ProofMode::Exact => format!("no element is divisible by {q} (residue analysis)"),
                ProofMode::EmpiricalUpToHorizon => format!(
                    "{} multiples of {q} up to index {horizon}, none in the second half",
                    found.len()
                ),
            };
            let cert = RefutationCertificate {
                kind: CertificateKind::FiniteMultiples,
                summary,
                recheck: Recheck::FiniteMultiples {
                    set: set.clone(),
                    q,
                    horizon,
                    multiples_found: found,
                    mode,
                },
            };
            return Ok((counts, Some(cert)));
        }
    }
    Ok((counts, None))
}
