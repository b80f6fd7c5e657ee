//! Solvability of `P(z) ≡ 0 (mod q)` for every `q <= q_max`: roots modulo
//! prime powers by Hensel lifting, combined by the Chinese remainder theorem.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const Q_MAX_LIMIT: u64 = 100_000;

/// Above this many CRT combinations the smallest root is found by direct
/// enumeration instead.
const MAX_COMBINATIONS: usize = 1_000_000;

/// Integer polynomial, constant term first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntPoly {
    #[serde(serialize_with = "crate::bigser::vec", deserialize_with = "crate::bigser::de_vec")]
    pub coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.len() > 1 && coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        IntPoly::new(c.iter().map(|&v| v.into()).collect())
    }

    /// Parses an integer polynomial expression such as `z^2+1`.
    pub fn parse(s: &str) -> Result<Self> {
        let e = crate::expr::RealExpr::parse(s)?;
        let cs = e
            .to_polynomial()
            .ok_or_else(|| Error::domain(format!("`{s}` is not a polynomial")))?;
        let ints = cs
            .iter()
            .map(|c| {
                c.as_rational()
                    .filter(|r| r.is_integer())
                    .map(|r| r.to_integer())
                    .ok_or_else(|| Error::domain(format!("coefficient `{c}` is not an integer")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(IntPoly::new(ints))
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, z: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * z + c)
    }

    /// `P(z) mod m` for `m <= 2^32`.
    pub fn eval_mod(&self, reduced: &[u64], z: u64, m: u64) -> u64 {
        let z = (z % m) as u128;
        let m128 = m as u128;
        reduced
            .iter()
            .rev()
            .fold(0u128, |acc, &c| (acc * z + c as u128) % m128) as u64
    }

    pub fn reduce(&self, m: u64) -> Vec<u64> {
        let mb = BigInt::from(m);
        self.coeffs
            .iter()
            .map(|c| c.mod_floor(&mb).to_u64().expect("reduced below modulus"))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QRoot {
    pub q: u64,
    pub root: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum KmfOutcome {
    /// Every `q <= verified_up_to` has a root. With `exact_for_all_q` the
    /// conclusion holds for all `q` (root 0 when `P(0) = 0`).
    AllRootsFound { verified_up_to: u64, exact_for_all_q: bool },
    /// No root modulo `q`; `residues[z] = P(z) mod q`.
    ObstructionAtQ { q: u64, residues: Vec<u64> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CongruenceVerdict {
    pub polynomial: IntPoly,
    pub q_max: u64,
    pub roots: Vec<QRoot>,
    pub outcome: KmfOutcome,
}

impl CongruenceVerdict {
    pub fn is_obstructed(&self) -> bool {
        matches!(self.outcome, KmfOutcome::ObstructionAtQ { .. })
    }

    /// Re-evaluates every recorded root (and the obstruction table) with
    /// big-integer arithmetic.
    pub fn recheck(&self) -> bool {
        let roots_ok = self.roots.iter().all(|r| match r.root {
            Some(z) => (self.polynomial.eval(&BigInt::from(z)) % BigInt::from(r.q)).is_zero(),
            None => true,
        });
        let obstruction_ok = match &self.outcome {
            KmfOutcome::ObstructionAtQ { q, residues } => {
                residues.len() as u64 == *q
                    && residues.iter().enumerate().all(|(z, &r)| {
                        r != 0 && self.polynomial.eval(&BigInt::from(z)).mod_floor(&BigInt::from(*q)) == BigInt::from(r)
                    })
            }
            KmfOutcome::AllRootsFound { .. } => true,
        };
        roots_ok && obstruction_ok
    }
}

/// Smallest `z in [0, q)` with `P(z) ≡ 0 (mod q)` by direct enumeration.
pub fn smallest_root_naive(p: &IntPoly, q: u64) -> Option<u64> {
    let red = p.reduce(q);
    (0..q).find(|&z| p.eval_mod(&red, z, q) == 0)
}

fn smallest_prime_factors(n: u64) -> Vec<u64> {
    let n = n as usize;
    let mut spf = vec![0u64; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            let mut j = i;
            while j <= n {
                if spf[j] == 0 {
                    spf[j] = i as u64;
                }
                j += i;
            }
        }
    }
    spf
}

fn factor(mut q: u64, spf: &[u64]) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u32)> = Vec::new();
    while q > 1 {
        let p = spf[q as usize];
        let mut e = 0;
        while q % p == 0 {
            q /= p;
            e += 1;
        }
        out.push((p, e));
    }
    out
}

/// All roots modulo `p^e`, ascending, by lifting roots modulo `p^i`.
pub fn roots_mod_prime_power(poly: &IntPoly, p: u64, e: u32) -> Vec<u64> {
    let mut m = p;
    let red = poly.reduce(m);
    let mut roots: Vec<u64> = (0..p).filter(|&z| poly.eval_mod(&red, z, m) == 0).collect();
    for _ in 1..e {
        let next = m * p;
        let red = poly.reduce(next);
        let mut lifted = Vec::new();
        for &r in &roots {
            for t in 0..p {
                let c = r + t * m;
                if poly.eval_mod(&red, c, next) == 0 {
                    lifted.push(c);
                }
            }
        }
        lifted.sort_unstable();
        roots = lifted;
        m = next;
        if roots.is_empty() {
            break;
        }
    }
    roots
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    let e = (a as i128).extended_gcd(&(m as i128));
    e.x.rem_euclid(m as i128) as u64
}

/// Smallest root modulo `q` from prime-power root sets.
fn smallest_root_crt(parts: &[(u64, Vec<u64>)]) -> Option<u64> {
    if parts.iter().any(|(_, r)| r.is_empty()) {
        return None;
    }
    let q: u64 = parts.iter().map(|(m, _)| m).product();
    // Basis e_i ≡ 1 mod m_i, ≡ 0 mod the others.
    let basis: Vec<u128> = parts
        .iter()
        .map(|(m, _)| {
            let rest = q / m;
            (rest as u128 * mod_inverse(rest % m, *m) as u128) % q as u128
        })
        .collect();
    let mut best = u64::MAX;
    let mut idx = vec![0usize; parts.len()];
    loop {
        let mut x: u128 = 0;
        for (i, (_, rs)) in parts.iter().enumerate() {
            x = (x + rs[idx[i]] as u128 * basis[i]) % q as u128;
        }
        best = best.min(x as u64);
        let mut i = 0;
        loop {
            if i == parts.len() {
                return Some(best);
            }
            idx[i] += 1;
            if idx[i] < parts[i].1.len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

pub fn kmf_criterion(poly: &IntPoly, q_max: u64) -> Result<CongruenceVerdict> {
    if poly.degree() == 0 {
        return Err(Error::domain("polynomial must be nonconstant"));
    }
    if !poly.coeffs.last().map_or(false, |c| c.is_positive()) {
        return Err(Error::domain("polynomial must tend to +infinity (positive leading coefficient)"));
    }
    if q_max == 0 || q_max > Q_MAX_LIMIT {
        return Err(Error::domain(format!("q_max must lie in 1..={Q_MAX_LIMIT}")));
    }
    if poly.coeffs[0].is_zero() {
        return Ok(CongruenceVerdict {
            polynomial: poly.clone(),
            q_max,
            roots: (1..=q_max).map(|q| QRoot { q, root: Some(0) }).collect(),
            outcome: KmfOutcome::AllRootsFound {
                verified_up_to: q_max,
                exact_for_all_q: true,
            },
        });
    }
    let spf = smallest_prime_factors(q_max);
    let mut cache: HashMap<(u64, u32), Vec<u64>> = HashMap::new();
    let mut roots = Vec::with_capacity(q_max as usize);
    for q in 1..=q_max {
        let parts: Vec<(u64, Vec<u64>)> = factor(q, &spf)
            .into_iter()
            .map(|(p, e)| {
                let r = cache
                    .entry((p, e))
                    .or_insert_with(|| roots_mod_prime_power(poly, p, e))
                    .clone();
                (p.pow(e), r)
            })
            .collect();
        let combos: usize = parts.iter().map(|(_, r)| r.len().max(1)).product();
        let root = if q == 1 {
            Some(0)
        } else if combos > MAX_COMBINATIONS {
            smallest_root_naive(poly, q)
        } else {
            smallest_root_crt(&parts)
        };
        roots.push(QRoot { q, root });
        if root.is_none() {
            let red = poly.reduce(q);
            let residues = (0..q).map(|z| poly.eval_mod(&red, z, q)).collect();
            return Ok(CongruenceVerdict {
                polynomial: poly.clone(),
                q_max,
                roots,
                outcome: KmfOutcome::ObstructionAtQ { q, residues },
            });
        }
    }
    Ok(CongruenceVerdict {
        polynomial: poly.clone(),
        q_max,
        roots,
        outcome: KmfOutcome::AllRootsFound {
            verified_up_to: q_max,
            exact_for_all_q: false,
        },
    })
}
