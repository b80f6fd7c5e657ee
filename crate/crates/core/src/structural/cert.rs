//! Refutation certificates. Each stores everything needed to repeat its
//! check, under the `recheck` key.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::generators::set::SetSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    FiniteMultiples,
    ProgressionDivisibility,
    CongruenceObstruction,
    ShiftedPrime,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProofMode {
    /// Decided for the whole set by residue analysis.
    Exact,
    /// Observed up to the horizon only.
    EmpiricalUpToHorizon,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Recheck {
    FiniteMultiples {
        set: SetSpec,
        q: u64,
        horizon: u64,
        #[serde(serialize_with = "crate::bigser::vec", deserialize_with = "crate::bigser::de_vec")]
        multiples_found: Vec<BigInt>,
        mode: ProofMode,
    },
    ProgressionDivisibility { a: i64, b: i64 },
    CongruenceObstruction {
        #[serde(serialize_with = "crate::bigser::vec", deserialize_with = "crate::bigser::de_vec")]
        coefficients: Vec<BigInt>,
        q: u64,
        residues: Vec<u64>,
    },
    ShiftedPrime {
        a: i64,
        b: i64,
        q: u64,
        /// Primes `p` for which `q | ap + b`; at most one.
        exceptional_primes: Vec<u64>,
        case: String,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RefutationCertificate {
    pub kind: CertificateKind,
    pub summary: String,
    pub recheck: Recheck,
}

impl RefutationCertificate {
    /// Repeats the certificate's checks from its stored parameters.
    pub fn recheck(&self) -> Result<bool> {
        use crate::structural::{kmf, multiples, progression, shifted_prime};
        Ok(match &self.recheck {
            Recheck::FiniteMultiples {
                set,
                q,
                horizon,
                multiples_found,
                mode,
            } => match multiples::refute_by_multiples(set, &[*q], *horizon)? {
                Some(c) => match c.recheck {
                    Recheck::FiniteMultiples {
                        multiples_found: m2,
                        mode: md2,
                        ..
                    } => &m2 == multiples_found && md2 == *mode,
                    _ => false,
                },
                None => false,
            },
            Recheck::ProgressionDivisibility { a, b } => {
                !progression::progression_verdict(*a, *b)?.is_vdc()
            }
            Recheck::CongruenceObstruction {
                coefficients,
                q,
                residues,
            } => {
                let p = kmf::IntPoly::new(coefficients.clone());
                let red = p.reduce(*q);
                let table: Vec<u64> = (0..*q).map(|z| p.eval_mod(&red, z, *q)).collect();
                &table == residues && table.iter().all(|&r| r != 0)
            }
            Recheck::ShiftedPrime {
                a,
                b,
                q,
                exceptional_primes,
                ..
            } => match shifted_prime::shifted_prime_verdict(*a, *b)?.certificate {
                Some(RefutationCertificate {
                    recheck:
                        Recheck::ShiftedPrime {
                            q: q2,
                            exceptional_primes: e2,
                            ..
                        },
                    ..
                }) => q2 == *q && &e2 == exceptional_primes && shifted_prime::count_check(*a, *b, *q, &e2),
                _ => false,
            },
        })
    }
}
