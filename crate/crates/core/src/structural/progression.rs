//! Arithmetic progressions `{an + b}`: van der Corput exactly when `a | b`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::structural::cert::{CertificateKind, Recheck, RefutationCertificate};
use crate::structural::kmf::{kmf_criterion, IntPoly, QRoot};

/// Moduli for which the congruence roots are attached to a positive verdict.
pub const ROOT_TABLE_Q: u64 = 24;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ProgressionVerdict {
    Vdc { a: i64, b: i64, roots: Vec<QRoot> },
    NotVdc { certificate: RefutationCertificate },
}

impl ProgressionVerdict {
    pub fn is_vdc(&self) -> bool {
        matches!(self, ProgressionVerdict::Vdc { .. })
    }
}

pub fn progression_verdict(a: i64, b: i64) -> Result<ProgressionVerdict> {
    if a < 1 {
        return Err(Error::domain("progression step a must be at least 1"));
    }
    if b.rem_euclid(a) != 0 {
        return Ok(ProgressionVerdict::NotVdc {
            certificate: RefutationCertificate {
                kind: CertificateKind::ProgressionDivisibility,
                summary: format!(
                    "{a}n{b:+} ≡ {} (mod {a}) for every n, so no element is a multiple of {a}",
                    b.rem_euclid(a)
                ),
                recheck: Recheck::ProgressionDivisibility { a, b },
            },
        });
    }
    // a | b: z = -b/a is a root of az + b modulo every q.
    let v = kmf_criterion(&IntPoly::from_i64(&[b, a]), ROOT_TABLE_Q)?;
    Ok(ProgressionVerdict::Vdc { a, b, roots: v.roots })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert!(!progression_verdict(2, 1).unwrap().is_vdc());
        assert!(progression_verdict(3, 6).unwrap().is_vdc());
        assert!(progression_verdict(1, 0).unwrap().is_vdc());
        assert!(!progression_verdict(4, 2).unwrap().is_vdc());
    }

    #[test]
    fn roots_attached() {
        match progression_verdict(3, 6).unwrap() {
            ProgressionVerdict::Vdc { roots, .. } => {
                assert_eq!(roots.len(), 24);
                assert!(roots.iter().all(|r| r.root.map_or(false, |z| (3 * z + 6) % r.q == 0)));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn certificate_rechecks() {
        if let ProgressionVerdict::NotVdc { certificate } = progression_verdict(5, 3).unwrap() {
            assert!(certificate.recheck().unwrap());
        } else {
            panic!();
        }
    }
}
