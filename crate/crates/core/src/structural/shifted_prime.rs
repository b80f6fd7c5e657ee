//! Shifted primes `{ap + b}`: van der Corput exactly when `|a| = |b|`.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::primes::{is_prime, PrimeIter};
use crate::structural::cert::{CertificateKind, Recheck, RefutationCertificate};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShiftedPrimeVerdict {
    pub a: i64,
    pub b: i64,
    pub vdc: bool,
    pub reason: String,
    pub certificate: Option<RefutationCertificate>,
}

pub fn shifted_prime_verdict(a: i64, b: i64) -> Result<ShiftedPrimeVerdict> {
    if a == 0 || b == 0 {
        return Err(Error::domain("a and b must be nonzero"));
    }
    if a.abs() == b.abs() {
        return Ok(ShiftedPrimeVerdict {
            a,
            b,
            vdc: true,
            reason: format!("{a}p{b:+} = {a}(p{:+}), a multiple of a shifted prime p±1", b / a),
            certificate: None,
        });
    }
    let (q, exceptional, case, summary) = if b.rem_euclid(a) != 0 {
        // ap + b ≡ b ≢ 0 (mod |a|) for every prime p.
        let q = a.unsigned_abs();
        (
            q,
            Vec::new(),
            "a_does_not_divide_b".to_string(),
            format!("{a}p{b:+} ≡ {} (mod {q}) for every prime p", b.rem_euclid(a)),
        )
    } else {
        // a | b with |b| > |a|: |b| divides ap + b iff (b/a) | p, so only
        // p = |b/a| can contribute, and only when it is prime.
        let q = b.unsigned_abs();
        let ratio = (b / a).unsigned_abs();
        let exceptional = if is_prime(ratio) { vec![ratio] } else { vec![] };
        (
            q,
            exceptional.clone(),
            "b_over_a_divides_p".to_string(),
            format!(
                "{q} | {a}p{b:+} iff {ratio} | p, which holds for at most one prime ({exceptional:?})"
            ),
        )
    };
    Ok(ShiftedPrimeVerdict {
        a,
        b,
        vdc: false,
        reason: summary.clone(),
        certificate: Some(RefutationCertificate {
            kind: CertificateKind::ShiftedPrime,
            summary,
            recheck: Recheck::ShiftedPrime {
                a,
                b,
                q,
                exceptional_primes: exceptional,
                case,
            },
        }),
    })
}

/// Checks over the first 2000 primes that `q | ap + b` happens exactly for
/// the listed primes.
pub(crate) fn count_check(a: i64, b: i64, q: u64, exceptional: &[u64]) -> bool {
    let q = q as i128;
    PrimeIter::new().take(2000).all(|p| {
        let divisible = (a as i128 * p as i128 + b as i128).mod_floor(&q) == 0;
        divisible == exceptional.contains(&p)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert!(shifted_prime_verdict(1, -1).unwrap().vdc);
        assert!(shifted_prime_verdict(2, 2).unwrap().vdc);
        let v = shifted_prime_verdict(1, 2).unwrap();
        assert!(!v.vdc);
        assert!(v.certificate.unwrap().recheck().unwrap());
    }

    #[test]
    fn both_cases_recheck() {
        for (a, b) in [(3, 2), (2, 6), (1, 4), (-3, 9), (4, -1)] {
            let v = shifted_prime_verdict(a, b).unwrap();
            assert!(!v.vdc);
            assert!(v.certificate.unwrap().recheck().unwrap(), "{a} {b}");
        }
    }
}
