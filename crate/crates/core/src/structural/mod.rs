//! Necessary conditions and refutations: finite multiples, progressions,
//! the congruence criterion for polynomial sets, shifted primes, and the
//! `D_q` filter behind the sufficient condition.

pub mod cert;
pub mod dq;
pub mod kmf;
pub mod multiples;
pub mod progression;
pub mod shifted_prime;
pub mod sufficient;

pub use cert::{CertificateKind, ProofMode, Recheck, RefutationCertificate};
pub use dq::{dq_filter, reduce_basis, DqResult};
pub use kmf::{kmf_criterion, smallest_root_naive, CongruenceVerdict, IntPoly, KmfOutcome, QRoot};
pub use multiples::{refute_by_multiples, scan_multiples, MultiplesCount};
pub use progression::{progression_verdict, ProgressionVerdict};
pub use shifted_prime::{shifted_prime_verdict, ShiftedPrimeVerdict};
pub use sufficient::{
    default_samples, sufficient_condition_test, SufficientOptions, SufficientReport, XSample,
};
