//! Primes, real-valued families and integer sets.

pub mod log_order;
pub mod primes;
pub mod sequence;
pub mod set;

pub use log_order::{log_order_estimate, LogOrderEstimate};
pub use primes::{first_primes, nth_prime, primes_up_to, PrimeIter, SIEVE_BOUND};
pub use sequence::{
    difference_family, fractional_parts, generate_box, generate_family, integer_polynomial,
    Evaluator, PowerLogTerm, SequenceKind, SequenceSpec,
};
pub use set::{generate_set, SetEnumeration, SetSpec};
