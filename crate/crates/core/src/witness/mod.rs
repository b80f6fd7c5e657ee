//! Trigonometric-polynomial certificates: a set `H` is van der Corput iff for
//! every `ε > 0` some real trigonometric polynomial with spectrum in `H` has
//! `P(0) = 1` and `P >= -ε`.

pub mod fejer;
pub mod lp;
pub mod simplex;
pub mod trig;
pub mod verify;

pub use fejer::fejer_witness;
pub use lp::{lp_witness_search, LpOptions, LpOutcome};
pub use trig::{Term, Witness};
pub use verify::{verify_witness, Verdict};
