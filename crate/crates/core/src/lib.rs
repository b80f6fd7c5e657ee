//! Verification and refutation tools for van der Corput sets: equidistribution
//! diagnostics, trigonometric-polynomial certificates, structural criteria,
//! recurrence on circle rotations and normal-number digit streams.

pub mod dynamics;
pub mod equidist;
pub mod error;
pub mod expr;
pub mod generators;
pub mod bigser;
pub mod hp;
pub mod normal;
pub mod real;
pub mod report;
pub mod structural;
pub mod sum;
pub mod witness;

pub use error::{Error, Result};
pub use expr::RealExpr;
pub use generators::{SequenceKind, SequenceSpec, SetSpec};
pub use real::Real;
