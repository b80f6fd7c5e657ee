//! Measure-preserving systems on `[0, 1)`: rotations for recurrence, the
//! `×q` map for digits.

pub mod digits;
pub mod rotation;

pub use digits::{qary_digits, reconstruct, DigitMapSystem};
pub use rotation::{
    birkhoff_average, circle_overlap, overlap_monte_carlo, recurrence_scan, rotation_overlap,
    Observable, RecurrenceHit, RecurrenceReport, RotationSystem,
};
