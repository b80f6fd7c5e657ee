//! Independent check of a witness against a set and a tolerance.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::witness::trig::{grid_min, Witness};

/// `|Σ a_h - 1|` accepted as `P(0) = 1`.
pub const SUM_TOL: f64 = 1.0 / (1u64 << 40) as f64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Verdict {
    /// `P >= -ε - margin` on the grid, hence `P >= -ε - 2·margin` everywhere.
    Ok { grid_min: f64, margin: f64, lower_bound: f64 },
    SpectrumViolation { h: Vec<i64> },
    /// `Σ a_h` differs from 1, or the spectrum is not symmetric.
    NormalizationViolation { coefficient_sum: f64 },
    BoundViolation { x: Vec<f64>, value: f64, margin: f64 },
}

impl Verdict {
    pub fn is_ok(&self) -> bool {
        matches!(self, Verdict::Ok { .. })
    }
}

pub fn verify_witness(
    w: &Witness,
    membership: &dyn Fn(&[i64]) -> bool,
    epsilon: f64,
    fine_grid: u64,
) -> Result<Verdict> {
    if w.grid > 0 && fine_grid < 2 * w.grid {
        return Err(Error::domain(format!(
            "verification grid {fine_grid} must be at least twice the witness grid {}",
            w.grid
        )));
    }
    if fine_grid < 2 {
        return Err(Error::domain("verification grid too small"));
    }
    for t in &w.terms {
        if t.h.len() != w.k {
            return Err(Error::Dimension {
                expected: w.k,
                got: t.h.len(),
            });
        }
        if t.h.iter().all(|&x| x == 0) || !membership(&t.h) {
            return Ok(Verdict::SpectrumViolation { h: t.h.clone() });
        }
    }
    let sum = w.coefficient_sum();
    if (sum - 1.0).abs() > SUM_TOL || !w.is_symmetric() {
        return Ok(Verdict::NormalizationViolation { coefficient_sum: sum });
    }
    let (m, at) = grid_min(w, fine_grid);
    let margin = w.lipschitz() / fine_grid as f64 / 2.0;
    if m < -epsilon - margin {
        return Ok(Verdict::BoundViolation {
            x: at.iter().map(|&i| i as f64 / fine_grid as f64).collect(),
            value: m,
            margin,
        });
    }
    Ok(Verdict::Ok {
        grid_min: m,
        margin,
        lower_bound: m - margin,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::witness::fejer::fejer_witness;

    #[test]
    fn fejer_against_integers() {
        let w = fejer_witness(&[1], 11).unwrap();
        let v = verify_witness(&w, &|_| true, 0.1, 1 << 12).unwrap();
        assert!(v.is_ok(), "{v:?}");
    }

    #[test]
    fn spectrum_violation() {
        let w = fejer_witness(&[3], 11).unwrap();
        let v = verify_witness(&w, &|h| (h[0] - 1).rem_euclid(3) == 0, 0.1, 1 << 12).unwrap();
        assert!(matches!(v, Verdict::SpectrumViolation { .. }));
    }

    #[test]
    fn cosine_bound_violation_at_half() {
        let w = fejer_witness(&[1], 2).unwrap();
        match verify_witness(&w, &|_| true, 0.5, 1 << 10).unwrap() {
            Verdict::BoundViolation { x, value, .. } => {
                assert_eq!(x, vec![0.5]);
                assert_eq!(value, -1.0);
            }
            other => panic!("{other:?}"),
        }
    }
}
