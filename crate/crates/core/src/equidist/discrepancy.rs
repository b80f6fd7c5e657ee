//! One-dimensional star discrepancy.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiscrepancyMethod {
    Fast,
    Oracle,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyReport {
    #[serde(rename = "N")]
    pub n: u64,
    pub dstar: f64,
    pub method: DiscrepancyMethod,
}

/// Largest input accepted by the quadratic oracle.
pub const ORACLE_MAX: usize = 2000;

pub fn star_discrepancy(points: &[f64], method: DiscrepancyMethod) -> Result<DiscrepancyReport> {
    if points.is_empty() {
        return Err(Error::domain("no points"));
    }
    if let Some(x) = points.iter().find(|x| !(**x >= 0.0 && **x < 1.0)) {
        return Err(Error::domain(format!("point {x} outside [0,1)")));
    }
    let dstar = match method {
        DiscrepancyMethod::Fast => fast(points),
        DiscrepancyMethod::Oracle => {
            if points.len() > ORACLE_MAX {
                return Err(Error::capacity("discrepancy oracle size", ORACLE_MAX as u64));
            }
            oracle(points)
        }
    };
    Ok(DiscrepancyReport {
        n: points.len() as u64,
        dstar,
        method,
    })
}

// D* = max_i max(i/N - x_(i), x_(i) - (i-1)/N) over the sorted sample.
fn fast(points: &[f64]) -> f64 {
    let mut xs = points.to_vec();
    xs.sort_by(|a, b| a.total_cmp(b));
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| ((i + 1) as f64 / n - x).max(x - i as f64 / n))
        .fold(0.0, f64::max)
}

// Direct maximisation of |#{x_n < t}/N - t| over every point and its right
// limit, counting afresh for each candidate.
fn oracle(points: &[f64]) -> f64 {
    let n = points.len() as f64;
    let mut best = 0.0f64;
    for &t in points {
        let lt = points.iter().filter(|&&x| x < t).count() as f64;
        let le = points.iter().filter(|&&x| x <= t).count() as f64;
        best = best.max(t - lt / n).max(le / n - t);
    }
    // t -> 1 from below: every point counts.
    let max = points.iter().copied().fold(0.0, f64::max);
    best.max(1.0 - max).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_point_at_zero() {
        let r = star_discrepancy(&[0.0], DiscrepancyMethod::Fast).unwrap();
        assert_eq!(r.dstar, 1.0);
        assert_eq!(star_discrepancy(&[0.0], DiscrepancyMethod::Oracle).unwrap().dstar, 1.0);
    }

    #[test]
    fn regular_grid() {
        let pts: Vec<f64> = (0..10).map(|j| j as f64 / 10.0).collect();
        let f = star_discrepancy(&pts, DiscrepancyMethod::Fast).unwrap().dstar;
        let o = star_discrepancy(&pts, DiscrepancyMethod::Oracle).unwrap().dstar;
        assert!((f - 0.1).abs() < 1e-15 && (o - 0.1).abs() < 1e-15);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(star_discrepancy(&[1.0], DiscrepancyMethod::Fast).is_err());
        assert!(star_discrepancy(&[-0.1], DiscrepancyMethod::Fast).is_err());
        assert!(star_discrepancy(&vec![0.5; 2001], DiscrepancyMethod::Oracle).is_err());
    }
}
