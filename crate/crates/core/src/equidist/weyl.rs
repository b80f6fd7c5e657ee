//! Normalised exponential sums `(1/N) Σ e(h·x_n)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::sequence::{fractional_parts, generate_box, SequenceSpec};
use crate::sum::block_sum2;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeylReport {
    pub frequency: Vec<i64>,
    #[serde(rename = "N")]
    pub n: u64,
    pub re: f64,
    pub im: f64,
    pub modulus: f64,
}

impl WeylReport {
    fn new(frequency: Vec<i64>, n: u64, (re, im): (f64, f64)) -> Self {
        let (re, im) = (re / n as f64, im / n as f64);
        WeylReport {
            frequency,
            n,
            re,
            im,
            modulus: re.hypot(im),
        }
    }
}

/// `e(t)` for a phase `t = phase / 2^64`. Quarter turns are handled exactly,
/// so phases 0, 1/4, 1/2, 3/4 give exact unit values.
pub fn cis(phase: u64) -> (f64, f64) {
    let quadrant = phase >> 62;
    let rest = phase & ((1u64 << 62) - 1);
    let angle = rest as f64 * (std::f64::consts::TAU / 18446744073709551616.0);
    let (s, c) = angle.sin_cos();
    match quadrant {
        0 => (c, s),
        1 => (-s, c),
        2 => (-c, -s),
        _ => (s, -c),
    }
}

/// `{h·x}` as a 64-bit phase from 128-bit fixed-point coordinates.
#[inline]
pub fn phase_fixed(h: &[i64], x: &[u128]) -> u64 {
    let mut acc: u128 = 0;
    for (hj, xj) in h.iter().zip(x) {
        acc = acc.wrapping_add((*hj as i128 as u128).wrapping_mul(*xj));
    }
    (acc >> 64) as u64
}

fn phase_f64(h: &[i64], x: &[f64]) -> u64 {
    let mut t = 0.0f64;
    for (hj, xj) in h.iter().zip(x) {
        let v = *hj as f64 * xj;
        t += v - v.floor();
    }
    let t = t - t.floor();
    (t * 18446744073709551616.0) as u64
}

fn check_frequency(h: &[i64], k: usize) -> Result<()> {
    if h.len() != k {
        return Err(Error::Dimension {
            expected: k,
            got: h.len(),
        });
    }
    if h.iter().all(|&x| x == 0) {
        return Err(Error::domain("frequency must be nonzero"));
    }
    Ok(())
}

/// Weyl sum of explicit points.
pub fn weyl_sum(points: &[Vec<f64>], h: &[i64]) -> Result<WeylReport> {
    let first = points.first().ok_or_else(|| Error::domain("no points"))?;
    check_frequency(h, first.len())?;
    if points.iter().any(|p| p.len() != first.len()) {
        return Err(Error::domain("points must share a dimension"));
    }
    let s = block_sum2(points.len(), |i| cis(phase_f64(h, &points[i])));
    Ok(WeylReport::new(h.to_vec(), points.len() as u64, s))
}

/// Weyl sum of fixed-point phases (as produced by `fractional_parts`).
pub fn weyl_sum_fixed(points: &[Vec<u128>], h: &[i64]) -> Result<WeylReport> {
    let first = points.first().ok_or_else(|| Error::domain("no points"))?;
    check_frequency(h, first.len())?;
    let s = block_sum2(points.len(), |i| cis(phase_fixed(h, &points[i])));
    Ok(WeylReport::new(h.to_vec(), points.len() as u64, s))
}

/// Average of `e(h·x_n)` over the box `start <= n_j < start + N_j`.
pub fn weyl_sum_box(family: &SequenceSpec, h: &[i64], dims: &[u64]) -> Result<WeylReport> {
    check_frequency(h, family.dimension())?;
    let vals = generate_box(family, dims)?;
    let phases = fractional_parts(&vals)?;
    weyl_sum_fixed(&phases, h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_cases() {
        let r = weyl_sum(&vec![vec![0.0]; 5], &[1]).unwrap();
        assert_eq!((r.re, r.im), (1.0, 0.0));
        let r = weyl_sum(&[vec![0.0], vec![0.5]], &[1]).unwrap();
        assert_eq!(r.modulus, 0.0);
        assert!(weyl_sum(&[vec![0.1]], &[0]).is_err());
    }

    #[test]
    fn cis_quarters() {
        assert_eq!(cis(0), (1.0, 0.0));
        assert_eq!(cis(1 << 62), (0.0, 1.0));
        assert_eq!(cis(1 << 63), (-1.0, 0.0));
        let (c, s) = cis(1 << 61);
        assert!((c - s).abs() < 1e-15);
    }
}
