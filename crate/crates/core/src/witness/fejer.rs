//! Witnesses from the Fejér kernel.

use crate::error::{Error, Result};
use crate::witness::trig::{l1, Witness};

/// `P(x) = (F_K(m·x) - 1)/(K - 1)` with `F_K(x) = Σ_{|j|<K} (1 - |j|/K) e(jx)`.
/// Coefficients are `a_{jm} = (1 - |j|/K)/(K - 1)` for `1 <= |j| < K`;
/// `P(0) = 1` and `min P = -1/(K-1)` since `F_K >= 0` vanishes on the grid
/// `{i/K}`.
pub fn fejer_witness(m: &[i64], k_order: u64) -> Result<Witness> {
    if k_order < 2 {
        return Err(Error::domain("Fejér order K must be at least 2"));
    }
    if m.is_empty() || m.iter().all(|&x| x == 0) {
        return Err(Error::domain("sublattice generator must be nonzero"));
    }
    let kf = k_order as f64;
    let pairs: Vec<(Vec<i64>, f64)> = (1..k_order as i64)
        .map(|j| {
            let h = m.iter().map(|x| x * j).collect();
            (h, (1.0 - j as f64 / kf) / (kf - 1.0))
        })
        .collect();
    let mut w = Witness::from_pairs(m.len(), &pairs)?;
    let min = -1.0 / (kf - 1.0);
    w.epsilon = -min;
    w.certified_min = min;
    w.margin = 0.0;
    w.grid = (4 * w.max_l1() as u64).max(64).next_power_of_two();
    debug_assert!(l1(m) > 0);
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::witness::trig::grid_min;

    #[test]
    fn order_two_is_cosine() {
        let w = fejer_witness(&[1], 2).unwrap();
        assert_eq!(w.terms.len(), 2);
        assert!(w.terms.iter().all(|t| t.a == 0.5));
        assert_eq!(w.certified_min, -1.0);
        assert_eq!(grid_min(&w, 1024).0, -1.0);
    }

    #[test]
    fn order_eleven() {
        let w = fejer_witness(&[3], 11).unwrap();
        assert!((w.coefficient_sum() - 1.0).abs() < 1e-15);
        assert!(w.terms.iter().all(|t| t.h[0] % 3 == 0 && t.h[0].abs() <= 30));
        let (m, _) = grid_min(&w, 1 << 12);
        assert!(m >= -0.1 - 1e-12);
        assert!(fejer_witness(&[1], 1).is_err());
    }
}
