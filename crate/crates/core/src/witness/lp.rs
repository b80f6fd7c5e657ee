//! Witness search by linear programming on a grid.
//!
//! With `c_i = 2 a_{h_i}` for one representative `h_i` of each `±h` pair,
//! `P(x) = Σ c_i cos(2π h_i·x)` and `P(0) = Σ c_i = 1`. Eliminating
//! `c_1 = 1 - Σ_{i>=2} c_i` leaves free variables `c_2..c_n` and the program
//! `max t` s.t. `cos_1(x_g) + Σ c_i (cos_i(x_g) - cos_1(x_g)) >= t` at every
//! grid point. Free variables are split into positive parts and `t` is
//! shifted by 2 so the origin is a feasible basis.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::witness::simplex::maximize;
use crate::witness::trig::{cos_table, grid_min, symmetric_representatives, Witness, MAX_DIM};

const T_SHIFT: f64 = 2.0;

#[derive(Clone, Debug)]
pub struct LpOptions {
    /// Grid points per axis; default `next_pow2(max(64, 64 * max|h|₁))`.
    pub grid: Option<u64>,
    /// Required slack: the grid optimum must reach `-ε (1 - δ)`.
    pub delta: f64,
    /// Largest number of `±h` pairs accepted.
    pub max_pairs: usize,
    /// Largest constraint-matrix size (rows × columns).
    pub max_cells: u64,
    /// Largest grid the certification loop refines to.
    pub max_grid: u64,
    pub max_iterations: usize,
}

impl Default for LpOptions {
    fn default() -> Self {
        LpOptions {
            grid: None,
            delta: 0.1,
            max_pairs: 512,
            max_cells: 4_000_000,
            max_grid: 1 << 18,
            max_iterations: 200_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum LpOutcome {
    Feasible { witness: Witness },
    /// No witness for this finite frequency set on this grid. This never
    /// shows that the full set fails to be van der Corput.
    InfeasibleAtTruncation {
        grid_optimum: f64,
        required: f64,
        grid: u64,
        reason: String,
    },
}

pub fn default_grid(max_l1: i64) -> u64 {
    ((64 * max_l1.max(1)) as u64).max(64).next_power_of_two()
}

pub fn lp_witness_search(h: &[Vec<i64>], epsilon: f64, opts: &LpOptions) -> Result<LpOutcome> {
    if !(epsilon > 0.0) {
        return Err(Error::domain("epsilon must be positive"));
    }
    let reps = symmetric_representatives(h)?;
    let k = reps[0].len();
    if k > MAX_DIM {
        return Err(Error::Budget(format!("dimension {k} exceeds {MAX_DIM}")));
    }
    if reps.len() > opts.max_pairs {
        return Err(Error::Budget(format!(
            "{} frequency pairs exceed the budget of {}",
            reps.len(),
            opts.max_pairs
        )));
    }
    let max_l1 = reps.iter().map(|h| crate::witness::trig::l1(h)).max().unwrap_or(1);
    let mut g = opts.grid.unwrap_or_else(|| default_grid(max_l1));
    if g < 64 {
        return Err(Error::domain("grid must have at least 64 points per axis"));
    }
    let required = -epsilon * (1.0 - opts.delta);
    loop {
        let (coeffs, optimum) = solve_on_grid(&reps, k, g, opts)?;
        if optimum < required {
            return Ok(LpOutcome::InfeasibleAtTruncation {
                grid_optimum: optimum,
                required,
                grid: g,
                reason: "grid optimum below -epsilon(1 - delta)".into(),
            });
        }
        let pairs: Vec<(Vec<i64>, f64)> = reps
            .iter()
            .zip(&coeffs)
            .filter(|(_, c)| **c != 0.0)
            .map(|(h, c)| (h.clone(), c / 2.0))
            .collect();
        let mut w = Witness::from_pairs(k, &pairs)?;
        let fine = 4 * g;
        let (fine_min, _) = grid_min(&w, fine);
        let margin = w.lipschitz() / fine as f64 / 2.0;
        w.epsilon = epsilon;
        w.grid = g;
        w.margin = margin;
        w.certified_min = fine_min - margin;
        if w.certified_min >= -epsilon {
            return Ok(LpOutcome::Feasible { witness: w });
        }
        if 2 * g > opts.max_grid {
            return Ok(LpOutcome::InfeasibleAtTruncation {
                grid_optimum: optimum,
                required,
                grid: g,
                reason: format!(
                    "certified minimum {:.6} below -epsilon at the largest grid",
                    w.certified_min
                ),
            });
        }
        g *= 2;
    }
}

/// Returns the cosine coefficients `c_i` and the grid optimum `t*`.
fn solve_on_grid(reps: &[Vec<i64>], k: usize, g: u64, opts: &LpOptions) -> Result<(Vec<f64>, f64)> {
    let n = reps.len();
    let rows: u64 = if k == 1 { g / 2 + 1 } else { g.pow(k as u32) };
    let cols = 2 * (n - 1) + 1;
    if rows.saturating_mul(cols as u64) > opts.max_cells {
        return Err(Error::Budget(format!(
            "constraint matrix {rows} x {cols} exceeds {} cells",
            opts.max_cells
        )));
    }
    let table = cos_table(g);
    let gi = g as i128;
    let cosines = |flat: u64| -> Vec<f64> {
        let mut idx = vec![0i128; k];
        let mut r = flat;
        for j in (0..k).rev() {
            idx[j] = (r % g) as i128;
            r /= g;
        }
        reps.iter()
            .map(|h| {
                let ph: i128 = h.iter().zip(&idx).map(|(a, b)| *a as i128 * b).sum();
                table[ph.rem_euclid(gi) as usize]
            })
            .collect()
    };
    // Row: s - Σ (u_i - v_i) d_i <= cos_1 + T_SHIFT, columns [s, u_2.., v_2..].
    let m = rows as usize;
    let mut a = vec![0.0; m * cols];
    let mut b = vec![0.0; m];
    for r in 0..m {
        let cs = cosines(r as u64);
        let row = &mut a[r * cols..(r + 1) * cols];
        row[0] = 1.0;
        for i in 1..n {
            let d = cs[i] - cs[0];
            row[i] = -d;
            row[n - 1 + i] = d;
        }
        b[r] = cs[0] + T_SHIFT;
    }
    let mut c = vec![0.0; cols];
    c[0] = 1.0;
    let sol = maximize(a, b, c, opts.max_iterations)?;
    let mut coeffs = vec![0.0; n];
    let mut rest = 0.0;
    for i in 1..n {
        coeffs[i] = sol.y[i] - sol.y[n - 1 + i];
        rest += coeffs[i];
    }
    coeffs[0] = 1.0 - rest;
    Ok((coeffs, sol.y[0] - T_SHIFT))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn range(m: i64, k: i64) -> Vec<Vec<i64>> {
        (1..=k).map(|j| vec![j * m]).collect()
    }

    #[test]
    fn single_frequency_is_infeasible() {
        let r = lp_witness_search(&[vec![1]], 0.5, &LpOptions::default()).unwrap();
        match r {
            LpOutcome::InfeasibleAtTruncation { grid_optimum, .. } => {
                assert!((grid_optimum + 1.0).abs() < 1e-9)
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn ten_frequencies_reach_fejer_level() {
        let r = lp_witness_search(&range(1, 10), 0.12, &LpOptions::default()).unwrap();
        match r {
            LpOutcome::Feasible { witness } => {
                assert!(witness.certified_min >= -0.12);
                assert!((witness.coefficient_sum() - 1.0).abs() < 1e-9);
            }
            other => panic!("{other:?}"),
        }
    }
}
