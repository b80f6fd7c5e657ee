//! Dense simplex for `max c·y` subject to `A y <= b`, `y >= 0`, `b >= 0`
//! (so the origin is a feasible starting basis).

use crate::error::{Error, Result};

const PIVOT_TOL: f64 = 1e-11;
const COST_TOL: f64 = 1e-12;

pub struct LpSolution {
    pub y: Vec<f64>,
    pub objective: f64,
    pub iterations: usize,
}

/// `a` is row-major `m × n`. Entering variables follow Dantzig's rule,
/// switching to Bland's rule after a run of degenerate pivots.
pub fn maximize(a: Vec<f64>, b: Vec<f64>, c: Vec<f64>, max_iter: usize) -> Result<LpSolution> {
    let m = b.len();
    let n = c.len();
    assert_eq!(a.len(), m * n);
    if b.iter().any(|&v| v < 0.0) {
        return Err(Error::domain("simplex needs a nonnegative right-hand side"));
    }
    let mut t = a;
    let mut rhs = b;
    let mut cost = c;
    let mut z = 0.0;
    // Variables 0..n are structural, n..n+m are slacks.
    let mut nonbasic: Vec<usize> = (0..n).collect();
    let mut basic: Vec<usize> = (n..n + m).collect();
    let mut degenerate_run = 0usize;
    let mut iterations = 0usize;
    loop {
        let bland = degenerate_run > 50;
        let entering = if bland {
            (0..n)
                .filter(|&j| cost[j] > COST_TOL)
                .min_by_key(|&j| nonbasic[j])
        } else {
            (0..n)
                .filter(|&j| cost[j] > COST_TOL)
                .max_by(|&i, &j| cost[i].total_cmp(&cost[j]).then(j.cmp(&i)))
        };
        let Some(e) = entering else { break };
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..m {
            let aie = t[i * n + e];
            if aie > PIVOT_TOL {
                let ratio = rhs[i] / aie;
                let better = match leave {
                    None => true,
                    Some((r, best)) => {
                        ratio < best - 1e-15 || (ratio <= best + 1e-15 && basic[i] < basic[r])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((r, ratio)) = leave else {
            return Err(Error::domain("linear program is unbounded"));
        };
        iterations += 1;
        if iterations > max_iter {
            return Err(Error::SolverStall { iterations: max_iter });
        }
        if ratio <= 1e-15 {
            degenerate_run += 1;
        } else {
            degenerate_run = 0;
        }
        let p = t[r * n + e];
        for j in 0..n {
            if j != e {
                t[r * n + j] /= p;
            }
        }
        rhs[r] /= p;
        t[r * n + e] = 1.0 / p;
        let (prow, rest) = split_row(&mut t, r, n);
        for (i, row) in rest {
            let f = row[e];
            if f != 0.0 {
                for j in 0..n {
                    if j != e {
                        row[j] -= f * prow[j];
                    }
                }
                row[e] = -f / p;
                rhs[i] -= f * rhs[r];
                if rhs[i] < 0.0 && rhs[i] > -1e-12 {
                    rhs[i] = 0.0;
                }
            }
        }
        let f = cost[e];
        for j in 0..n {
            if j != e {
                cost[j] -= f * prow[j];
            }
        }
        cost[e] = -f / p;
        z += f * rhs[r];
        std::mem::swap(&mut nonbasic[e], &mut basic[r]);
    }
    let mut y = vec![0.0; n];
    for (i, &v) in basic.iter().enumerate() {
        if v < n {
            y[v] = rhs[i];
        }
    }
    Ok(LpSolution {
        y,
        objective: z,
        iterations,
    })
}

// The pivot row (copied) and mutable access to every other row.
fn split_row(t: &mut [f64], r: usize, n: usize) -> (Vec<f64>, impl Iterator<Item = (usize, &mut [f64])>) {
    let prow = t[r * n..(r + 1) * n].to_vec();
    let rows = t
        .chunks_mut(n)
        .enumerate()
        .filter(move |(i, _)| *i != r);
    (prow, rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn textbook_problem() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> (2, 6), 36
        let a = vec![1.0, 0.0, 0.0, 2.0, 3.0, 2.0];
        let s = maximize(a, vec![4.0, 12.0, 18.0], vec![3.0, 5.0], 100).unwrap();
        assert!((s.objective - 36.0).abs() < 1e-12);
        assert!((s.y[0] - 2.0).abs() < 1e-12 && (s.y[1] - 6.0).abs() < 1e-12);
    }

    #[test]
    fn unbounded_and_stall() {
        assert!(maximize(vec![-1.0], vec![1.0], vec![1.0], 10).is_err());
        let a = vec![1.0, 0.0, 0.0, 2.0, 3.0, 2.0];
        assert!(matches!(
            maximize(a, vec![4.0, 12.0, 18.0], vec![3.0, 5.0], 1),
            Err(Error::SolverStall { .. })
        ));
    }
}
