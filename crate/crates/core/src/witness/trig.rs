//! Real trigonometric polynomials `P(x) = Σ a_h e(h·x)` with `a_{-h} = a_h`,
//! and their evaluation on uniform grids of the torus.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::equidist::weyl::cis;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub h: Vec<i64>,
    pub a: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub k: usize,
    pub terms: Vec<Term>,
    pub epsilon: f64,
    pub certified_min: f64,
    /// Construction grid resolution per axis.
    pub grid: u64,
    pub margin: f64,
}

/// Sign-normalised representative of `±h`: first nonzero coordinate positive.
pub fn canonical(h: &[i64]) -> Vec<i64> {
    match h.iter().find(|&&x| x != 0) {
        Some(&x) if x < 0 => h.iter().map(|v| -v).collect(),
        _ => h.to_vec(),
    }
}

pub fn l1(h: &[i64]) -> i64 {
    h.iter().map(|x| x.abs()).sum()
}

/// Representatives of `H ∪ (-H)` ordered by `(|h|₁, h)`.
pub fn symmetric_representatives(hs: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    let k = hs.first().map(|h| h.len()).ok_or_else(|| Error::EmptySet("no frequencies".into()))?;
    let mut reps: Vec<Vec<i64>> = Vec::with_capacity(hs.len());
    for h in hs {
        if h.len() != k {
            return Err(Error::Dimension {
                expected: k,
                got: h.len(),
            });
        }
        if h.iter().all(|&x| x == 0) {
            return Err(Error::domain("frequency 0 is not allowed"));
        }
        reps.push(canonical(h));
    }
    reps.sort_by_key(|h| (l1(h), h.clone()));
    reps.dedup();
    Ok(reps)
}

impl Witness {
    /// Builds a witness from one coefficient per `±h` pair (`P` gets `a` at
    /// both `h` and `-h`).
    pub fn from_pairs(k: usize, pairs: &[(Vec<i64>, f64)]) -> Result<Self> {
        let mut terms = Vec::with_capacity(2 * pairs.len());
        for (h, a) in pairs {
            if h.len() != k {
                return Err(Error::Dimension {
                    expected: k,
                    got: h.len(),
                });
            }
            if h.iter().all(|&x| x == 0) {
                return Err(Error::domain("frequency 0 is not allowed"));
            }
            let neg: Vec<i64> = h.iter().map(|x| -x).collect();
            terms.push(Term { h: neg, a: *a });
            terms.push(Term { h: h.clone(), a: *a });
        }
        terms.sort_by(|x, y| x.h.cmp(&y.h));
        Ok(Witness {
            k,
            terms,
            epsilon: 0.0,
            certified_min: f64::NAN,
            grid: 0,
            margin: 0.0,
        })
    }

    pub fn coefficient_sum(&self) -> f64 {
        crate::sum::neumaier_sum(self.terms.iter().map(|t| t.a))
    }

    /// `2π Σ |a_h| |h|₁`, a Lipschitz constant for `P` in the sup norm.
    pub fn lipschitz(&self) -> f64 {
        std::f64::consts::TAU
            * crate::sum::neumaier_sum(self.terms.iter().map(|t| t.a.abs() * l1(&t.h) as f64))
    }

    pub fn max_l1(&self) -> i64 {
        self.terms.iter().map(|t| l1(&t.h)).max().unwrap_or(0)
    }

    pub fn is_symmetric(&self) -> bool {
        self.terms.iter().all(|t| {
            let neg: Vec<i64> = t.h.iter().map(|x| -x).collect();
            self.terms.iter().any(|u| u.h == neg && u.a == t.a)
        })
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        crate::sum::neumaier_sum(self.terms.iter().map(|t| {
            let phase: f64 = t.h.iter().zip(x).map(|(h, x)| *h as f64 * x).sum();
            t.a * (std::f64::consts::TAU * phase).cos()
        }))
    }

    /// The witness for `cH` obtained by `x ↦ c x`; the range of `P`, hence
    /// the certified minimum, is unchanged.
    pub fn scaled(&self, c: i64) -> Result<Self> {
        if c == 0 {
            return Err(Error::domain("scale factor must be nonzero"));
        }
        let mut w = self.clone();
        for t in &mut w.terms {
            for x in &mut t.h {
                *x *= c;
            }
        }
        w.terms.sort_by(|x, y| x.h.cmp(&y.h));
        w.grid = self.grid * c.unsigned_abs();
        w.margin = self.margin;
        Ok(w)
    }
}

/// `cos(2π j / g)` for `j < g`, exact at quarter turns.
pub fn cos_table(g: u64) -> Vec<f64> {
    (0..g)
        .map(|j| {
            let phase = (((j as u128) << 64) / g as u128) as u64;
            cis(phase).0
        })
        .collect()
}

/// Minimum of `P` over the grid `{j/g}^k` and the grid index attaining it.
/// For `k = 1` the symmetry `P(x) = P(-x)` halves the scan.
pub fn grid_min(w: &Witness, g: u64) -> (f64, Vec<u64>) {
    let table = cos_table(g);
    let k = w.k;
    let gi = g as i128;
    let reduced: Vec<(Vec<i128>, f64)> = w
        .terms
        .iter()
        .map(|t| (t.h.iter().map(|&h| (h as i128).rem_euclid(gi)).collect(), t.a))
        .collect();
    let npoints: u64 = if k == 1 { g / 2 + 1 } else { g.pow(k as u32) };
    let eval = |flat: u64| -> f64 {
        let mut idx = [0i128; 8];
        let mut r = flat;
        for j in (0..k).rev() {
            idx[j] = (r % g) as i128;
            r /= g;
        }
        let mut acc = crate::sum::Neumaier::default();
        for (h, a) in &reduced {
            let mut ph = 0i128;
            for j in 0..k {
                ph += h[j] * idx[j];
            }
            acc.add(a * table[(ph % gi) as usize]);
        }
        acc.value()
    };
    let (v, at) = (0..npoints)
        .into_par_iter()
        .map(|i| (eval(i), i))
        .reduce(
            || (f64::INFINITY, u64::MAX),
            |a, b| if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a },
        );
    let mut idx = vec![0u64; k];
    let mut r = at;
    for j in (0..k).rev() {
        idx[j] = r % g;
        r /= g;
    }
    (v, idx)
}

/// Largest dimension supported by the grid routines.
pub const MAX_DIM: usize = 8;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cosine_minimum() {
        let w = Witness::from_pairs(1, &[(vec![1], 0.5)]).unwrap();
        assert_eq!(w.coefficient_sum(), 1.0);
        let (m, at) = grid_min(&w, 64);
        assert_eq!(m, -1.0);
        assert_eq!(at, vec![32]);
        assert!(w.is_symmetric());
    }

    #[test]
    fn representatives() {
        let r = symmetric_representatives(&[vec![-2], vec![1], vec![2], vec![-1]]).unwrap();
        assert_eq!(r, vec![vec![1], vec![2]]);
        assert!(symmetric_representatives(&[vec![0]]).is_err());
    }
}
