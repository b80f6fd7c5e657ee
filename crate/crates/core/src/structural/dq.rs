//! The filter `D_q`: basis-value tuples `(g_{i_1}(n), ..., g_{i_m}(n))` whose
//! every coordinate is divisible by `q!`, in order of `n`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::generators::sequence::{integer_polynomial, Evaluator, SequenceSpec};
use crate::generators::set::floor_at;
use crate::hp::Hp;

/// Default cap on the bit length of `q!`.
pub const MAX_FACTORIAL_BITS: u64 = 1 << 16;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DqResult {
    pub q: u64,
    pub basis: Vec<usize>,
    #[serde(serialize_with = "crate::bigser::vec2")]
    pub tuples: Vec<Vec<BigInt>>,
    pub indices: Vec<u64>,
    /// Rank of the sampled basis-value matrix over Q (should equal `m`).
    pub sampled_rank: usize,
    pub warnings: Vec<String>,
}

pub fn factorial(q: u64, max_bits: u64) -> Result<BigInt> {
    let bits: f64 = (2..=q).map(|i| (i as f64).log2()).sum();
    if bits > max_bits as f64 {
        return Err(Error::capacity(format!("{q}! bit length"), max_bits));
    }
    Ok((2..=q).fold(BigInt::one(), |acc, i| acc * i))
}

/// Integer values of the selected components at index `n`.
pub(crate) struct BasisValues<'a> {
    spec: &'a SequenceSpec,
    basis: Vec<usize>,
    exact: Option<Vec<Vec<BigInt>>>,
    ev: Option<Evaluator>,
}

impl<'a> BasisValues<'a> {
    pub fn new(spec: &'a SequenceSpec, basis: &[usize], max_index: u64) -> Result<Self> {
        let k = spec.dimension();
        if basis.is_empty() {
            return Err(Error::domain("basis must select at least one component"));
        }
        if let Some(&bad) = basis.iter().find(|&&i| i >= k) {
            return Err(Error::domain(format!("basis index {bad} out of range (dimension {k})")));
        }
        let exact = integer_polynomial(spec);
        let ev = if exact.is_some() {
            None
        } else {
            Some(Evaluator::new(spec, max_index)?)
        };
        Ok(BasisValues {
            spec,
            basis: basis.to_vec(),
            exact,
            ev,
        })
    }

    pub fn at(&self, hp: &mut Hp, n: u64) -> Result<Vec<BigInt>> {
        if let Some(polys) = &self.exact {
            let nb = BigInt::from(n);
            return Ok(self
                .basis
                .iter()
                .map(|&i| polys[i].iter().rev().fold(BigInt::zero(), |acc, c| acc * &nb + c))
                .collect());
        }
        let all = floor_at(self.spec, self.ev.as_ref().expect("evaluator"), hp, n)?;
        Ok(self.basis.iter().map(|&i| all[i].clone()).collect())
    }
}

/// Rank over Q of integer rows, by exact elimination.
pub fn rational_rank(rows: &[Vec<BigInt>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|v| BigRational::from_integer(v.clone())).collect())
        .collect();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][c].clone();
        for i in 0..m.len() {
            if i != rank && !m[i][c].is_zero() {
                let f = &m[i][c] / &pivot;
                for j in c..cols {
                    let delta = &f * &m[rank][j];
                    m[i][j] -= delta;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn sample_rows(values: &BasisValues, start: u64, rows: usize) -> Result<Vec<Vec<BigInt>>> {
    let mut hp = Hp::new(values.spec.precision_bits);
    (0..rows as u64)
        .map(|i| values.at(&mut hp, start + 1 + 3 * i))
        .collect()
}

/// Rank of a `2m × m` sample of basis values.
pub fn sampled_rank(spec: &SequenceSpec, basis: &[usize]) -> Result<usize> {
    let rows = 2 * basis.len();
    let values = BasisValues::new(spec, basis, spec.start() + 4 * rows as u64)?;
    Ok(rational_rank(&sample_rows(&values, spec.start(), rows)?))
}

/// Greedy choice of components whose sampled values are linearly
/// independent over Q, scanning components in order.
pub fn reduce_basis(spec: &SequenceSpec) -> Result<Vec<usize>> {
    let k = spec.dimension();
    let all: Vec<usize> = (0..k).collect();
    let rows = 2 * k;
    let values = BasisValues::new(spec, &all, spec.start() + 4 * rows as u64)?;
    let sample = sample_rows(&values, spec.start(), rows)?;
    let mut basis: Vec<usize> = Vec::new();
    for i in 0..k {
        let mut trial = basis.clone();
        trial.push(i);
        let sub: Vec<Vec<BigInt>> = sample
            .iter()
            .map(|r| trial.iter().map(|&j| r[j].clone()).collect())
            .collect();
        if rational_rank(&sub) == trial.len() {
            basis = trial;
        }
    }
    Ok(basis)
}

/// Scans `n` in `[from, from + count)`; returns matching indices and tuples.
pub(crate) fn scan(
    values: &BasisValues,
    fact: &BigInt,
    from: u64,
    count: u64,
) -> Result<Vec<(u64, Vec<BigInt>)>> {
    let prec = values.spec.precision_bits;
    let hits: Vec<Option<(u64, Vec<BigInt>)>> = (from..from + count)
        .into_par_iter()
        .map_init(
            || Hp::new(prec),
            |hp, n| {
                let v = values.at(hp, n)?;
                let ok = v.iter().all(|x| !x.is_zero() && (x % fact).is_zero());
                Ok(ok.then_some((n, v)))
            },
        )
        .collect::<Result<_>>()?;
    Ok(hits.into_iter().flatten().collect())
}

/// `D_q` over the first `horizon` indices of `g`.
pub fn dq_filter(g: &SequenceSpec, basis: &[usize], q: u64, horizon: u64) -> Result<DqResult> {
    dq_filter_with(g, basis, q, horizon, MAX_FACTORIAL_BITS)
}

pub fn dq_filter_with(
    g: &SequenceSpec,
    basis: &[usize],
    q: u64,
    horizon: u64,
    max_factorial_bits: u64,
) -> Result<DqResult> {
    if g.index_dimension() != 1 {
        return Err(Error::Dimension {
            expected: 1,
            got: g.index_dimension(),
        });
    }
    let fact = factorial(q, max_factorial_bits)?;
    let start = g.start();
    let values = BasisValues::new(g, basis, start + horizon)?;
    let rank = sampled_rank(g, basis)?;
    let mut warnings = Vec::new();
    if rank < basis.len() {
        warnings.push(format!(
            "sampled basis values have rank {rank} < {}; the selected components look linearly dependent over Q",
            basis.len()
        ));
    }
    let hits = scan(&values, &fact, start, horizon)?;
    if hits.is_empty() {
        warnings.push(format!("D_q is empty up to index {}", start + horizon - 1));
    }
    let (indices, tuples) = hits.into_iter().unzip();
    Ok(DqResult {
        q,
        basis: basis.to_vec(),
        tuples,
        indices,
        sampled_rank: rank,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(r: &DqResult) -> Vec<Vec<i64>> {
        r.tuples
            .iter()
            .map(|t| t.iter().map(|v| i64::try_from(v).unwrap()).collect())
            .collect()
    }

    #[test]
    fn squares_with_q_two() {
        let g = SequenceSpec::polynomial(&["n^2"]).unwrap();
        let r = dq_filter(&g, &[0], 2, 20).unwrap();
        assert_eq!(&ints(&r)[..3], &[vec![4], vec![16], vec![36]]);
        assert_eq!(r.indices, (1..=10).map(|i| 2 * i).collect::<Vec<u64>>());
    }

    #[test]
    fn q_one_keeps_everything() {
        let g = SequenceSpec::polynomial(&["n"]).unwrap();
        let r = dq_filter(&g, &[0], 1, 5).unwrap();
        assert_eq!(ints(&r), vec![vec![1], vec![2], vec![3], vec![4], vec![5]]);
    }

    #[test]
    fn pairs_of_powers() {
        let g = SequenceSpec::polynomial(&["n^2", "n^3"]).unwrap();
        let r = dq_filter(&g, &[0, 1], 2, 30).unwrap();
        assert_eq!(&ints(&r)[..2], &[vec![4, 8], vec![16, 64]]);
        assert_eq!(r.sampled_rank, 2);
        assert!(r.warnings.is_empty());
    }

    #[test]
    fn dependent_pair_is_reduced() {
        let g = SequenceSpec::polynomial(&["n^2", "n^2"]).unwrap();
        assert_eq!(reduce_basis(&g).unwrap(), vec![0]);
        let r = dq_filter(&g, &[0, 1], 2, 10).unwrap();
        assert_eq!(r.sampled_rank, 1);
        assert_eq!(r.warnings.len(), 1);
    }

    #[test]
    fn factorial_budget() {
        assert!(matches!(factorial(100_000, 1000), Err(Error::Capacity { .. })));
        assert_eq!(factorial(5, 100).unwrap(), BigInt::from(120));
    }
}
