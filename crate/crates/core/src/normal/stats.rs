//! Block frequencies and the digit-window proxy for `({q^n x})`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::equidist::discrepancy::{star_discrepancy, DiscrepancyMethod};
use crate::error::{Error, Result};
use crate::normal::stream::digits_to_string;

/// Largest `q^L` table.
pub const MAX_BLOCKS: u64 = 1 << 24;

/// Sliding-window frequencies of every length-`L` block, indexed by the block
/// read as a base-`q` number and normalized by `N − L + 1`.
pub fn block_frequencies(digits: &[u32], q: u32, l: usize) -> Result<Vec<f64>> {
    if !(1..=8).contains(&l) {
        return Err(Error::domain("block length must lie in 1..=8"));
    }
    let size = (q as u64)
        .checked_pow(l as u32)
        .filter(|&s| s <= MAX_BLOCKS)
        .ok_or_else(|| Error::capacity("block table size", MAX_BLOCKS))?;
    if (digits.len() as u64) < size.max(l as u64) {
        return Err(Error::domain(format!(
            "need at least q^L = {size} digits, got {}",
            digits.len()
        )));
    }
    let mut counts = vec![0u64; size as usize];
    let top = size / q as u64;
    let mut code: u64 = 0;
    for (i, &d) in digits.iter().enumerate() {
        code = (code % top) * q as u64 + d as u64;
        if i + 1 >= l {
            counts[code as usize] += 1;
        }
    }
    let windows = (digits.len() - l + 1) as f64;
    Ok(counts.into_iter().map(|c| c as f64 / windows).collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BlockTable {
    pub length: usize,
    pub expected: f64,
    pub max_deviation: f64,
    pub frequencies: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProxyDiscrepancy {
    pub window_digits: usize,
    pub points: usize,
    pub star_discrepancy: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormalityReport {
    pub q: u32,
    pub digits: usize,
    pub digit_frequencies: Vec<f64>,
    pub blocks: Vec<BlockTable>,
    pub max_deviation: f64,
    pub proxy: ProxyDiscrepancy,
}

fn block_label(mut code: u64, q: u32, l: usize) -> String {
    let mut digits = vec![0u32; l];
    for slot in digits.iter_mut().rev() {
        *slot = (code % q as u64) as u32;
        code /= q as u64;
    }
    digits_to_string(&digits)
}

/// Digits per proxy point: the largest `w` with `q^w ≤ 2^64`.
pub fn window_digits(q: u32) -> usize {
    let mut w = 0;
    let mut p: u128 = 1;
    while p * q as u128 <= 1u128 << 64 {
        p *= q as u128;
        w += 1;
    }
    w
}

/// Points `y_n = 0.d_{n+1} ... d_{n+w}` for `0 ≤ n ≤ N − w`.
pub fn proxy_points(digits: &[u32], q: u32, w: usize) -> Vec<f64> {
    if digits.len() < w || w == 0 {
        return Vec::new();
    }
    let qw = (q as u128).pow(w as u32);
    let lead = qw / q as u128;
    let mut y: u128 = digits[..w].iter().fold(0, |acc, &d| acc * q as u128 + d as u128);
    let mut out = Vec::with_capacity(digits.len() - w + 1);
    out.push(y as f64 / qw as f64);
    for i in w..digits.len() {
        y = (y % lead) * q as u128 + digits[i] as u128;
        out.push(y as f64 / qw as f64);
    }
    out
}

pub fn normality_report(digits: &[u32], q: u32, l_max: usize) -> Result<NormalityReport> {
    if l_max == 0 {
        return Err(Error::domain("L_max must be at least 1"));
    }
    let tables: Vec<(usize, Vec<f64>)> = (1..=l_max)
        .into_par_iter()
        .map(|l| Ok((l, block_frequencies(digits, q, l)?)))
        .collect::<Result<_>>()?;
    let mut blocks = Vec::new();
    let mut max_deviation: f64 = 0.0;
    for (l, freqs) in &tables {
        let expected = (q as f64).powi(-(*l as i32));
        let dev = freqs.iter().map(|f| (f - expected).abs()).fold(0.0, f64::max);
        max_deviation = max_deviation.max(dev);
        blocks.push(BlockTable {
            length: *l,
            expected,
            max_deviation: dev,
            frequencies: freqs
                .iter()
                .enumerate()
                .map(|(c, f)| (block_label(c as u64, q, *l), *f))
                .collect(),
        });
    }
    let w = window_digits(q);
    let pts = proxy_points(digits, q, w);
    let dstar = if pts.is_empty() {
        0.0
    } else {
        star_discrepancy(&pts, DiscrepancyMethod::Fast)?.dstar
    };
    Ok(NormalityReport {
        q,
        digits: digits.len(),
        digit_frequencies: tables[0].1.clone(),
        blocks,
        max_deviation,
        proxy: ProxyDiscrepancy {
            window_digits: w,
            points: pts.len(),
            star_discrepancy: dstar,
        },
    })
}
