//! Segmented, odd-only sieve of Eratosthenes.

use crate::error::{Error, Result};

/// Default upper limit accepted by [`primes_up_to`].
pub const SIEVE_BOUND: u64 = 1_000_000_000;

const SEGMENT: u64 = 1 << 18;

fn small_primes(limit: u64) -> Vec<u64> {
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// All primes `<= limit` in ascending order.
pub fn primes_up_to(limit: u64) -> Result<Vec<u64>> {
    primes_up_to_bounded(limit, SIEVE_BOUND)
}

pub fn primes_up_to_bounded(limit: u64, bound: u64) -> Result<Vec<u64>> {
    if limit < 2 {
        return Err(Error::domain("prime limit must be at least 2"));
    }
    if limit > bound {
        return Err(Error::capacity("prime sieve limit", bound));
    }
    let mut out = vec![2];
    let mut it = OddSegments::new();
    while let Some(seg) = it.next_segment(limit) {
        out.extend(seg);
    }
    Ok(out)
}

/// Sieves odd numbers segment by segment, growing the base primes lazily.
struct OddSegments {
    lo: u64,
    base: Vec<u64>,
    base_limit: u64,
}

impl OddSegments {
    fn new() -> Self {
        OddSegments {
            lo: 3,
            base: Vec::new(),
            base_limit: 1,
        }
    }

    fn next_segment(&mut self, limit: u64) -> Option<Vec<u64>> {
        if self.lo > limit {
            return None;
        }
        // Odd numbers lo, lo+2, ..., hi-2.
        let hi = (self.lo + 2 * SEGMENT).min(limit.saturating_add(1) | 1).max(self.lo + 2);
        let need = isqrt(hi);
        if need > self.base_limit {
            let new_limit = (need * 2).max(1024);
            self.base = small_primes(new_limit).into_iter().skip(1).collect();
            self.base_limit = new_limit;
        }
        let len = ((hi - self.lo) / 2) as usize;
        let mut composite = vec![false; len];
        for &p in &self.base {
            if p * p >= hi {
                break;
            }
            let mut start = (p * p).max(self.lo.div_ceil(p) * p);
            if start % 2 == 0 {
                start += p;
            }
            let mut j = ((start - self.lo) / 2) as usize;
            while j < len {
                composite[j] = true;
                j += p as usize;
            }
        }
        let lo = self.lo;
        let seg = composite
            .iter()
            .enumerate()
            .filter(|(_, &c)| !c)
            .map(|(i, _)| lo + 2 * i as u64)
            .filter(|&v| v <= limit)
            .collect();
        self.lo = hi;
        Some(seg)
    }
}

/// Unbounded ascending iterator over the primes.
pub struct PrimeIter {
    buf: Vec<u64>,
    pos: usize,
    segs: OddSegments,
    started: bool,
}

impl Default for PrimeIter {
    fn default() -> Self {
        Self::new()
    }
}

impl PrimeIter {
    pub fn new() -> Self {
        PrimeIter {
            buf: Vec::new(),
            pos: 0,
            segs: OddSegments::new(),
            started: false,
        }
    }
}

impl Iterator for PrimeIter {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if !self.started {
            self.started = true;
            return Some(2);
        }
        while self.pos >= self.buf.len() {
            self.buf = self.segs.next_segment(u64::MAX / 4)?;
            self.pos = 0;
        }
        self.pos += 1;
        Some(self.buf[self.pos - 1])
    }
}

/// The first `count` primes.
pub fn first_primes(count: usize) -> Vec<u64> {
    PrimeIter::new().take(count).collect()
}

/// The `n`-th prime (1-based): `nth_prime(1) = 2`.
pub fn nth_prime(n: u64) -> u64 {
    PrimeIter::new().nth((n - 1) as usize).expect("primes are unbounded")
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}
