//! Compensated summation and the fixed block tree used by every parallel
//! reduction, so results do not depend on the thread count.

use rayon::prelude::*;

/// Terms per leaf block of the reduction tree.
pub const BLOCK: usize = 4096;

/// Neumaier's variant of Kahan summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct Neumaier {
    sum: f64,
    c: f64,
}

impl Neumaier {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.c += (self.sum - t) + x;
        } else {
            self.c += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.c
    }
}

pub fn neumaier_sum(xs: impl IntoIterator<Item = f64>) -> f64 {
    let mut acc = Neumaier::default();
    for x in xs {
        acc.add(x);
    }
    acc.value()
}

/// Sums `f(i)` for `i in 0..n` as complex pairs. Leaves are fixed-size blocks
/// summed in index order; block partials are then summed in block order.
pub fn block_sum2<F>(n: usize, f: F) -> (f64, f64)
where
    F: Fn(usize) -> (f64, f64) + Sync,
{
    let blocks = n.div_ceil(BLOCK);
    let partials: Vec<(f64, f64)> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let (mut re, mut im) = (Neumaier::default(), Neumaier::default());
            for i in b * BLOCK..((b + 1) * BLOCK).min(n) {
                let (x, y) = f(i);
                re.add(x);
                im.add(y);
            }
            (re.value(), im.value())
        })
        .collect();
    (
        neumaier_sum(partials.iter().map(|p| p.0)),
        neumaier_sum(partials.iter().map(|p| p.1)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensation_recovers_small_terms() {
        let xs = [1.0, 1e100, 1.0, -1e100];
        assert_eq!(neumaier_sum(xs), 2.0);
    }

    #[test]
    fn block_sum_is_thread_independent() {
        let f = |i: usize| ((i as f64).sin(), (i as f64).cos());
        let a = block_sum2(100_000, f);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        let b = pool.install(|| block_sum2(100_000, f));
        assert_eq!(a.0.to_bits(), b.0.to_bits());
        assert_eq!(a.1.to_bits(), b.1.to_bits());
    }
}
