//! Grid estimate of the logarithmic order of an entire function.
//!
//! The estimate is `max_r log log S(r) / log log r` over a geometric grid,
//! with `S(r)` the running maximum of `|f|` on the grid points `<= r`. The
//! doubly logarithmic quotient is the one under which `exp((log x)^λ)` has
//! order exactly `λ` and polynomials have order 1.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::RealExpr;
use astro_float::BigFloat;
use num_rational::BigRational;

use crate::hp::{rational_to_f64, to_rational, Hp};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LogOrderEstimate {
    pub estimate: f64,
    /// `(r, log log S(r) / log log r)` for every grid point where `S(r) > e`.
    pub grid: Vec<(f64, f64)>,
}

pub fn log_order_estimate(f: &RealExpr, r_max: f64) -> Result<LogOrderEstimate> {
    if !(r_max >= 10.0) || !r_max.is_finite() {
        return Err(Error::domain("r_max must be at least 10"));
    }
    let mut hp = Hp::new(128);
    let mut grid = Vec::new();
    let mut s: Option<BigFloat> = None;
    let mut best = f64::NEG_INFINITY;
    let e = hp.e();
    let mut k = 0;
    loop {
        let r = 10f64.powf(1.0 + 0.5 * k as f64).min(r_max);
        let rf = hp.from_ratio(&BigRational::from_float(r).expect("finite"));
        let v = f.eval(&mut hp, Some(&rf)).map_err(|err| match err {
            Error::Domain(d) if d.contains("not finite") => Error::precision(k as u64, "S(r) overflow"),
            other => other,
        })?;
        let v = v.abs();
        if s.as_ref().map_or(true, |m| v > *m) {
            s = Some(v);
        }
        let sm = s.as_ref().expect("set above");
        if *sm > e {
            let ls = hp.ln(sm);
            let num = hp.ln(&ls);
            let lr = hp.ln(&rf);
            let den = hp.ln(&lr);
            let ratio = rational_to_f64(&to_rational(&hp.div(&num, &den))?);
            grid.push((r, ratio));
            best = best.max(ratio);
        }
        if r >= r_max {
            break;
        }
        k += 1;
    }
    if grid.is_empty() {
        return Err(Error::domain("S(r) never exceeds e on the grid"));
    }
    Ok(LogOrderEstimate {
        estimate: best,
        grid,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_has_order_one() {
        let e = log_order_estimate(&RealExpr::parse("x").unwrap(), 1e6).unwrap();
        assert!((e.estimate - 1.0).abs() < 0.01);
    }

    #[test]
    fn log_power_exponentials() {
        let e = log_order_estimate(&RealExpr::parse("exp(log(x)^1.2)").unwrap(), 1e6).unwrap();
        assert!(e.estimate >= 1.0 && e.estimate <= 1.2, "{}", e.estimate);
        let e = log_order_estimate(&RealExpr::parse("exp(log(x)^1.3)").unwrap(), 1e6).unwrap();
        assert!(e.estimate <= 1.3);
        assert_eq!(e.grid.len(), 11);
    }
}
