//! Real-valued families `x_n` (scalar or vector), evaluated with enough
//! precision that `{x_n}` is known to at least `2^-40`.

use astro_float::BigFloat;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{self, RealExpr};
use crate::generators::primes::first_primes;
use crate::hp::{magnitude_exponent, to_rational, Hp, DEFAULT_PRECISION, MAX_PRECISION, MIN_PRECISION};
use crate::real::{log2_ceil, Real, FRACT_BITS};

fn default_precision() -> usize {
    DEFAULT_PRECISION
}

fn one() -> u64 {
    1
}

fn two() -> u64 {
    2
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SequenceSpec {
    #[serde(flatten)]
    pub kind: SequenceKind,
    #[serde(default = "default_precision")]
    pub precision_bits: usize,
}

/// One component `scale * n^exponent * log(n)^log_exponent`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerLogTerm {
    pub scale: RealExpr,
    pub exponent: RealExpr,
    pub log_exponent: RealExpr,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SequenceKind {
    /// `x_n = (g_1(n), ..., g_k(n))`, each `g_i` given by its coefficients,
    /// constant term first.
    Polynomial {
        components: Vec<Vec<RealExpr>>,
        #[serde(default = "one")]
        start: u64,
    },
    /// `x_n = A n + b` over a multi-index `n` (one index per column of `A`).
    Kronecker {
        matrix: Vec<Vec<RealExpr>>,
        #[serde(default)]
        offset: Vec<RealExpr>,
        #[serde(default)]
        start: u64,
    },
    /// `x_n = (g_1(p_n), ..., g_k(p_n))` with polynomial `g_i`.
    PrimePolynomial { components: Vec<Vec<RealExpr>> },
    /// `x_n = (c_1 (p_n + s)^θ_1, ..., c_k (p_n + s)^θ_k)` with `s = ±1`.
    PrimePowerShift {
        shift: i64,
        exponents: Vec<RealExpr>,
        #[serde(default)]
        scales: Vec<RealExpr>,
    },
    /// `x_n = (f_1(p_n), ..., f_k(p_n))` for entire functions of declared
    /// logarithmic orders.
    EntireLogOrder {
        functions: Vec<RealExpr>,
        orders: Vec<RealExpr>,
    },
    PowerLog {
        components: Vec<PowerLogTerm>,
        #[serde(default = "two")]
        start: u64,
    },
    /// Listed points, indexed from 1.
    Explicit { points: Vec<Vec<RealExpr>> },
    /// `x_{n+h} - x_n`.
    Difference {
        base: Box<SequenceSpec>,
        shift: Vec<u64>,
    },
}

impl SequenceSpec {
    pub fn new(kind: SequenceKind) -> Self {
        SequenceSpec {
            kind,
            precision_bits: DEFAULT_PRECISION,
        }
    }

    pub fn with_precision(mut self, bits: usize) -> Self {
        self.precision_bits = bits;
        if let SequenceKind::Difference { base, .. } = &mut self.kind {
            base.precision_bits = bits;
        }
        self
    }

    /// Scalar or vector polynomial family from expressions in `n`.
    pub fn polynomial(components: &[&str]) -> Result<Self> {
        Ok(SequenceSpec::new(SequenceKind::Polynomial {
            components: parse_polys(components)?,
            start: 1,
        }))
    }

    pub fn prime_polynomial(components: &[&str]) -> Result<Self> {
        Ok(SequenceSpec::new(SequenceKind::PrimePolynomial {
            components: parse_polys(components)?,
        }))
    }

    /// `n ↦ α n` for scalar `α`, starting at `n = 1`.
    pub fn kronecker(alpha: &str) -> Result<Self> {
        Ok(SequenceSpec::new(SequenceKind::Kronecker {
            matrix: vec![vec![RealExpr::parse(alpha)?]],
            offset: vec![],
            start: 1,
        }))
    }

    pub fn power_log(scale: &str, exponent: &str, log_exponent: &str) -> Result<Self> {
        Ok(SequenceSpec::new(SequenceKind::PowerLog {
            components: vec![PowerLogTerm {
                scale: RealExpr::parse(scale)?,
                exponent: RealExpr::parse(exponent)?,
                log_exponent: RealExpr::parse(log_exponent)?,
            }],
            start: 2,
        }))
    }

    pub fn prime_power_shift(shift: i64, exponents: &[&str]) -> Result<Self> {
        Ok(SequenceSpec::new(SequenceKind::PrimePowerShift {
            shift,
            exponents: exponents.iter().map(|s| RealExpr::parse(s)).collect::<Result<_>>()?,
            scales: vec![],
        }))
    }

    pub fn entire(functions: &[&str], orders: &[&str]) -> Result<Self> {
        Ok(SequenceSpec::new(SequenceKind::EntireLogOrder {
            functions: functions.iter().map(|s| RealExpr::parse(s)).collect::<Result<_>>()?,
            orders: orders.iter().map(|s| RealExpr::parse(s)).collect::<Result<_>>()?,
        }))
    }

    pub fn explicit_f64(points: &[Vec<f64>]) -> Result<Self> {
        let points = points
            .iter()
            .map(|p| {
                p.iter()
                    .map(|&x| {
                        BigRational::from_float(x)
                            .map(RealExpr::Num)
                            .ok_or_else(|| Error::domain("non-finite point"))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        Ok(SequenceSpec::new(SequenceKind::Explicit { points }))
    }

    /// Output dimension `k`.
    pub fn dimension(&self) -> usize {
        match &self.kind {
            SequenceKind::Polynomial { components, .. }
            | SequenceKind::PrimePolynomial { components } => components.len(),
            SequenceKind::Kronecker { matrix, .. } => matrix.len(),
            SequenceKind::PrimePowerShift { exponents, .. } => exponents.len(),
            SequenceKind::EntireLogOrder { functions, .. } => functions.len(),
            SequenceKind::PowerLog { components, .. } => components.len(),
            SequenceKind::Explicit { points } => points.first().map_or(0, |p| p.len()),
            SequenceKind::Difference { base, .. } => base.dimension(),
        }
    }

    /// Number of independent indices (`n ∈ N^d`).
    pub fn index_dimension(&self) -> usize {
        match &self.kind {
            SequenceKind::Kronecker { matrix, .. } => matrix.first().map_or(1, |r| r.len()),
            SequenceKind::Difference { base, .. } => base.index_dimension(),
            _ => 1,
        }
    }

    /// First index of the family.
    pub fn start(&self) -> u64 {
        match &self.kind {
            SequenceKind::Polynomial { start, .. }
            | SequenceKind::Kronecker { start, .. }
            | SequenceKind::PowerLog { start, .. } => *start,
            SequenceKind::Difference { base, .. } => base.start(),
            _ => 1,
        }
    }

    pub fn uses_primes(&self) -> bool {
        match &self.kind {
            SequenceKind::PrimePolynomial { .. }
            | SequenceKind::PrimePowerShift { .. }
            | SequenceKind::EntireLogOrder { .. } => true,
            SequenceKind::Difference { base, .. } => base.uses_primes(),
            _ => false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.precision_bits < MIN_PRECISION {
            return Err(Error::domain(format!(
                "precision must be at least {MIN_PRECISION} bits"
            )));
        }
        if self.dimension() == 0 {
            return Err(Error::domain("sequence dimension must be at least 1"));
        }
        match &self.kind {
            SequenceKind::Polynomial { components, .. }
            | SequenceKind::PrimePolynomial { components } => {
                for c in components.iter().flatten() {
                    if c.has_var() {
                        return Err(Error::domain(format!("coefficient `{c}` depends on n")));
                    }
                }
                if components.iter().any(|c| c.is_empty()) {
                    return Err(Error::domain("empty coefficient list"));
                }
            }
            SequenceKind::Kronecker { matrix, offset, .. } => {
                let d = matrix[0].len();
                if d == 0 || matrix.iter().any(|r| r.len() != d) {
                    return Err(Error::domain("Kronecker matrix rows must share a positive length"));
                }
                if !offset.is_empty() && offset.len() != matrix.len() {
                    return Err(Error::Dimension {
                        expected: matrix.len(),
                        got: offset.len(),
                    });
                }
                if matrix.iter().flatten().chain(offset).any(|c| c.has_var()) {
                    return Err(Error::domain("Kronecker coefficients must be constants"));
                }
            }
            SequenceKind::PrimePowerShift {
                shift,
                exponents,
                scales,
            } => {
                if shift.abs() != 1 {
                    return Err(Error::domain("prime shift must be +1 or -1"));
                }
                if !scales.is_empty() && scales.len() != exponents.len() {
                    return Err(Error::Dimension {
                        expected: exponents.len(),
                        got: scales.len(),
                    });
                }
                let mut hp = Hp::new(64);
                for e in exponents {
                    if !e.eval(&mut hp, None)?.is_positive() {
                        return Err(Error::domain(format!("exponent `{e}` must be positive")));
                    }
                }
            }
            SequenceKind::EntireLogOrder { functions, orders } => {
                if orders.len() != functions.len() {
                    return Err(Error::Dimension {
                        expected: functions.len(),
                        got: orders.len(),
                    });
                }
                let mut hp = Hp::new(64);
                let lo = BigRational::one();
                let hi = BigRational::new(4.into(), 3.into());
                let mut seen: Vec<BigRational> = Vec::new();
                for o in orders {
                    let v = to_rational(&o.eval(&mut hp, None)?)?;
                    if v <= lo || v >= hi {
                        return Err(Error::domain(format!(
                            "logarithmic order `{o}` must lie strictly between 1 and 4/3"
                        )));
                    }
                    if seen.contains(&v) {
                        return Err(Error::domain("logarithmic orders must be distinct"));
                    }
                    seen.push(v);
                }
            }
            SequenceKind::PowerLog { components, start } => {
                let mut hp = Hp::new(64);
                for t in components {
                    let sigma = to_rational(&t.exponent.eval(&mut hp, None)?)?;
                    let tau = t.log_exponent.as_rational();
                    if !sigma.is_positive() {
                        return Err(Error::domain("power_log exponent must be positive"));
                    }
                    let sigma_integer = t.exponent.as_rational().map_or(false, |s| s.is_integer());
                    if sigma_integer {
                        let tau_v = to_rational(&t.log_exponent.eval(&mut hp, None)?)?;
                        if tau_v >= BigRational::zero() && tau_v <= BigRational::one() {
                            return Err(Error::domain(
                                "power_log with integer exponent needs log exponent outside [0,1]",
                            ));
                        }
                    }
                    if *start < 2 && !(*start == 1 && tau.map_or(false, |t| t.is_zero())) {
                        return Err(Error::domain("power_log starts at n = 2 (log n must be positive)"));
                    }
                }
            }
            SequenceKind::Explicit { points } => {
                let k = points.first().map_or(0, |p| p.len());
                if points.iter().any(|p| p.len() != k) {
                    return Err(Error::domain("explicit points must share a dimension"));
                }
            }
            SequenceKind::Difference { base, shift } => {
                base.validate()?;
                if shift.len() != base.index_dimension() {
                    return Err(Error::Dimension {
                        expected: base.index_dimension(),
                        got: shift.len(),
                    });
                }
                if shift.iter().all(|&h| h == 0) {
                    return Err(Error::domain("difference shift must be nonzero"));
                }
            }
        }
        Ok(())
    }
}

fn parse_polys(components: &[&str]) -> Result<Vec<Vec<RealExpr>>> {
    components
        .iter()
        .map(|s| {
            RealExpr::parse(s)?
                .to_polynomial()
                .ok_or_else(|| Error::domain(format!("`{s}` is not a polynomial in n")))
        })
        .collect()
}

/// Symbolic difference family `x_{n+h} - x_n`.
pub fn difference_family(family: &SequenceSpec, h: &[u64]) -> Result<SequenceSpec> {
    if h.iter().all(|&x| x == 0) {
        return Err(Error::domain("difference shift must be nonzero"));
    }
    if h.len() != family.index_dimension() {
        return Err(Error::Dimension {
            expected: family.index_dimension(),
            got: h.len(),
        });
    }
    let kind = match &family.kind {
        SequenceKind::Polynomial { components, start } => SequenceKind::Polynomial {
            components: components.iter().map(|c| poly_difference(c, h[0])).collect(),
            start: *start,
        },
        SequenceKind::Kronecker { matrix, start, .. } => {
            let offset = matrix
                .iter()
                .map(|row| {
                    row.iter().zip(h).fold(RealExpr::int(0), |acc, (a, &hj)| {
                        expr::add(acc, expr::mul(RealExpr::int(hj as i64), a.clone()))
                    })
                })
                .collect();
            let zeros = matrix.iter().map(|r| vec![RealExpr::int(0); r.len()]).collect();
            SequenceKind::Kronecker {
                matrix: zeros,
                offset,
                start: *start,
            }
        }
        _ => SequenceKind::Difference {
            base: Box::new(family.clone()),
            shift: h.to_vec(),
        },
    };
    Ok(SequenceSpec {
        kind,
        precision_bits: family.precision_bits,
    })
}

// Coefficients of g(n+h) - g(n) by binomial expansion.
fn poly_difference(c: &[RealExpr], h: u64) -> Vec<RealExpr> {
    let deg = c.len() - 1;
    let mut out = vec![RealExpr::int(0); deg.max(1)];
    for (j, cj) in c.iter().enumerate() {
        // c_j ((n+h)^j - n^j) = c_j Σ_{i<j} binom(j,i) h^{j-i} n^i
        let mut binom = BigInt::one();
        for i in 0..j {
            if i > 0 {
                binom = binom * BigInt::from(j - i + 1) / BigInt::from(i);
            }
            let w = &binom * BigInt::from(h).pow((j - i) as u32);
            let term = expr::mul(RealExpr::rational(BigRational::from_integer(w)), cj.clone());
            let prev = std::mem::replace(&mut out[i], RealExpr::int(0));
            out[i] = expr::add(prev, term);
        }
    }
    while out.len() > 1 && out.last().map_or(false, |x| x.is_zero()) {
        out.pop();
    }
    out
}

enum Coeffs {
    Exact(Vec<BigRational>),
    /// `c_j ≈ m_j / 2^frac_bits` with `|error| <= 2^(1 - frac_bits)`.
    Fixed { m: Vec<BigInt>, frac_bits: u32 },
}

impl Coeffs {
    fn build(cs: &[RealExpr], frac_bits: u32, prec: usize) -> Result<Self> {
        if let Some(ex) = cs.iter().map(|c| c.as_rational()).collect::<Option<Vec<_>>>() {
            return Ok(Coeffs::Exact(ex));
        }
        let mut m = Vec::with_capacity(cs.len());
        for c in cs {
            let mut probe = Hp::new(64);
            let mag = magnitude_exponent(&c.eval(&mut probe, None)?).unwrap_or(0).max(0) as usize;
            let mut hp = Hp::new(prec.max(frac_bits as usize + mag + 32));
            let r = to_rational(&c.eval(&mut hp, None)?)?;
            let scaled = r * BigRational::from_integer(BigInt::one() << frac_bits as usize);
            m.push(scaled.floor().to_integer());
        }
        Ok(Coeffs::Fixed { m, frac_bits })
    }

    /// `Σ c_j t_j` for integer monomials `t_j`.
    fn combine(&self, monomials: &[BigInt]) -> Real {
        match self {
            Coeffs::Exact(cs) => {
                let mut acc = BigRational::zero();
                for (c, t) in cs.iter().zip(monomials) {
                    if !c.is_zero() {
                        acc += c * BigRational::from_integer(t.clone());
                    }
                }
                Real::exact(acc)
            }
            Coeffs::Fixed { m, frac_bits } => {
                let mut acc = BigInt::zero();
                let mut weight = BigInt::zero();
                for (c, t) in m.iter().zip(monomials) {
                    acc += c * t;
                    weight += t.abs();
                }
                let value = BigRational::new(acc, BigInt::one() << *frac_bits as usize);
                let w = log2_ceil(&BigRational::from_integer(weight)).unwrap_or(0);
                Real::approx(value, w + 1 - *frac_bits as i64)
            }
        }
    }
}

enum Comp {
    Poly(Coeffs),
    Expr(RealExpr),
}

enum Arg {
    Natural,
    Prime { shift: i64 },
}

enum Eval {
    Direct { comps: Vec<Comp>, arg: Arg },
    Linear { rows: Vec<Coeffs> },
    Explicit { points: Vec<Vec<Real>> },
    Diff { base: Box<Eval>, shift: Vec<u64> },
}

/// Prepared evaluator for indices up to a known maximum.
pub struct Evaluator {
    eval: Eval,
    primes: Vec<u64>,
    prec: usize,
    start: u64,
}

impl Evaluator {
    pub fn new(spec: &SequenceSpec, max_index: u64) -> Result<Self> {
        spec.validate()?;
        let max_shift = max_shift(spec);
        let max_index = max_index + max_shift;
        let primes = if spec.uses_primes() {
            first_primes(max_index as usize + 1)
        } else {
            Vec::new()
        };
        let max_arg = if spec.uses_primes() {
            *primes.last().unwrap_or(&2) + 1
        } else {
            max_index.max(1)
        };
        let eval = build(spec, max_arg, max_index)?;
        Ok(Evaluator {
            eval,
            primes,
            prec: spec.precision_bits,
            start: spec.start(),
        })
    }

    pub fn start(&self) -> u64 {
        self.start
    }

    /// Value at a (multi-)index.
    pub fn at(&self, hp: &mut Hp, index: &[u64]) -> Result<Vec<Real>> {
        eval_at(&self.eval, &self.primes, self.prec, hp, index)
    }

    pub fn working_precision(&self) -> usize {
        self.prec
    }
}

fn max_shift(spec: &SequenceSpec) -> u64 {
    match &spec.kind {
        SequenceKind::Difference { base, shift } => {
            shift.iter().copied().max().unwrap_or(0) + max_shift(base)
        }
        _ => 0,
    }
}

fn build(spec: &SequenceSpec, max_arg: u64, max_index: u64) -> Result<Eval> {
    let prec = spec.precision_bits;
    let arg_bits = 64 - max_arg.leading_zeros();
    let fixed = |deg: usize| (64 + deg as u32 * arg_bits + 8).max(prec as u32);
    Ok(match &spec.kind {
        SequenceKind::Polynomial { components, .. } | SequenceKind::PrimePolynomial { components } => {
            let comps = components
                .iter()
                .map(|c| Ok(Comp::Poly(Coeffs::build(c, fixed(c.len() - 1), prec)?)))
                .collect::<Result<_>>()?;
            let arg = if matches!(spec.kind, SequenceKind::PrimePolynomial { .. }) {
                Arg::Prime { shift: 0 }
            } else {
                Arg::Natural
            };
            Eval::Direct { comps, arg }
        }
        SequenceKind::Kronecker { matrix, offset, .. } => {
            let d = matrix[0].len();
            let rows = matrix
                .iter()
                .enumerate()
                .map(|(i, row)| {
                    let mut cs = vec![offset.get(i).cloned().unwrap_or_else(|| RealExpr::int(0))];
                    cs.extend(row.iter().cloned());
                    let bits = 64 + arg_bits + (d as u32).next_power_of_two().trailing_zeros() + 8;
                    Coeffs::build(&cs, bits.max(prec as u32), prec)
                })
                .collect::<Result<_>>()?;
            Eval::Linear { rows }
        }
        SequenceKind::PrimePowerShift {
            shift,
            exponents,
            scales,
        } => {
            let comps = exponents
                .iter()
                .enumerate()
                .map(|(i, e)| {
                    let pow = RealExpr::Pow(Box::new(RealExpr::Var), Box::new(e.clone()));
                    let scale = scales.get(i).cloned().unwrap_or_else(|| RealExpr::int(1));
                    Comp::Expr(expr::mul(scale, pow))
                })
                .collect();
            Eval::Direct {
                comps,
                arg: Arg::Prime { shift: *shift },
            }
        }
        SequenceKind::EntireLogOrder { functions, .. } => Eval::Direct {
            comps: functions.iter().cloned().map(Comp::Expr).collect(),
            arg: Arg::Prime { shift: 0 },
        },
        SequenceKind::PowerLog { components, .. } => {
            let comps = components
                .iter()
                .map(|t| {
                    let pow = RealExpr::Pow(Box::new(RealExpr::Var), Box::new(t.exponent.clone()));
                    let lg = RealExpr::Func(crate::expr::Func::Ln, Box::new(RealExpr::Var));
                    let mut e = expr::mul(t.scale.clone(), pow);
                    if !t.log_exponent.is_zero() {
                        let l = if t.log_exponent.is_one() {
                            lg
                        } else {
                            RealExpr::Pow(Box::new(lg), Box::new(t.log_exponent.clone()))
                        };
                        e = expr::mul(e, l);
                    }
                    Comp::Expr(e)
                })
                .collect();
            Eval::Direct {
                comps,
                arg: Arg::Natural,
            }
        }
        SequenceKind::Explicit { points } => {
            let mut hp = Hp::new(prec);
            let pts = points
                .iter()
                .map(|p| p.iter().map(|e| constant_real(e, &mut hp)).collect::<Result<Vec<_>>>())
                .collect::<Result<_>>()?;
            Eval::Explicit { points: pts }
        }
        SequenceKind::Difference { base, shift } => Eval::Diff {
            base: Box::new(build(base, max_arg, max_index)?),
            shift: shift.clone(),
        },
    })
}

fn constant_real(e: &RealExpr, hp: &mut Hp) -> Result<Real> {
    if let Some(r) = e.as_rational() {
        return Ok(Real::exact(r));
    }
    let v = e.eval(hp, None)?;
    let mag = magnitude_exponent(&v).unwrap_or(0);
    Ok(Real::approx(to_rational(&v)?, mag + 16 - hp.prec() as i64))
}

fn eval_at(eval: &Eval, primes: &[u64], prec: usize, hp: &mut Hp, index: &[u64]) -> Result<Vec<Real>> {
    match eval {
        Eval::Direct { comps, arg } => {
            let n = index[0];
            let x: BigInt = match arg {
                Arg::Natural => BigInt::from(n),
                Arg::Prime { shift } => {
                    let p = *primes
                        .get((n as usize).wrapping_sub(1))
                        .ok_or_else(|| Error::domain(format!("prime index {n} out of range")))?;
                    BigInt::from(p) + BigInt::from(*shift)
                }
            };
            comps
                .iter()
                .map(|c| match c {
                    Comp::Poly(cs) => {
                        let deg = match cs {
                            Coeffs::Exact(v) => v.len(),
                            Coeffs::Fixed { m, .. } => m.len(),
                        };
                        let mut mono = Vec::with_capacity(deg);
                        let mut t = BigInt::one();
                        for _ in 0..deg {
                            mono.push(t.clone());
                            t *= &x;
                        }
                        check_fract(cs.combine(&mono), n)
                    }
                    Comp::Expr(e) => eval_expr(e, &x, prec, hp, n),
                })
                .collect()
        }
        Eval::Linear { rows } => {
            let mut mono = vec![BigInt::one()];
            mono.extend(index.iter().map(|&v| BigInt::from(v)));
            rows.iter()
                .map(|r| check_fract(r.combine(&mono), index[0]))
                .collect()
        }
        Eval::Explicit { points } => {
            let n = index[0];
            points
                .get((n as usize).wrapping_sub(1))
                .cloned()
                .ok_or_else(|| Error::domain(format!("explicit family has no point {n}")))
        }
        Eval::Diff { base, shift } => {
            let shifted: Vec<u64> = index.iter().zip(shift).map(|(a, b)| a + b).collect();
            let hi = eval_at(base, primes, prec, hp, &shifted)?;
            let lo = eval_at(base, primes, prec, hp, index)?;
            Ok(hi.iter().zip(&lo).map(|(a, b)| a.sub(b)).collect())
        }
    }
}

fn check_fract(r: Real, index: u64) -> Result<Real> {
    if r.fract_trusted() {
        Ok(r)
    } else {
        Err(Error::precision(index, "fixed-point coefficients too coarse for this index"))
    }
}

// Heuristic absolute error of a transcendental evaluation at precision p:
// a few ulps of the result, inflated by the size of any exponent argument.
fn expr_error_log2(v: &BigFloat, p: usize) -> i64 {
    let mag = magnitude_exponent(v).unwrap_or(0);
    let amp = if mag > 1 { 64 - (mag as u64).leading_zeros() as i64 } else { 0 };
    mag + amp + 16 - p as i64
}

fn eval_expr(e: &RealExpr, x: &BigInt, prec: usize, hp: &mut Hp, index: u64) -> Result<Real> {
    if let Some(v) = e.eval_exact(Some(&BigRational::from_integer(x.clone()))) {
        return Ok(Real::exact(v));
    }
    let mut p = prec.max(hp.prec());
    loop {
        if hp.prec() != p {
            *hp = Hp::new(p);
        }
        let xv = hp.from_int(x);
        let v = e.eval(hp, Some(&xv)).map_err(|err| match err {
            Error::Domain(d) => Error::domain(format!("at index {index}: {d}")),
            other => other,
        })?;
        let err = expr_error_log2(&v, p);
        if err <= -FRACT_BITS - 4 {
            return Ok(Real::approx(to_rational(&v)?, err));
        }
        let needed = (p as i64 + err + FRACT_BITS + 8) as usize;
        if needed > MAX_PRECISION {
            return Err(Error::precision(
                index,
                format!("value needs more than {MAX_PRECISION} bits for a 2^-40 fractional part"),
            ));
        }
        p = needed.max(p + 32);
    }
}

/// `x_n` for `n = start, start+1, ...` (`count` terms), each in `R^k`.
pub fn generate_family(spec: &SequenceSpec, count: usize) -> Result<Vec<Vec<Real>>> {
    if spec.index_dimension() != 1 {
        return Err(Error::Dimension {
            expected: 1,
            got: spec.index_dimension(),
        });
    }
    let start = spec.start();
    let ev = Evaluator::new(spec, start + count as u64)?;
    let prec = spec.precision_bits;
    (0..count as u64)
        .into_par_iter()
        .map_init(|| Hp::new(prec), |hp, i| ev.at(hp, &[start + i]))
        .collect()
}

/// Values over the box `start <= n_j < start + N_j`, last index fastest.
pub fn generate_box(spec: &SequenceSpec, dims: &[u64]) -> Result<Vec<Vec<Real>>> {
    if dims.len() != spec.index_dimension() {
        return Err(Error::Dimension {
            expected: spec.index_dimension(),
            got: dims.len(),
        });
    }
    if dims.iter().any(|&d| d == 0) {
        return Err(Error::domain("box sides must be at least 1"));
    }
    let total: u64 = dims.iter().product();
    let start = spec.start();
    let ev = Evaluator::new(spec, start + dims.iter().copied().max().unwrap_or(1))?;
    let prec = spec.precision_bits;
    (0..total)
        .into_par_iter()
        .map_init(
            || Hp::new(prec),
            |hp, flat| {
                let mut idx = vec![0u64; dims.len()];
                let mut r = flat;
                for j in (0..dims.len()).rev() {
                    idx[j] = start + r % dims[j];
                    r /= dims[j];
                }
                ev.at(hp, &idx)
            },
        )
        .collect()
}

/// `{x_n}` as 128-bit fixed-point phases, failing if any term's fractional
/// part is not known to `2^-40`.
pub fn fractional_parts(values: &[Vec<Real>]) -> Result<Vec<Vec<u128>>> {
    values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            if v.iter().all(|r| r.fract_trusted()) {
                Ok(v.iter().map(|r| r.fract_fixed()).collect())
            } else {
                Err(Error::precision(i as u64, "fractional part not resolved"))
            }
        })
        .collect()
}

/// Exact value of an integer-coefficient polynomial family at `n` (used as an
/// oracle and by the structural module).
pub fn integer_polynomial(spec: &SequenceSpec) -> Option<Vec<Vec<BigInt>>> {
    match &spec.kind {
        SequenceKind::Polynomial { components, .. } => components
            .iter()
            .map(|c| {
                c.iter()
                    .map(|e| e.as_rational().filter(|r| r.is_integer()).map(|r| r.to_integer()))
                    .collect::<Option<Vec<_>>>()
            })
            .collect(),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f64s(spec: &SequenceSpec, count: usize) -> Vec<f64> {
        generate_family(spec, count)
            .unwrap()
            .into_iter()
            .map(|v| v[0].to_f64())
            .collect()
    }

    #[test]
    fn squares() {
        let s = SequenceSpec::polynomial(&["n^2"]).unwrap();
        assert_eq!(f64s(&s, 4), vec![1.0, 4.0, 9.0, 16.0]);
        assert!(generate_family(&s, 4).unwrap().iter().all(|v| v[0].is_exact()));
    }

    #[test]
    fn power_log_at_two() {
        let s = SequenceSpec::power_log("1", "3/2", "0").unwrap();
        let v = f64s(&s, 1)[0];
        assert!((v - 2.8284271247461903).abs() < 1e-15);
    }

    #[test]
    fn prime_power_shift_minus_one() {
        let s = SequenceSpec::prime_power_shift(-1, &["1/2"]).unwrap();
        let v = f64s(&s, 3);
        assert!((v[0] - 1.0).abs() < 1e-15);
        assert!((v[1] - std::f64::consts::SQRT_2).abs() < 1e-15);
        assert!((v[2] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn irrational_polynomial_fract_is_accurate() {
        let s = SequenceSpec::polynomial(&["sqrt(2)*n^2"]).unwrap();
        let vals = generate_family(&s, 100_000).unwrap();
        let last = &vals[99_999][0];
        assert!(last.fract_trusted());
        // 10^10 * sqrt(2) = 14142135623.730950488...
        assert!((last.fract_f64() - 0.730950488016887).abs() < 1e-9);
    }

    #[test]
    fn difference_of_square_family() {
        let s = SequenceSpec::polynomial(&["sqrt(2)*n^2"]).unwrap();
        let d = difference_family(&s, &[1]).unwrap();
        match &d.kind {
            SequenceKind::Polynomial { components, .. } => {
                assert_eq!(components[0].len(), 2);
                assert_eq!(components[0][0].to_string(), "sqrt(2)");
                assert_eq!(components[0][1].to_string(), "2*sqrt(2)");
            }
            other => panic!("{other:?}"),
        }
        let k = SequenceSpec::kronecker("phi").unwrap();
        let dk = difference_family(&k, &[1]).unwrap();
        let v = f64s(&dk, 3);
        assert!(v.iter().all(|x| (x - 1.618033988749895).abs() < 1e-14));
        assert!(difference_family(&k, &[0]).is_err());
    }

    #[test]
    fn generic_difference_matches_direct() {
        let s = SequenceSpec::prime_power_shift(1, &["3/2"]).unwrap();
        let d = difference_family(&s, &[2]).unwrap();
        let dv = f64s(&d, 5);
        let sv = f64s(&s, 7);
        for i in 0..5 {
            assert!((dv[i] - (sv[i + 2] - sv[i])).abs() < 1e-9);
        }
    }

    #[test]
    fn validation() {
        assert!(SequenceSpec::power_log("1", "2", "1/2").unwrap().validate().is_err());
        assert!(SequenceSpec::power_log("1", "2", "2").unwrap().validate().is_ok());
        assert!(SequenceSpec::entire(&["exp(log(x)^1.5)"], &["1.5"]).unwrap().validate().is_err());
        assert!(SequenceSpec::prime_power_shift(2, &["2"]).unwrap().validate().is_err());
    }

    #[test]
    fn entire_function_at_primes() {
        let s = SequenceSpec::entire(&["exp(log(x)^1.2)"], &["1.2"]).unwrap();
        let v = generate_family(&s, 3).unwrap();
        let expect = (2f64.ln().powf(1.2)).exp();
        assert!((v[0][0].to_f64() - expect).abs() < 1e-12);
        assert!(v[2][0].fract_trusted());
    }

    #[test]
    fn kronecker_box() {
        let s = SequenceSpec::new(SequenceKind::Kronecker {
            matrix: vec![vec![RealExpr::parse("1/2").unwrap(), RealExpr::parse("0").unwrap()]],
            offset: vec![],
            start: 0,
        });
        let v = generate_box(&s, &[2, 3]).unwrap();
        let xs: Vec<f64> = v.iter().map(|p| p[0].to_f64()).collect();
        assert_eq!(xs, vec![0.0, 0.0, 0.0, 0.5, 0.5, 0.5]);
    }

    #[test]
    fn json_round_trip() {
        let s = SequenceSpec::power_log("2", "3/2", "-1").unwrap();
        let j = serde_json::to_string(&s).unwrap();
        let back: SequenceSpec = serde_json::from_str(&j).unwrap();
        assert_eq!(s, back);
        assert!(j.contains("\"kind\":\"power_log\""));
    }
}
