//! One function per subcommand. Each returns a human summary, a JSON result
//! and an exit code; `main` wraps the result with the run configuration.

use std::collections::HashSet;

use clap::{Args, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Value};

use vdc_core::dynamics::{
    birkhoff_average, qary_digits, recurrence_scan, rotation_overlap, DigitMapSystem, Observable,
    RotationSystem,
};
use vdc_core::equidist::discrepancy::{star_discrepancy, DiscrepancyMethod};
use vdc_core::equidist::udtest::{frequency_budget, ud_test, UdOptions};
use vdc_core::equidist::weyl::{weyl_sum_box, weyl_sum_fixed};
use vdc_core::generators::sequence::{
    difference_family, fractional_parts, generate_family, integer_polynomial,
};
use vdc_core::generators::{generate_set, log_order_estimate};
use vdc_core::generators::sequence::SequenceKind;
use vdc_core::normal::{
    digit_prefix, digits_to_string, normality_report, Construction, StreamSpec,
};
use vdc_core::structural::cert::ProofMode;
use vdc_core::structural::{
    default_samples, dq_filter, kmf_criterion, progression_verdict, reduce_basis, scan_multiples,
    shifted_prime_verdict, sufficient_condition_test, IntPoly, KmfOutcome, Recheck,
    SufficientOptions, XSample,
};
use vdc_core::witness::fejer::fejer_witness;
use vdc_core::witness::lp::{lp_witness_search, LpOptions, LpOutcome};
use vdc_core::witness::trig::Witness;
use vdc_core::witness::verify::{verify_witness, Verdict};
use vdc_core::{Error, RealExpr, Result, SequenceSpec, SetSpec};

use crate::exit;
use crate::specs::{int_list, pair, parse_family, parse_set, shape_contains, SetShape};
use crate::Common;

pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

pub struct Outcome {
    pub summary: String,
    pub result: Value,
    pub code: u8,
    pub table: Option<Table>,
}

fn table(header: &[&str], rows: Vec<Vec<String>>) -> Option<Table> {
    Some(Table {
        header: header.iter().map(|s| s.to_string()).collect(),
        rows,
    })
}

fn rational(s: &str) -> Result<BigRational> {
    RealExpr::parse(s)?
        .as_rational()
        .ok_or_else(|| Error::Domain(format!("`{s}` must be rational")))
}

fn family(text: &str, common: &Common, difference: &Option<String>) -> Result<SequenceSpec> {
    let spec = parse_family(text, common.precision)?;
    match difference {
        None => Ok(spec),
        Some(h) => {
            let h: Vec<u64> = int_list(h)?
                .into_iter()
                .map(|v| u64::try_from(v).map_err(|_| Error::Domain("difference shifts must be nonnegative".into())))
                .collect::<Result<_>>()?;
            difference_family(&spec, &h)
        }
    }
}

// ---------------------------------------------------------------- gen

#[derive(Args, Debug, Serialize)]
pub struct GenArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub common: Common,
    /// Family to evaluate.
    #[arg(long, conflicts_with = "set", required_unless_present = "set")]
    pub family: Option<String>,
    /// Set to enumerate.
    #[arg(long)]
    pub set: Option<String>,
    /// Number of indices.
    #[arg(long, short = 'n', default_value_t = 20)]
    pub count: u64,
    /// Index horizon for sets (default: the count).
    #[arg(long)]
    pub horizon: Option<u64>,
}

pub fn gen(a: &GenArgs) -> Result<Outcome> {
    if let Some(s) = &a.set {
        let horizon = a.horizon.unwrap_or(a.count).max(a.count);
        let (set, _) = parse_set(s, horizon, a.common.precision)?;
        let e = generate_set(&set, a.count)?;
        let rows = e
            .indices
            .iter()
            .zip(&e.elements)
            .map(|(n, v)| std::iter::once(n.to_string()).chain(v.iter().map(|x| x.to_string())).collect())
            .collect();
        let header: Vec<String> = std::iter::once("n".to_string())
            .chain((1..=set.dimension()).map(|i| format!("h{i}")))
            .collect();
        let preview: Vec<String> = e.elements.iter().take(10).map(|v| fmt_vec(v)).collect();
        return Ok(Outcome {
            summary: format!("{} elements: {} ...", e.elements.len(), preview.join(" ")),
            result: serde_json::to_value(&e)?,
            code: exit::OK,
            table: Some(Table { header, rows }),
        });
    }
    let spec = family(a.family.as_deref().unwrap_or_default(), &a.common, &None)?;
    let count = usize::try_from(a.count).map_err(|_| Error::Domain("count too large".into()))?;
    let values = generate_family(&spec, count)?;
    let fracs: Vec<Vec<f64>> = values.iter().map(|v| v.iter().map(|r| r.fract_f64()).collect()).collect();
    let k = spec.dimension();
    let start = spec.start();
    let rows = values
        .iter()
        .zip(&fracs)
        .enumerate()
        .map(|(i, (v, f))| {
            std::iter::once((start + i as u64).to_string())
                .chain(v.iter().map(|r| r.to_f64().to_string()))
                .chain(f.iter().map(|x| x.to_string()))
                .collect()
        })
        .collect();
    let header: Vec<String> = std::iter::once("n".to_string())
        .chain((1..=k).map(|i| format!("x{i}")))
        .chain((1..=k).map(|i| format!("frac{i}")))
        .collect();
    Ok(Outcome {
        summary: format!("{} values of a {k}-dimensional family starting at n = {start}", values.len()),
        result: json!({ "start": start, "values": values, "fractional_parts": fracs }),
        code: exit::OK,
        table: Some(Table { header, rows }),
    })
}

fn fmt_vec(v: &[BigInt]) -> String {
    if v.len() == 1 {
        v[0].to_string()
    } else {
        format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
    }
}

// ---------------------------------------------------------------- weyl

#[derive(Args, Debug, Serialize)]
pub struct WeylArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub common: Common,
    #[arg(long)]
    pub family: String,
    /// Number of points.
    #[arg(long, short = 'n', default_value_t = 10_000)]
    pub count: usize,
    /// Single frequency `h1,h2,...`; without it the u.d. screen runs.
    #[arg(long, allow_hyphen_values = true)]
    pub h: Option<String>,
    /// Box sizes `N1,N2,...` for multi-index families.
    #[arg(long = "box")]
    pub dims: Option<String>,
    /// Frequency radius for the screen.
    #[arg(long)]
    pub radius: Option<i64>,
    /// Screen threshold (default 4/sqrt(N)).
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Use the difference family `x_{n+h} - x_n`.
    #[arg(long)]
    pub difference: Option<String>,
}

pub fn weyl(a: &WeylArgs) -> Result<Outcome> {
    let spec = family(&a.family, &a.common, &a.difference)?;
    if let Some(h) = &a.h {
        let h = int_list(h)?;
        let rep = match &a.dims {
            Some(d) => {
                let dims: Vec<u64> = int_list(d)?.into_iter().map(|v| v.max(0) as u64).collect();
                weyl_sum_box(&spec, &h, &dims)?
            }
            None => {
                let values = generate_family(&spec, a.count)?;
                weyl_sum_fixed(&fractional_parts(&values)?, &h)?
            }
        };
        return Ok(Outcome {
            summary: format!("|S_N(h)|/N = {:.6e} for h = {:?}, N = {}", rep.modulus, rep.frequency, rep.n),
            result: serde_json::to_value(&rep)?,
            code: exit::OK,
            table: table(&["h", "N", "re", "im", "modulus"], vec![vec![
                fmt_i64s(&rep.frequency),
                rep.n.to_string(),
                rep.re.to_string(),
                rep.im.to_string(),
                rep.modulus.to_string(),
            ]]),
        });
    }
    let frequencies = a.radius.map(|r| frequency_budget(spec.dimension(), r));
    let rep = ud_test(&spec, a.count, &UdOptions { frequencies, threshold: a.threshold })?;
    let rows = rep
        .moduli
        .iter()
        .map(|m| vec![fmt_i64s(&m.h), m.modulus.to_string()])
        .collect();
    let code = if rep.consistent() { exit::OK } else { exit::INCONCLUSIVE };
    let mut result = serde_json::to_value(&rep)?;
    if let SequenceKind::EntireLogOrder { functions, .. } = &spec.kind {
        let estimates = functions
            .iter()
            .map(|f| Ok(serde_json::to_value(log_order_estimate(f, 1e12)?)?))
            .collect::<Result<Vec<_>>>()?;
        result["log_order"] = Value::Array(estimates);
    }
    Ok(Outcome {
        summary: format!(
            "{:?}: max modulus {:.6} at h = {:?}, threshold {:.6} ({} frequencies, N = {})",
            rep.verdict,
            rep.max_modulus,
            rep.argmax,
            rep.threshold,
            rep.moduli.len(),
            rep.n
        ),
        result,
        code,
        table: table(&["h", "modulus"], rows),
    })
}

fn fmt_i64s(v: &[i64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

// ---------------------------------------------------------------- disc

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodArg {
    Fast,
    Oracle,
}

#[derive(Args, Debug, Serialize)]
pub struct DiscArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub common: Common,
    #[arg(long)]
    pub family: String,
    #[arg(long, short = 'n', default_value_t = 10_000)]
    pub count: usize,
    #[arg(long, value_enum, default_value_t = MethodArg::Fast)]
    pub method: MethodArg,
    #[arg(long)]
    pub difference: Option<String>,
}

pub fn disc(a: &DiscArgs) -> Result<Outcome> {
    let spec = family(&a.family, &a.common, &a.difference)?;
    if spec.dimension() != 1 {
        return Err(Error::Dimension { expected: 1, got: spec.dimension() });
    }
    let values = generate_family(&spec, a.count)?;
    let pts: Vec<f64> = values.iter().map(|v| v[0].fract_f64()).collect();
    let method = match a.method {
        MethodArg::Fast => DiscrepancyMethod::Fast,
        MethodArg::Oracle => DiscrepancyMethod::Oracle,
    };
    let rep = star_discrepancy(&pts, method)?;
    Ok(Outcome {
        summary: format!("D*_N = {:.6e} (N = {}, sqrt(N)·D* = {:.4})", rep.dstar, rep.n, rep.dstar * (rep.n as f64).sqrt()),
        result: serde_json::to_value(&rep)?,
        code: exit::OK,
        table: table(&["N", "dstar"], vec![vec![rep.n.to_string(), rep.dstar.to_string()]]),
    })
}

// ---------------------------------------------------------------- witness

#[derive(Clone, Copy, Debug, ValueEnum, Serialize, PartialEq)]
#[serde(rename_all = "snake_case")]
pub enum WitnessMethod {
    Auto,
    Fejer,
    Lp,
}

#[derive(Args, Debug, Serialize)]
pub struct WitnessArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub common: Common,
    #[arg(long)]
    pub set: String,
    #[arg(long)]
    pub epsilon: f64,
    #[arg(long, value_enum, default_value_t = WitnessMethod::Auto)]
    pub method: WitnessMethod,
    /// Distinct `±h` pairs offered to the LP.
    #[arg(long, default_value_t = 24)]
    pub terms: usize,
    /// LP grid points per axis.
    #[arg(long)]
    pub grid: Option<u64>,
    /// Index horizon used when enumerating the set.
    #[arg(long, default_value_t = 10_000)]
    pub horizon: u64,
}

struct Membership {
    shape: SetShape,
    elements: HashSet<Vec<i64>>,
}

impl Membership {
    fn new(set: &SetSpec, shape: SetShape) -> Result<Self> {
        let elements = if shape_contains(&shape, &BigInt::from(1)).is_some() {
            HashSet::new()
        } else {
            generate_set(set, set.horizon)?
                .elements
                .iter()
                .filter_map(|v| v.iter().map(|x| x.to_i64()).collect::<Option<Vec<_>>>())
                .collect()
        };
        Ok(Membership { shape, elements })
    }

    /// `h ∈ H ∪ −H`.
    fn contains(&self, h: &[i64]) -> bool {
        let neg: Vec<i64> = h.iter().map(|x| -x).collect();
        if h.len() == 1 {
            if let Some(r) = shape_contains(&self.shape, &BigInt::from(h[0])) {
                return r || shape_contains(&self.shape, &BigInt::from(-h[0])).unwrap_or(false);
            }
        }
        self.elements.contains(h) || self.elements.contains(&neg)
    }
}

fn fejer_order(epsilon: f64) -> u64 {
    let mut k = (1.0 / epsilon).ceil().max(1.0) as u64 + 1;
    while 1.0 / ((k - 1) as f64) > epsilon {
        k += 1;
    }
    k
}

pub fn witness(a: &WitnessArgs) -> Result<Outcome> {
    if !(a.epsilon > 0.0 && a.epsilon < 1.0) {
        return Err(Error::Domain("epsilon must lie in (0, 1)".into()));
    }
    let (set, shape) = parse_set(&a.set, a.horizon, a.common.precision)?;
    let member = Membership::new(&set, shape.clone())?;
    let k_order = fejer_order(a.epsilon);
    let dim = set.dimension();
    let fejer_m = if dim == 1 {
        let smallest = match shape {
            SetShape::Multiples(m) => Some(m),
            _ => member.elements.iter().map(|v| v[0].abs()).filter(|&x| x > 0).min(),
        };
        smallest.filter(|&m| (1..k_order as i64).all(|j| member.contains(&[j * m])))
    } else {
        None
    };
    let use_fejer = match a.method {
        WitnessMethod::Fejer => {
            if fejer_m.is_none() {
                return Err(Error::Domain(format!(
                    "no m with m, 2m, ..., {}m in the set; try --method lp",
                    k_order - 1
                )));
            }
            true
        }
        WitnessMethod::Lp => false,
        WitnessMethod::Auto => fejer_m.is_some(),
    };
    if use_fejer {
        let m = fejer_m.expect("checked");
        let w = fejer_witness(&[m], k_order)?;
        return Ok(witness_outcome("fejer", w, a.epsilon));
    }
    let mut hs: Vec<Vec<i64>> = Vec::new();
    let mut seen = HashSet::new();
    let e = generate_set(&set, set.horizon)?;
    for v in &e.elements {
        let Some(h) = v.iter().map(|x| x.to_i64()).collect::<Option<Vec<i64>>>() else {
            continue;
        };
        let c = vdc_core::witness::trig::canonical(&h);
        if seen.insert(c.clone()) {
            hs.push(c);
            if hs.len() == a.terms {
                break;
            }
        }
    }
    let opts = LpOptions { grid: a.grid, ..LpOptions::default() };
    match lp_witness_search(&hs, a.epsilon, &opts)? {
        LpOutcome::Feasible { witness } => Ok(witness_outcome("lp", witness, a.epsilon)),
        outcome @ LpOutcome::InfeasibleAtTruncation { .. } => Ok(Outcome {
            summary: format!(
                "no witness among the first {} frequency pairs at epsilon {} (inconclusive for the full set)",
                hs.len(),
                a.epsilon
            ),
            result: json!({ "method": "lp", "frequencies": hs, "outcome": outcome }),
            code: exit::INCONCLUSIVE,
            table: None,
        }),
    }
}

fn witness_table(w: &Witness) -> Option<Table> {
    table(
        &["h", "a"],
        w.terms.iter().map(|t| vec![fmt_i64s(&t.h), t.a.to_string()]).collect(),
    )
}

fn witness_outcome(method: &str, w: Witness, epsilon: f64) -> Outcome {
    let ok = w.certified_min >= -epsilon;
    Outcome {
        summary: format!(
            "{method} witness with {} terms, certified min {:.6} (epsilon {epsilon})",
            w.terms.len(),
            w.certified_min
        ),
        table: witness_table(&w),
        result: json!({ "method": method, "witness": w }),
        code: if ok { exit::OK } else { exit::BOUND },
    }
}

// ---------------------------------------------------------------- verify

#[derive(Args, Debug, Serialize)]
pub struct VerifyArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub common: Common,
    /// Witness JSON, or a `vdc witness` artifact.
    #[arg(long)]
    pub witness: String,
    #[arg(long)]
    pub set: String,
    #[arg(long)]
    pub epsilon: f64,
    /// Verification grid per axis (default: max(2^14, 4 × witness grid)).
    #[arg(long)]
    pub grid: Option<u64>,
    #[arg(long, default_value_t = 10_000)]
    pub horizon: u64,
}

fn load_witness(text: &str) -> Result<Witness> {
    let raw = match text.strip_prefix('@') {
        Some(p) => std::fs::read_to_string(p)?,
        None if text.trim_start().starts_with('{') => text.to_string(),
        None => std::fs::read_to_string(text)?,
    };
    let v: Value = serde_json::from_str(&raw)?;
    let inner = v
        .pointer("/result/witness")
        .or_else(|| v.get("witness"))
        .cloned()
        .unwrap_or(v);
    Ok(serde_json::from_value(inner)?)
}

pub fn verify(a: &VerifyArgs) -> Result<Outcome> {
    let w = load_witness(&a.witness)?;
    let (set, shape) = parse_set(&a.set, a.horizon, a.common.precision)?;
    let member = Membership::new(&set, shape)?;
    let grid = a.grid.unwrap_or_else(|| (1u64 << 14).max(4 * w.grid));
    let verdict = verify_witness(&w, &|h| member.contains(h), a.epsilon, grid)?;
    let (code, summary) = match &verdict {
        Verdict::Ok { grid_min, margin, .. } => (
            exit::OK,
            format!("ok: grid min {grid_min:.6} >= -{} - {margin:.2e} on a {grid}-point grid", a.epsilon),
        ),
        Verdict::SpectrumViolation { h } => (exit::SPECTRUM, format!("spectrum violation: {h:?} is not in the set")),
        Verdict::NormalizationViolation { coefficient_sum } => (
            exit::BOUND,
            format!("normalization violation: coefficients sum to {coefficient_sum} or are not symmetric"),
        ),
        Verdict::BoundViolation { x, value, .. } => {
            (exit::BOUND, format!("bound violation: P({x:?}) = {value:.6} < -{}", a.epsilon))
        }
    };
    Ok(Outcome {
        summary,
        result: json!({ "grid": grid, "verdict": verdict }),
        code,
        table: None,
    })
}

// ---------------------------------------------------------------- refute

#[derive(Args, Debug, Serialize)]
pub struct RefuteArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub common: Common,
    #[arg(long, required_unless_present_any = ["progression", "shifted_prime", "poly"])]
    pub set: Option<String>,
    /// `a,b`: the set {a n + b}.
    #[arg(long, allow_hyphen_values = true)]
    pub progression: Option<String>,
    /// `a,b`: the set {a p + b} over primes.
    #[arg(long, allow_hyphen_values = true)]
    pub shifted_prime: Option<String>,
    /// Integer polynomial: the set {P(n)}.
    #[arg(long)]
    pub poly: Option<String>,
    /// Largest modulus tried.
    #[arg(long, default_value_t = 50)]
    pub qmax: u64,
    #[arg(long, default_value_t = 100_000)]
    pub horizon: u64,
}

fn progression_outcome(a: i64, b: i64) -> Result<Outcome> {
    let v = progression_verdict(a, b)?;
    let vdc = v.is_vdc();
    Ok(Outcome {
        summary: if vdc {
            format!("{{{a}n{b:+}}} is van der Corput ({a} divides {b})")
        } else {
            format!("refuted: {{{a}n{b:+}}} is not van der Corput ({a} does not divide {b})")
        },
        result: serde_json::to_value(&v)?,
        code: if vdc { exit::OK } else { exit::REFUTED },
        table: None,
    })
}

fn shifted_outcome(a: i64, b: i64) -> Result<Outcome> {
    let v = shifted_prime_verdict(a, b)?;
    Ok(Outcome {
        summary: format!("{{{a}p{b:+}}}: {}", v.reason),
        code: if v.vdc { exit::OK } else { exit::REFUTED },
        result: serde_json::to_value(&v)?,
        table: None,
    })
}

fn kmf_outcome(p: &IntPoly, q_max: u64) -> Result<Outcome> {
    let v = kmf_criterion(p, q_max)?;
    let rows = v
        .roots
        .iter()
        .map(|r| vec![r.q.to_string(), r.root.map_or(String::new(), |z| z.to_string())])
        .collect();
    let (summary, code) = match &v.outcome {
        KmfOutcome::AllRootsFound { verified_up_to, exact_for_all_q } => (
            if *exact_for_all_q {
                "P(0) = 0: a root exists for every q; the set is van der Corput".to_string()
            } else {
                format!("roots found for every q <= {verified_up_to}")
            },
            exit::OK,
        ),
        KmfOutcome::ObstructionAtQ { q, .. } => {
            (format!("refuted: P(z) = 0 has no solution modulo {q}"), exit::REFUTED)
        }
    };
    Ok(Outcome {
        summary,
        result: serde_json::to_value(&v)?,
        code,
        table: table(&["q", "smallest_root"], rows),
    })
}

pub fn refute(a: &RefuteArgs) -> Result<Outcome> {
    if let Some(p) = &a.progression {
        let (x, y) = pair(p)?;
        return progression_outcome(x, y);
    }
    if let Some(p) = &a.shifted_prime {
        let (x, y) = pair(p)?;
        return shifted_outcome(x, y);
    }
    if let Some(p) = &a.poly {
        return kmf_outcome(&IntPoly::parse(p)?, a.qmax);
    }
    let (set, shape) = parse_set(a.set.as_deref().unwrap_or_default(), a.horizon, a.common.precision)?;
    match shape {
        SetShape::Multiples(m) => return progression_outcome(m, 0),
        SetShape::Progression(x, y) => return progression_outcome(x, y),
        SetShape::ShiftedPrimes { shift, theta_one: true } if shift != 0 => return shifted_outcome(1, shift),
        _ => {}
    }
    if let Some(polys) = integer_polynomial(&set.generator) {
        if polys.len() == 1 {
            return kmf_outcome(&IntPoly::new(polys[0].clone()), a.qmax);
        }
    }
    let qs: Vec<u64> = (2..=a.qmax).collect();
    let (counts, cert) = scan_multiples(&set, &qs, a.horizon)?;
    let rows = counts
        .iter()
        .map(|c| vec![c.q.to_string(), c.count.to_string(), format!("{:?}", c.exact_infinite)])
        .collect();
    let (summary, code) = match &cert {
        Some(c) => {
            let exact = matches!(&c.recheck, Recheck::FiniteMultiples { mode: ProofMode::Exact, .. });
            if exact {
                (format!("refuted: {}", c.summary), exit::REFUTED)
            } else {
                (format!("empirical only: {}", c.summary), exit::INCONCLUSIVE)
            }
        }
        None => (
            format!("no refutation for q <= {} up to horizon {}", a.qmax, a.horizon),
            exit::INCONCLUSIVE,
        ),
    };
    Ok(Outcome {
        summary,
        result: json!({ "multiples": counts, "certificate": cert }),
        code,
        table: table(&["q", "multiples", "infinitely_many"], rows),
    })
}

// ---------------------------------------------------------------- kmf

#[derive(Args, Debug, Serialize)]
pub struct KmfArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub common: Common,
    /// Integer polynomial in z (or n, x).
    #[arg(long)]
    pub poly: String,
    #[arg(long, default_value_t = 100)]
    pub qmax: u64,
}

pub fn kmf(a: &KmfArgs) -> Result<Outcome> {
    kmf_outcome(&IntPoly::parse(&a.poly)?, a.qmax)
}

// ---------------------------------------------------------------- dq-test

#[derive(Args, Debug, Serialize)]
pub struct DqArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub common: Common,
    #[arg(long)]
    pub family: String,
    /// Values of q.
    #[arg(long, default_value = "1,2,3")]
    pub q: String,
    /// Basis components (default: chosen greedily for independence).
    #[arg(long)]
    pub basis: Option<String>,
    /// Points per test.
    #[arg(long, short = 'n', default_value_t = 10_000)]
    pub count: usize,
    /// Sample vectors x, coordinates comma-separated; repeatable.
    #[arg(long = "x")]
    pub x: Vec<String>,
    /// List D_q over the first `horizon` indices instead of testing.
    #[arg(long)]
    pub list: bool,
    #[arg(long)]
    pub horizon: Option<u64>,
    /// Largest index scanned while collecting D_q.
    #[arg(long, default_value_t = 10_000_000)]
    pub max_index: u64,
}

pub fn dq_test(a: &DqArgs) -> Result<Outcome> {
    let g = parse_family(&a.family, a.common.precision)?;
    let qs: Vec<u64> = int_list(&a.q)?
        .into_iter()
        .map(|q| u64::try_from(q).ok().filter(|&q| q >= 1).ok_or_else(|| Error::Domain("q must be positive".into())))
        .collect::<Result<_>>()?;
    let basis: Option<Vec<usize>> = a
        .basis
        .as_ref()
        .map(|b| int_list(b).map(|v| v.into_iter().map(|i| i.max(0) as usize).collect()))
        .transpose()?;
    if a.list {
        let basis = match basis {
            Some(b) => b,
            None => reduce_basis(&g)?,
        };
        let horizon = a.horizon.unwrap_or(1000);
        let mut results = Vec::new();
        let mut rows = Vec::new();
        for &q in &qs {
            let r = dq_filter(&g, &basis, q, horizon)?;
            for (n, t) in r.indices.iter().zip(&r.tuples) {
                rows.push(vec![q.to_string(), n.to_string(), fmt_vec(t)]);
            }
            results.push(r);
        }
        let summary = results
            .iter()
            .map(|r| format!("q={}: {} elements", r.q, r.tuples.len()))
            .collect::<Vec<_>>()
            .join(", ");
        return Ok(Outcome {
            summary,
            result: serde_json::to_value(&results)?,
            code: exit::OK,
            table: table(&["q", "n", "tuple"], rows),
        });
    }
    let m = basis.as_ref().map_or_else(|| reduce_basis(&g).map(|b| b.len()), |b| Ok(b.len()))?;
    let samples: Vec<XSample> = if a.x.is_empty() {
        default_samples(m, a.common.seed)
    } else {
        a.x.iter()
            .enumerate()
            .map(|(i, s)| {
                Ok(XSample {
                    label: format!("x{}", i + 1),
                    coords: s.split(',').map(RealExpr::parse).collect::<Result<_>>()?,
                })
            })
            .collect::<Result<_>>()?
    };
    let opts = SufficientOptions { n: a.count, max_index: a.max_index, ..SufficientOptions::default() };
    let r = sufficient_condition_test(&g, basis.as_deref(), &qs, &samples, &opts)?;
    let rows = r
        .per_q
        .iter()
        .flat_map(|e| {
            e.tests.iter().map(move |t| {
                vec![
                    e.q.to_string(),
                    t.label.clone(),
                    e.elements.to_string(),
                    t.max_modulus.to_string(),
                    fmt_i64s(&t.argmax),
                    t.threshold.to_string(),
                    t.consistent.to_string(),
                ]
            })
        })
        .collect();
    let code = if r.hypothesis_consistent { exit::OK } else { exit::INCONCLUSIVE };
    Ok(Outcome {
        summary: format!(
            "basis {:?}: hypothesis {} for q in {:?} ({})",
            r.basis,
            if r.hypothesis_consistent { "consistent" } else { "not supported" },
            qs,
            r.note
        ),
        result: serde_json::to_value(&r)?,
        code,
        table: table(&["q", "sample", "elements", "max_modulus", "argmax", "threshold", "consistent"], rows),
    })
}

// ---------------------------------------------------------------- recur

#[derive(Args, Debug, Serialize)]
pub struct RecurArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub common: Common,
    /// Rotation angle.
    #[arg(long, default_value = "phi")]
    pub alpha: String,
    /// Interval `u,v` for A = [u, v).
    #[arg(long, default_value = "0,1/2")]
    pub interval: String,
    /// Set of return times.
    #[arg(long, default_value = "poly:n")]
    pub set: String,
    #[arg(long, default_value = "1/20")]
    pub epsilon: String,
    /// Largest return time considered.
    #[arg(long, default_value_t = 10_000)]
    pub horizon: u64,
    /// Report the overlap at this n only.
    #[arg(long, allow_hyphen_values = true)]
    pub overlap: Option<i64>,
    /// Birkhoff average over this many steps.
    #[arg(long)]
    pub birkhoff: Option<u64>,
    /// Observable: `const`, `indicator:u,v`, `cos:h` or `sin:h`.
    #[arg(long, default_value = "indicator:0,1/2")]
    pub observable: String,
    #[arg(long, default_value = "0")]
    pub x0: String,
}

fn observable(s: &str) -> Result<Observable> {
    let bad = || Error::Parse(format!("unrecognised observable `{s}`"));
    if s == "const" {
        return Ok(Observable::Constant);
    }
    let (kind, body) = s.split_once(':').ok_or_else(bad)?;
    Ok(match kind {
        "indicator" => {
            let (u, v) = body.split_once(',').ok_or_else(bad)?;
            Observable::Indicator { u: RealExpr::parse(u)?, v: RealExpr::parse(v)? }
        }
        "cos" => Observable::Cos { h: body.trim().parse().map_err(|_| bad())? },
        "sin" => Observable::Sin { h: body.trim().parse().map_err(|_| bad())? },
        _ => return Err(bad()),
    })
}

pub fn recur(a: &RecurArgs) -> Result<Outcome> {
    let (u, v) = a
        .interval
        .split_once(',')
        .ok_or_else(|| Error::Parse("interval takes `u,v`".into()))?;
    let sys = RotationSystem::parse(&a.alpha, u, v)?;
    if let Some(n) = a.overlap {
        let ov = rotation_overlap(&sys, &BigInt::from(n))?;
        return Ok(Outcome {
            summary: format!("mu(A ∩ T^-{n} A) = {:.12}", ov.to_f64()),
            result: json!({ "n": n, "overlap": ov, "exact": ov.is_exact().then(|| ov.value.to_string()) }),
            code: exit::OK,
            table: None,
        });
    }
    if let Some(steps) = a.birkhoff {
        let f = observable(&a.observable)?;
        let avg = birkhoff_average(&sys, &f, steps, &RealExpr::parse(&a.x0)?)?;
        return Ok(Outcome {
            summary: format!("Birkhoff average over {steps} steps: {avg:.10}"),
            result: json!({ "observable": f, "steps": steps, "average": avg }),
            code: exit::OK,
            table: None,
        });
    }
    let (set, _) = parse_set(&a.set, a.horizon, a.common.precision)?;
    let eps = rational(&a.epsilon)?;
    let rep = recurrence_scan(&sys, &set, &eps, a.horizon)?;
    let rows = rep
        .hits
        .iter()
        .map(|h| vec![h.n.to_string(), h.t.to_string(), h.overlap.to_string()])
        .collect();
    let code = if rep.hits.is_empty() { exit::INCONCLUSIVE } else { exit::OK };
    Ok(Outcome {
        summary: format!(
            "{} of {} return times beat mu(A)^2 - epsilon = {:.6}{}",
            rep.hits.len(),
            rep.checked,
            rep.threshold,
            rep.hits.first().map_or(String::new(), |h| format!("; first n = {}", h.n))
        ),
        result: serde_json::to_value(&rep)?,
        code,
        table: table(&["n", "t", "overlap"], rows),
    })
}

// ---------------------------------------------------------------- normal

#[derive(Args, Debug, Serialize)]
pub struct NormalArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub common: Common,
    /// `champernowne`, `poly:g`, `primes`, `prime-poly:g`, `periodic:0110`,
    /// `explicit:0110`; a `+` after `poly`/`prime-poly` skips leading
    /// values below 1.
    #[arg(long, default_value = "champernowne")]
    pub stream: String,
    #[arg(long, short = 'q', default_value_t = 10)]
    pub base: u32,
    /// Digits examined.
    #[arg(long, default_value_t = 100_000)]
    pub digits: usize,
    /// Longest block length.
    #[arg(long, default_value_t = 2)]
    pub lmax: usize,
    /// Include the digit prefix as text.
    #[arg(long)]
    pub prefix: bool,
    /// Expand this real number in base q instead.
    #[arg(long)]
    pub expand: Option<String>,
}

fn construction(s: &str, q: u32) -> Result<Construction> {
    let digits = |body: &str| -> Result<Vec<u32>> {
        body.chars()
            .map(|c| c.to_digit(36).filter(|&d| d < q).ok_or_else(|| Error::Parse(format!("bad digit `{c}`"))))
            .collect()
    };
    let (kind, body) = s.split_once(':').unwrap_or((s, ""));
    let positive_start = kind.ends_with('+');
    Ok(match kind.trim_end_matches('+') {
        "champernowne" => Construction::Champernowne,
        "primes" => Construction::Primes,
        "poly" => Construction::Polynomial { g: RealExpr::parse(body)?, positive_start },
        "prime-poly" => Construction::PrimesPolynomial { g: RealExpr::parse(body)?, positive_start },
        "periodic" => Construction::Periodic { digits: digits(body)? },
        "explicit" => Construction::Explicit { digits: digits(body)? },
        _ => return Err(Error::Parse(format!("unrecognised stream `{s}`"))),
    })
}

pub fn normal(a: &NormalArgs) -> Result<Outcome> {
    if let Some(x) = &a.expand {
        let sys = DigitMapSystem::new(a.base, RealExpr::parse(x)?)?;
        let d = qary_digits(&sys, a.digits)?;
        let text = digits_to_string(&d);
        return Ok(Outcome {
            summary: format!("0.{text} (base {})", a.base),
            result: json!({ "q": a.base, "x": x, "digits": d }),
            code: exit::OK,
            table: table(&["j", "digit"], d.iter().enumerate().map(|(j, d)| vec![(j + 1).to_string(), d.to_string()]).collect()),
        });
    }
    let spec = StreamSpec::new(a.base, construction(&a.stream, a.base)?)?;
    let d = digit_prefix(&spec, a.digits)?;
    let r = normality_report(&d, a.base, a.lmax)?;
    let rows = r
        .blocks
        .iter()
        .flat_map(|b| {
            b.frequencies
                .iter()
                .map(move |(k, f)| vec![b.length.to_string(), k.clone(), f.to_string()])
        })
        .collect();
    let mut result = json!({ "stream": spec, "report": r });
    if a.prefix {
        result["prefix"] = Value::String(digits_to_string(&d));
    }
    Ok(Outcome {
        summary: format!(
            "{} digits in base {}: max block deviation {:.5}, proxy D* {:.5}",
            r.digits, r.q, r.max_deviation, r.proxy.star_discrepancy
        ),
        result,
        code: exit::OK,
        table: table(&["length", "block", "frequency"], rows),
    })
}
