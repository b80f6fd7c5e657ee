//! The family and set mini-language.
//!
//! Families: `poly:e1,e2`, `prime-poly:e`, `kronecker:a1,a2`,
//! `powerlog:α,β[,c]`, `entire:f;λ`, `primes`, `primes+b`, `primes-b^θ`,
//! inline JSON (`{...}`) or `@file.json`.
//! Sets add `multiples:m` and `progression:a,b`, and accept a JSON set
//! (`{"generator": ..., "horizon": ...}`) as well as a bare family.

use std::fs;

use num_bigint::BigInt;
use vdc_core::expr::RealExpr;
use vdc_core::generators::sequence::SequenceKind;
use vdc_core::{Error, Result, SequenceSpec, SetSpec};

/// What the mini-language knows about a set beyond its generator.
#[derive(Clone, Debug, PartialEq)]
pub enum SetShape {
    Multiples(i64),
    Progression(i64, i64),
    ShiftedPrimes { shift: i64, theta_one: bool },
    Generic,
}

fn read_json(text: &str) -> Result<String> {
    match text.strip_prefix('@') {
        Some(path) => Ok(fs::read_to_string(path)?),
        None => Ok(text.to_string()),
    }
}

fn is_json(text: &str) -> bool {
    text.starts_with('@') || text.trim_start().starts_with('{')
}

fn split(body: &str, sep: char) -> Vec<&str> {
    body.split(sep).map(str::trim).filter(|s| !s.is_empty()).collect()
}

fn int(s: &str) -> Result<i64> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("expected an integer, got `{s}`")))
}

fn shifted_primes(text: &str) -> Option<Result<(i64, String)>> {
    let rest = text.strip_prefix("primes")?;
    if rest.is_empty() {
        return Some(Ok((0, "1".into())));
    }
    let (shift, theta) = match rest.split_once('^') {
        Some((s, t)) => (s, t.to_string()),
        None => (rest, "1".to_string()),
    };
    let shift = if shift.is_empty() {
        Ok(0)
    } else if shift.starts_with('+') || shift.starts_with('-') {
        int(shift.trim_start_matches('+'))
    } else {
        return None;
    };
    Some(shift.map(|s| (s, theta)))
}

fn is_one(expr: &str) -> bool {
    RealExpr::parse(expr)
        .ok()
        .and_then(|e| e.as_rational())
        .is_some_and(|r| r == BigInt::from(1).into())
}

/// Parses a family description.
pub fn parse_family(text: &str, precision: Option<usize>) -> Result<SequenceSpec> {
    let text = text.trim();
    let spec = if is_json(text) {
        let spec: SequenceSpec = serde_json::from_str(&read_json(text)?)?;
        return finish(spec, precision);
    } else if let Some(body) = text.strip_prefix("poly:") {
        SequenceSpec::polynomial(&split(body, ','))?
    } else if let Some(body) = text.strip_prefix("prime-poly:") {
        SequenceSpec::prime_polynomial(&split(body, ','))?
    } else if let Some(body) = text.strip_prefix("kronecker:") {
        let alphas = split(body, ',');
        let matrix = alphas
            .iter()
            .map(|a| Ok(vec![RealExpr::parse(a)?]))
            .collect::<Result<_>>()?;
        SequenceSpec::new(SequenceKind::Kronecker {
            matrix,
            offset: vec![],
            start: 1,
        })
    } else if let Some(body) = text.strip_prefix("powerlog:") {
        match split(body, ',').as_slice() {
            [a, b] => SequenceSpec::power_log("1", a, b)?,
            [a, b, c] => SequenceSpec::power_log(c, a, b)?,
            _ => return Err(Error::Parse("powerlog takes `α,β` or `α,β,scale`".into())),
        }
    } else if let Some(body) = text.strip_prefix("entire:") {
        match split(body, ';').as_slice() {
            [f, order] => SequenceSpec::entire(&[f], &[order])?,
            _ => return Err(Error::Parse("entire takes `f;λ`".into())),
        }
    } else if let Some(r) = shifted_primes(text) {
        let (shift, theta) = r?;
        if is_one(&theta) {
            SequenceSpec::prime_polynomial(&[&format!("n + ({shift})")])?
        } else {
            SequenceSpec::prime_power_shift(shift, &[&theta])?
        }
    } else {
        return Err(Error::Parse(format!("unrecognised family `{text}`")));
    };
    finish(spec, precision)
}

fn finish(spec: SequenceSpec, precision: Option<usize>) -> Result<SequenceSpec> {
    let spec = match precision {
        Some(bits) => spec.with_precision(bits),
        None => spec,
    };
    spec.validate()?;
    Ok(spec)
}

/// Parses a set description; `horizon` applies unless a JSON set names one.
pub fn parse_set(text: &str, horizon: u64, precision: Option<usize>) -> Result<(SetSpec, SetShape)> {
    let text = text.trim();
    if is_json(text) {
        let raw = read_json(text)?;
        let value: serde_json::Value = serde_json::from_str(&raw)?;
        if value.get("generator").is_some() {
            let mut set: SetSpec = serde_json::from_value(value)?;
            set.generator = finish(set.generator, precision)?;
            return Ok((set, SetShape::Generic));
        }
        return Ok((SetSpec::new(parse_family(text, precision)?, horizon), SetShape::Generic));
    }
    if let Some(body) = text.strip_prefix("multiples:") {
        let m = int(body)?;
        if m == 0 {
            return Err(Error::Domain("multiples of 0 form no set".into()));
        }
        let g = parse_family(&format!("poly:{m} n"), precision)?;
        return Ok((SetSpec::new(g, horizon), SetShape::Multiples(m.abs())));
    }
    if let Some(body) = text.strip_prefix("progression:") {
        let (a, b) = pair(body)?;
        if a < 1 {
            return Err(Error::Domain("progression step must be at least 1".into()));
        }
        let g = parse_family(&format!("poly:{a} n + ({b})"), precision)?;
        return Ok((SetSpec::new(g, horizon), SetShape::Progression(a, b)));
    }
    let g = parse_family(text, precision)?;
    let shape = match shifted_primes(text) {
        Some(Ok((shift, theta))) => SetShape::ShiftedPrimes {
            shift,
            theta_one: is_one(&theta),
        },
        _ => SetShape::Generic,
    };
    Ok((SetSpec::new(g, horizon), shape))
}

/// `a,b` as two integers.
pub fn pair(body: &str) -> Result<(i64, i64)> {
    match split(body, ',').as_slice() {
        [a, b] => Ok((int(a)?, int(b)?)),
        _ => Err(Error::Parse(format!("expected `a,b`, got `{body}`"))),
    }
}

/// Comma-separated integers.
pub fn int_list(body: &str) -> Result<Vec<i64>> {
    split(body, ',').into_iter().map(int).collect()
}

/// Exact membership for the mini-language shapes.
pub fn shape_contains(shape: &SetShape, h: &BigInt) -> Option<bool> {
    match shape {
        SetShape::Multiples(m) => Some((h % m) == BigInt::from(0) && *h > BigInt::from(0)),
        SetShape::Progression(a, b) => {
            let d = h - b;
            Some(d > BigInt::from(0) && (&d % a) == BigInt::from(0))
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn families() {
        assert_eq!(parse_family("poly:n^2, n^3", None).unwrap().dimension(), 2);
        assert_eq!(parse_family("kronecker:sqrt(2),sqrt(3)", None).unwrap().dimension(), 2);
        assert!(parse_family("powerlog:3/2,0", None).is_ok());
        assert!(parse_family("entire:exp(ln(x)^(6/5));6/5", None).is_ok());
        assert!(parse_family("primes-1^3/2", None).is_ok());
        assert!(parse_family("bogus", None).is_err());
        assert_eq!(parse_family("poly:n", Some(256)).unwrap().precision_bits, 256);
    }

    #[test]
    fn sets() {
        let (_, shape) = parse_set("multiples:3", 100, None).unwrap();
        assert_eq!(shape, SetShape::Multiples(3));
        let (_, shape) = parse_set("progression:2,1", 100, None).unwrap();
        assert_eq!(shape, SetShape::Progression(2, 1));
        let (_, shape) = parse_set("primes+1", 100, None).unwrap();
        assert_eq!(shape, SetShape::ShiftedPrimes { shift: 1, theta_one: true });
        assert_eq!(shape_contains(&SetShape::Progression(2, 1), &BigInt::from(5)), Some(true));
        assert_eq!(shape_contains(&SetShape::Progression(2, 1), &BigInt::from(1)), Some(false));
    }
}
