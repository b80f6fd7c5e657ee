//! Integer sets `H ⊂ Z^k \ {0}` obtained by flooring a family.

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::sequence::{Evaluator, SequenceSpec};
use crate::hp::{Hp, MAX_PRECISION};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SetSpec {
    pub generator: SequenceSpec,
    pub horizon: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SetEnumeration {
    #[serde(serialize_with = "crate::bigser::vec2")]
    pub elements: Vec<Vec<BigInt>>,
    /// Generator index of each element.
    pub indices: Vec<u64>,
    /// Indices whose floored value was the zero vector.
    pub dropped_zero: u64,
}

impl SetSpec {
    pub fn new(generator: SequenceSpec, horizon: u64) -> Self {
        SetSpec { generator, horizon }
    }

    pub fn dimension(&self) -> usize {
        self.generator.dimension()
    }
}

/// Floors of `x_n` at a single index, raising the precision until every floor
/// is certain.
pub fn floor_at(spec: &SequenceSpec, ev: &Evaluator, hp: &mut Hp, n: u64) -> Result<Vec<BigInt>> {
    let vals = ev.at(hp, &[n])?;
    let floors: Option<Vec<BigInt>> = vals.iter().map(|r| r.floor()).collect();
    if let Some(f) = floors {
        return Ok(f);
    }
    let mut bits = spec.precision_bits * 2;
    while bits <= MAX_PRECISION {
        let refined = spec.clone().with_precision(bits);
        let ev2 = Evaluator::new(&refined, n)?;
        let mut hp2 = Hp::new(bits);
        let vals = ev2.at(&mut hp2, &[n])?;
        if let Some(f) = vals.iter().map(|r| r.floor()).collect::<Option<Vec<_>>>() {
            return Ok(f);
        }
        bits *= 2;
    }
    Err(Error::precision(n, "floor undecided at maximum precision"))
}

/// Elements from the first `count` generator indices, zero vectors dropped.
/// If all of them are zero the scan continues up to the horizon before
/// reporting an empty set.
pub fn generate_set(set_spec: &SetSpec, count: u64) -> Result<SetEnumeration> {
    let spec = &set_spec.generator;
    if spec.index_dimension() != 1 {
        return Err(Error::Dimension {
            expected: 1,
            got: spec.index_dimension(),
        });
    }
    if count > set_spec.horizon {
        return Err(Error::domain(format!(
            "count {count} exceeds horizon {}",
            set_spec.horizon
        )));
    }
    let start = spec.start();
    let mut out = enumerate(spec, start, count)?;
    if out.elements.is_empty() {
        let rest = set_spec.horizon - count;
        if rest > 0 {
            let more = enumerate(spec, start + count, rest)?;
            if let Some(pos) = more.indices.first() {
                // Report only the first nonzero element beyond the requested count.
                out.dropped_zero += pos - (start + count);
                out.elements.push(more.elements[0].clone());
                out.indices.push(*pos);
            }
        }
        if out.elements.is_empty() {
            return Err(Error::EmptySet(format!(
                "every element up to horizon {} is zero",
                set_spec.horizon
            )));
        }
    }
    Ok(out)
}

fn enumerate(spec: &SequenceSpec, start: u64, count: u64) -> Result<SetEnumeration> {
    let ev = Evaluator::new(spec, start + count)?;
    let prec = spec.precision_bits;
    let floors: Vec<Vec<BigInt>> = (0..count)
        .into_par_iter()
        .map_init(|| Hp::new(prec), |hp, i| floor_at(spec, &ev, hp, start + i))
        .collect::<Result<_>>()?;
    let mut out = SetEnumeration {
        elements: Vec::new(),
        indices: Vec::new(),
        dropped_zero: 0,
    };
    for (i, f) in floors.into_iter().enumerate() {
        if f.iter().all(|v| v.is_zero()) {
            out.dropped_zero += 1;
        } else {
            out.elements.push(f);
            out.indices.push(start + i as u64);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::sequence::SequenceKind;
    use crate::expr::RealExpr;

    fn ints(e: &SetEnumeration) -> Vec<i64> {
        e.elements.iter().map(|v| i64::try_from(&v[0]).unwrap()).collect()
    }

    #[test]
    fn squares() {
        let s = SetSpec::new(SequenceSpec::polynomial(&["n^2"]).unwrap(), 100);
        assert_eq!(ints(&generate_set(&s, 3).unwrap()), vec![1, 4, 9]);
    }

    #[test]
    fn floor_of_three_halves_power() {
        let mut g = SequenceSpec::power_log("1", "3/2", "0").unwrap();
        if let SequenceKind::PowerLog { start, .. } = &mut g.kind {
            *start = 1;
        }
        let s = SetSpec::new(g, 100);
        assert_eq!(ints(&generate_set(&s, 4).unwrap()), vec![1, 2, 5, 8]);
    }

    #[test]
    fn floor_of_shifted_prime_power() {
        let s = SetSpec::new(SequenceSpec::prime_power_shift(-1, &["5/2"]).unwrap(), 100);
        assert_eq!(ints(&generate_set(&s, 3).unwrap()), vec![1, 5, 32]);
    }

    #[test]
    fn zeros_dropped_and_prefix_property() {
        let g = SequenceSpec::polynomial(&["n/3"]).unwrap();
        let s = SetSpec::new(g, 1000);
        let a = generate_set(&s, 10).unwrap();
        assert_eq!(a.dropped_zero, 2);
        assert_eq!(ints(&a), vec![1, 1, 1, 2, 2, 2, 3, 3]);
        let b = generate_set(&s, 20).unwrap();
        assert_eq!(&b.elements[..a.elements.len()], &a.elements[..]);
    }

    #[test]
    fn empty_set_error() {
        let g = SequenceSpec::new(SequenceKind::Polynomial {
            components: vec![vec![RealExpr::parse("1/2").unwrap()]],
            start: 1,
        });
        let s = SetSpec::new(g, 50);
        assert!(matches!(generate_set(&s, 5), Err(Error::EmptySet(_))));
    }
}
