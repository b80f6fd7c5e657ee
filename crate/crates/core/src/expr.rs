//! Real-valued expressions in one variable.
//!
//! This is the fixed grammar used for every real parameter a user can supply:
//! irrational coefficients (`sqrt(2)`, `phi`), exponents (`3/2`), and the
//! entire-function descriptors (`exp(log(x)^1.2)`). Decimal literals are read
//! as exact rationals, so `1.2` is `6/5`.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary | primary)*      // juxtaposition multiplies
//! unary  := '-' unary | power
//! power  := primary ('^' unary)?
//! primary:= number | const | var | func '(' expr ')' | '(' expr ')'
//! const  := pi | e | phi          var := x | n | p | z | t
//! func   := sqrt | exp | log | ln
//! ```

use std::fmt;
use std::str::FromStr;

use astro_float::BigFloat;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::hp::Hp;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NamedConst {
    Pi,
    E,
    Phi,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Sqrt,
    Exp,
    Ln,
}

#[derive(Clone, Debug, PartialEq)]
pub enum RealExpr {
    Num(BigRational),
    Const(NamedConst),
    Var,
    Neg(Box<RealExpr>),
    Add(Box<RealExpr>, Box<RealExpr>),
    Sub(Box<RealExpr>, Box<RealExpr>),
    Mul(Box<RealExpr>, Box<RealExpr>),
    Div(Box<RealExpr>, Box<RealExpr>),
    Pow(Box<RealExpr>, Box<RealExpr>),
    Func(Func, Box<RealExpr>),
}

impl RealExpr {
    pub fn int(v: i64) -> Self {
        RealExpr::Num(BigRational::from_integer(v.into()))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        RealExpr::Num(BigRational::new(n.into(), d.into()))
    }

    pub fn rational(r: BigRational) -> Self {
        RealExpr::Num(r)
    }

    pub fn parse(s: &str) -> Result<Self> {
        Parser::new(s)?.parse_all()
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, RealExpr::Num(r) if r.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, RealExpr::Num(r) if r.is_one())
    }

    pub fn has_var(&self) -> bool {
        match self {
            RealExpr::Var => true,
            RealExpr::Num(_) | RealExpr::Const(_) => false,
            RealExpr::Neg(a) | RealExpr::Func(_, a) => a.has_var(),
            RealExpr::Add(a, b)
            | RealExpr::Sub(a, b)
            | RealExpr::Mul(a, b)
            | RealExpr::Div(a, b)
            | RealExpr::Pow(a, b) => a.has_var() || b.has_var(),
        }
    }

    /// The exact rational value of a variable-free expression, when the
    /// expression only uses field operations and integer powers.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.has_var() {
            return None;
        }
        self.eval_exact(None)
    }

    /// Exact evaluation; `None` if a non-rational operation is involved.
    pub fn eval_exact(&self, var: Option<&BigRational>) -> Option<BigRational> {
        Some(match self {
            RealExpr::Num(r) => r.clone(),
            RealExpr::Var => var?.clone(),
            RealExpr::Const(_) | RealExpr::Func(..) => return None,
            RealExpr::Neg(a) => -a.eval_exact(var)?,
            RealExpr::Add(a, b) => a.eval_exact(var)? + b.eval_exact(var)?,
            RealExpr::Sub(a, b) => a.eval_exact(var)? - b.eval_exact(var)?,
            RealExpr::Mul(a, b) => a.eval_exact(var)? * b.eval_exact(var)?,
            RealExpr::Div(a, b) => {
                let d = b.eval_exact(var)?;
                if d.is_zero() {
                    return None;
                }
                a.eval_exact(var)? / d
            }
            RealExpr::Pow(a, b) => {
                let e = b.eval_exact(var)?;
                let base = a.eval_exact(var)?;
                if base.is_zero() && !e.is_positive() {
                    return None;
                }
                let root = if e.is_integer() {
                    base
                } else {
                    exact_root(&base, e.denom().to_u32()?)?
                };
                num_traits::pow::Pow::pow(root, e.numer().to_i32()?)
            }
        })
    }

    /// Evaluates at the context precision. Fails on domain violations
    /// (log of a non-positive number, division by zero, overflow).
    pub fn eval(&self, hp: &mut Hp, var: Option<&BigFloat>) -> Result<BigFloat> {
        let v = self.eval_inner(hp, var)?;
        if !crate::hp::is_finite(&v) {
            return Err(Error::domain(format!("`{self}` is not finite here")));
        }
        Ok(v)
    }

    fn eval_inner(&self, hp: &mut Hp, var: Option<&BigFloat>) -> Result<BigFloat> {
        Ok(match self {
            RealExpr::Num(r) => hp.from_ratio(r),
            RealExpr::Var => var
                .ok_or_else(|| Error::domain("expression has a free variable"))?
                .clone(),
            RealExpr::Const(NamedConst::Pi) => hp.pi(),
            RealExpr::Const(NamedConst::E) => hp.e(),
            RealExpr::Const(NamedConst::Phi) => {
                let five = hp.from_u64(5);
                let s = hp.sqrt(&five);
                let one = hp.from_u64(1);
                let two = hp.from_u64(2);
                hp.div(&hp.add(&one, &s), &two)
            }
            RealExpr::Neg(a) => a.eval_inner(hp, var)?.neg(),
            RealExpr::Add(a, b) => {
                let x = a.eval_inner(hp, var)?;
                let y = b.eval_inner(hp, var)?;
                hp.add(&x, &y)
            }
            RealExpr::Sub(a, b) => {
                let x = a.eval_inner(hp, var)?;
                let y = b.eval_inner(hp, var)?;
                hp.sub(&x, &y)
            }
            RealExpr::Mul(a, b) => {
                let x = a.eval_inner(hp, var)?;
                let y = b.eval_inner(hp, var)?;
                hp.mul(&x, &y)
            }
            RealExpr::Div(a, b) => {
                let x = a.eval_inner(hp, var)?;
                let y = b.eval_inner(hp, var)?;
                if y.is_zero() {
                    return Err(Error::domain(format!("division by zero in `{self}`")));
                }
                hp.div(&x, &y)
            }
            RealExpr::Pow(a, b) => {
                let base = a.eval_inner(hp, var)?;
                if let Some(e) = b.as_rational() {
                    return pow_rational(hp, &base, &e);
                }
                let e = b.eval_inner(hp, var)?;
                if !base.is_positive() {
                    return Err(Error::domain(format!(
                        "non-positive base with real exponent in `{self}`"
                    )));
                }
                hp.pow(&base, &e)
            }
            RealExpr::Func(f, a) => {
                let x = a.eval_inner(hp, var)?;
                match f {
                    Func::Sqrt => {
                        if x.is_negative() {
                            return Err(Error::domain(format!("sqrt of negative in `{self}`")));
                        }
                        hp.sqrt(&x)
                    }
                    Func::Exp => hp.exp(&x),
                    Func::Ln => {
                        if !x.is_positive() {
                            return Err(Error::domain(format!(
                                "log of non-positive value in `{self}`"
                            )));
                        }
                        hp.ln(&x)
                    }
                }
            }
        })
    }

    /// Expands a polynomial expression in the variable into its coefficient
    /// list (constant term first). Coefficients may themselves be irrational
    /// constants. Returns `None` for non-polynomial expressions.
    pub fn to_polynomial(&self) -> Option<Vec<RealExpr>> {
        let mut c = match self {
            RealExpr::Var => vec![RealExpr::int(0), RealExpr::int(1)],
            e if !e.has_var() => vec![e.clone()],
            RealExpr::Neg(a) => a.to_polynomial()?.into_iter().map(neg).collect(),
            RealExpr::Add(a, b) => poly_add(a.to_polynomial()?, b.to_polynomial()?),
            RealExpr::Sub(a, b) => poly_add(
                a.to_polynomial()?,
                b.to_polynomial()?.into_iter().map(neg).collect(),
            ),
            RealExpr::Mul(a, b) => poly_mul(&a.to_polynomial()?, &b.to_polynomial()?),
            RealExpr::Div(a, b) => {
                if b.has_var() {
                    return None;
                }
                a.to_polynomial()?
                    .into_iter()
                    .map(|c| div(c, (**b).clone()))
                    .collect()
            }
            RealExpr::Pow(a, b) => {
                let e = b.as_rational()?;
                if !e.is_integer() || e.is_negative() {
                    return None;
                }
                let e = e.to_integer().to_u32()?;
                let base = a.to_polynomial()?;
                let mut acc = vec![RealExpr::int(1)];
                for _ in 0..e {
                    acc = poly_mul(&acc, &base);
                }
                acc
            }
            _ => return None,
        };
        while c.len() > 1 && c.last().map_or(false, |x| x.is_zero()) {
            c.pop();
        }
        Some(c)
    }

    fn precedence(&self) -> u8 {
        match self {
            RealExpr::Add(..) | RealExpr::Sub(..) => 1,
            RealExpr::Mul(..) | RealExpr::Div(..) => 2,
            RealExpr::Num(r) if !r.is_integer() => 2,
            RealExpr::Neg(_) => 3,
            RealExpr::Num(r) if r.is_negative() => 3,
            RealExpr::Pow(..) => 4,
            _ => 5,
        }
    }
}

// `r^(1/q)` when it is rational.
fn exact_root(r: &BigRational, q: u32) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().nth_root(q);
    let d = r.denom().nth_root(q);
    (num_traits::pow::Pow::pow(&n, q) == *r.numer() && num_traits::pow::Pow::pow(&d, q) == *r.denom())
        .then(|| BigRational::new(n, d))
}

fn pow_rational(hp: &mut Hp, base: &BigFloat, e: &BigRational) -> Result<BigFloat> {
    if e.is_integer() {
        let n = e
            .to_integer()
            .to_i64()
            .ok_or_else(|| Error::domain("integer exponent out of range"))?;
        if base.is_zero() && n < 0 {
            return Err(Error::domain("zero raised to a negative power"));
        }
        return Ok(hp.powi(base, n));
    }
    if base.is_negative() {
        return Err(Error::domain("negative base with fractional exponent"));
    }
    if base.is_zero() {
        return Ok(base.clone());
    }
    // Half-integer exponents avoid the log/exp round trip.
    if e.denom() == &BigInt::from(2) {
        let n = e
            .numer()
            .to_i64()
            .ok_or_else(|| Error::domain("exponent out of range"))?;
        let s = hp.sqrt(base);
        return Ok(hp.powi(&s, n));
    }
    let ef = hp.from_ratio(e);
    Ok(hp.pow(base, &ef))
}

// Folding constructors used by the polynomial expansion and by the symbolic
// difference operator.

pub fn add(a: RealExpr, b: RealExpr) -> RealExpr {
    match (a, b) {
        (RealExpr::Num(x), RealExpr::Num(y)) => RealExpr::Num(x + y),
        (a, b) if a.is_zero() => b,
        (a, b) if b.is_zero() => a,
        (a, RealExpr::Num(y)) if y.is_negative() => RealExpr::Sub(Box::new(a), Box::new(RealExpr::Num(-y))),
        (a, RealExpr::Neg(b)) => RealExpr::Sub(Box::new(a), b),
        (a, b) => RealExpr::Add(Box::new(a), Box::new(b)),
    }
}

pub fn neg(a: RealExpr) -> RealExpr {
    match a {
        RealExpr::Num(x) => RealExpr::Num(-x),
        RealExpr::Neg(x) => *x,
        a => RealExpr::Neg(Box::new(a)),
    }
}

pub fn sub(a: RealExpr, b: RealExpr) -> RealExpr {
    add(a, neg(b))
}

pub fn mul(a: RealExpr, b: RealExpr) -> RealExpr {
    match (a, b) {
        (RealExpr::Num(x), RealExpr::Num(y)) => RealExpr::Num(x * y),
        (a, _) if a.is_zero() => RealExpr::int(0),
        (_, b) if b.is_zero() => RealExpr::int(0),
        (a, b) if a.is_one() => b,
        (a, b) if b.is_one() => a,
        (RealExpr::Num(x), b) if x == -BigRational::one() => neg(b),
        (a, RealExpr::Num(y)) => mul(RealExpr::Num(y), a),
        (a, b) => RealExpr::Mul(Box::new(a), Box::new(b)),
    }
}

pub fn div(a: RealExpr, b: RealExpr) -> RealExpr {
    match (a, b) {
        (RealExpr::Num(x), RealExpr::Num(y)) if !y.is_zero() => RealExpr::Num(x / y),
        (a, b) if b.is_one() => a,
        (a, RealExpr::Num(y)) if !y.is_zero() => mul(RealExpr::Num(y.recip()), a),
        (a, b) => RealExpr::Div(Box::new(a), Box::new(b)),
    }
}

fn poly_add(mut a: Vec<RealExpr>, b: Vec<RealExpr>) -> Vec<RealExpr> {
    if a.len() < b.len() {
        a.resize(b.len(), RealExpr::int(0));
    }
    for (i, c) in b.into_iter().enumerate() {
        let prev = std::mem::replace(&mut a[i], RealExpr::int(0));
        a[i] = add(prev, c);
    }
    a
}

fn poly_mul(a: &[RealExpr], b: &[RealExpr]) -> Vec<RealExpr> {
    let mut out = vec![RealExpr::int(0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            let prev = std::mem::replace(&mut out[i + j], RealExpr::int(0));
            out[i + j] = add(prev, mul(x.clone(), y.clone()));
        }
    }
    out
}

impl fmt::Display for RealExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |f: &mut fmt::Formatter<'_>, e: &RealExpr, min: u8| -> fmt::Result {
            if e.precedence() < min {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        };
        match self {
            RealExpr::Num(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            RealExpr::Const(NamedConst::Pi) => write!(f, "pi"),
            RealExpr::Const(NamedConst::E) => write!(f, "e"),
            RealExpr::Const(NamedConst::Phi) => write!(f, "phi"),
            RealExpr::Var => write!(f, "x"),
            RealExpr::Neg(a) => {
                write!(f, "-")?;
                wrap(f, a, 4)
            }
            RealExpr::Add(a, b) => {
                wrap(f, a, 1)?;
                write!(f, "+")?;
                wrap(f, b, 2)
            }
            RealExpr::Sub(a, b) => {
                wrap(f, a, 1)?;
                write!(f, "-")?;
                wrap(f, b, 2)
            }
            RealExpr::Mul(a, b) => {
                wrap(f, a, 2)?;
                write!(f, "*")?;
                wrap(f, b, 3)
            }
            RealExpr::Div(a, b) => {
                wrap(f, a, 2)?;
                write!(f, "/")?;
                wrap(f, b, 4)
            }
            RealExpr::Pow(a, b) => {
                wrap(f, a, 5)?;
                write!(f, "^")?;
                wrap(f, b, 5)
            }
            RealExpr::Func(func, a) => {
                let name = match func {
                    Func::Sqrt => "sqrt",
                    Func::Exp => "exp",
                    Func::Ln => "log",
                };
                write!(f, "{name}({a})")
            }
        }
    }
}

impl FromStr for RealExpr {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        RealExpr::parse(s)
    }
}

impl Serialize for RealExpr {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for RealExpr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            S(String),
            I(i64),
            F(f64),
        }
        match Raw::deserialize(d)? {
            Raw::S(s) => RealExpr::parse(&s).map_err(serde::de::Error::custom),
            Raw::I(i) => Ok(RealExpr::int(i)),
            Raw::F(x) => BigRational::from_float(x)
                .map(RealExpr::Num)
                .ok_or_else(|| serde::de::Error::custom("non-finite number")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigRational),
    Ident(String),
    Op(char),
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    src: String,
}

impl Parser {
    fn new(src: &str) -> Result<Self> {
        let mut toks = Vec::new();
        let chars: Vec<char> = src.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() || c == '.' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                let lit: String = chars[start..i].iter().collect();
                toks.push(Tok::Num(parse_decimal(&lit)?));
            } else if c.is_ascii_alphabetic() {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                toks.push(Tok::Ident(chars[start..i].iter().collect::<String>().to_lowercase()));
            } else if "+-*/^()".contains(c) {
                toks.push(Tok::Op(c));
                i += 1;
            } else {
                return Err(Error::Parse(format!("unexpected character `{c}` in `{src}`")));
            }
        }
        Ok(Parser {
            toks,
            pos: 0,
            src: src.to_string(),
        })
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} in `{}`", self.src))
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn parse_all(mut self) -> Result<RealExpr> {
        if self.toks.is_empty() {
            return Err(self.err("empty expression"));
        }
        let e = self.expr()?;
        if self.pos != self.toks.len() {
            return Err(self.err("trailing input"));
        }
        Ok(e)
    }

    fn expr(&mut self) -> Result<RealExpr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = RealExpr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = RealExpr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<RealExpr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = RealExpr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = RealExpr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else if matches!(self.peek(), Some(Tok::Num(_) | Tok::Ident(_)) | Some(Tok::Op('('))) {
                lhs = RealExpr::Mul(Box::new(lhs), Box::new(self.power()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<RealExpr> {
        if self.eat('-') {
            let inner = self.unary()?;
            return Ok(match inner {
                RealExpr::Num(r) => RealExpr::Num(-r),
                e => RealExpr::Neg(Box::new(e)),
            });
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<RealExpr> {
        let base = self.primary()?;
        if self.eat('^') {
            let exp = self.unary()?;
            return Ok(RealExpr::Pow(Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<RealExpr> {
        let tok = self.peek().cloned().ok_or_else(|| self.err("unexpected end"))?;
        self.pos += 1;
        match tok {
            Tok::Num(r) => Ok(RealExpr::Num(r)),
            Tok::Op('(') => {
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("missing `)`"));
                }
                Ok(e)
            }
            Tok::Op(c) => Err(self.err(&format!("unexpected `{c}`"))),
            Tok::Ident(name) => match name.as_str() {
                "pi" => Ok(RealExpr::Const(NamedConst::Pi)),
                "e" => Ok(RealExpr::Const(NamedConst::E)),
                "phi" => Ok(RealExpr::Const(NamedConst::Phi)),
                "x" | "n" | "p" | "z" | "t" => Ok(RealExpr::Var),
                "sqrt" | "exp" | "log" | "ln" => {
                    let f = match name.as_str() {
                        "sqrt" => Func::Sqrt,
                        "exp" => Func::Exp,
                        _ => Func::Ln,
                    };
                    if !self.eat('(') {
                        return Err(self.err(&format!("`{name}` needs `(`")));
                    }
                    let arg = self.expr()?;
                    if !self.eat(')') {
                        return Err(self.err("missing `)`"));
                    }
                    Ok(RealExpr::Func(f, Box::new(arg)))
                }
                other => Err(self.err(&format!("unknown identifier `{other}`"))),
            },
        }
    }
}

fn parse_decimal(lit: &str) -> Result<BigRational> {
    let (int_part, frac_part) = match lit.split_once('.') {
        Some((a, b)) => (a, b),
        None => (lit, ""),
    };
    if frac_part.contains('.') || (int_part.is_empty() && frac_part.is_empty()) {
        return Err(Error::Parse(format!("bad number `{lit}`")));
    }
    let digits = format!("{int_part}{frac_part}");
    let n: BigInt = digits
        .parse()
        .map_err(|_| Error::Parse(format!("bad number `{lit}`")))?;
    let d = BigInt::from(10).pow(frac_part.len() as u32);
    Ok(BigRational::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hp::{rational_to_f64, to_rational};

    fn eval_f64(s: &str, x: Option<f64>) -> f64 {
        let mut hp = Hp::new(128);
        let e = RealExpr::parse(s).unwrap();
        let xv = x.map(|v| astro_float::BigFloat::from_f64(v, 128));
        rational_to_f64(&to_rational(&e.eval(&mut hp, xv.as_ref()).unwrap()).unwrap())
    }

    #[test]
    fn decimals_are_exact() {
        let e = RealExpr::parse("1.2").unwrap();
        assert_eq!(e.as_rational().unwrap(), BigRational::new(6.into(), 5.into()));
    }

    #[test]
    fn constants_and_functions() {
        assert!((eval_f64("phi", None) - 1.618033988749895).abs() < 1e-15);
        assert!((eval_f64("sqrt(2)", None) - std::f64::consts::SQRT_2).abs() < 1e-15);
        assert!((eval_f64("exp(log(x)^1.2)", Some(1e6)) - (13.815510557964274f64.powf(1.2)).exp()).abs() < 1e-3);
        assert!((eval_f64("2^(3/2)", None) - 2.8284271247461903).abs() < 1e-15);
    }

    #[test]
    fn precedence_and_display_round_trip() {
        for s in ["z^2+1", "-x^2", "2n+1", "(1+sqrt(5))/2", "x^(3/2)*log(x)^2", "3/2*x-1/3", "-(x+1)^2"] {
            let e = RealExpr::parse(s).unwrap();
            let back = RealExpr::parse(&e.to_string()).unwrap();
            assert_eq!(e.to_string(), back.to_string(), "{s}");
        }
        assert!((eval_f64("-x^2", Some(3.0)) + 9.0).abs() < 1e-12);
    }

    #[test]
    fn polynomial_expansion() {
        let p = RealExpr::parse("(n+1)^2*sqrt(2)").unwrap().to_polynomial().unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p[1].to_string(), "2*sqrt(2)");
        assert!(RealExpr::parse("exp(n)").unwrap().to_polynomial().is_none());
        let q = RealExpr::parse("z^2+1").unwrap().to_polynomial().unwrap();
        let q: Vec<_> = q.iter().map(|c| c.as_rational().unwrap()).collect();
        assert_eq!(q, vec![1.into(), 0.into(), 1.into()].into_iter().map(BigRational::from_integer).collect::<Vec<_>>());
    }

    #[test]
    fn domain_errors() {
        let mut hp = Hp::new(128);
        assert!(RealExpr::parse("log(0-1)").unwrap().eval(&mut hp, None).is_err());
        assert!(RealExpr::parse("1/0").unwrap().eval(&mut hp, None).is_err());
        assert!(RealExpr::parse("sqrt(").is_err());
        assert!(RealExpr::parse("foo").is_err());
    }
}
