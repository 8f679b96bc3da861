//! Exact coefficients: arbitrary-precision rationals and sparse multivariate
//! polynomials over the rationals.
//!
//! A [`Scalar`] is either a rational in lowest terms or a polynomial whose
//! terms map exponent vectors to nonzero rational coefficients. A polynomial
//! that collapses to a constant canonicalizes back to the rational variant,
//! so equality of scalars is structural equality.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

/// Exponent vector over named variables. Zero exponents are never stored.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(BTreeMap<String, u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(BTreeMap::new())
    }

    pub fn var(name: &str) -> Self {
        let mut m = BTreeMap::new();
        m.insert(name.to_string(), 1);
        Monomial(m)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut m = self.0.clone();
        for (v, e) in &other.0 {
            *m.entry(v.clone()).or_insert(0) += e;
        }
        Monomial(m)
    }

    pub fn exponents(&self) -> impl Iterator<Item = (&str, u32)> {
        self.0.iter().map(|(v, e)| (v.as_str(), *e))
    }

    fn with_exponent(name: &str, e: u32) -> Self {
        let mut m = BTreeMap::new();
        if e > 0 {
            m.insert(name.to_string(), e);
        }
        Monomial(m)
    }
}

/// Sparse polynomial with rational coefficients. Invariant: no zero
/// coefficients, and at least one non-constant term (otherwise the value
/// lives in `Scalar::Rat`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(Rational),
    Poly(Poly),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rat(Rational::zero())
    }

    pub fn one() -> Self {
        Scalar::Rat(Rational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::Rat(Rational::from_integer(BigInt::from(n)))
    }

    pub fn from_frac(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Scalar::Rat(Rational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_rat(r: Rational) -> Self {
        Scalar::Rat(r)
    }

    pub fn var(name: &str) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(name), Rational::one());
        Scalar::Poly(Poly { terms })
    }

    /// Canonicalize a term map into a `Scalar`, dropping zero coefficients
    /// and demoting constants to the rational variant.
    fn from_terms(mut terms: BTreeMap<Monomial, Rational>) -> Scalar {
        terms.retain(|_, c| !c.is_zero());
        if terms.is_empty() {
            return Scalar::zero();
        }
        if terms.len() == 1 {
            if let Some(c) = terms.get(&Monomial::one()) {
                return Scalar::Rat(c.clone());
            }
        }
        Scalar::Poly(Poly { terms })
    }

    fn terms(&self) -> BTreeMap<Monomial, Rational> {
        match self {
            Scalar::Rat(r) => {
                let mut m = BTreeMap::new();
                if !r.is_zero() {
                    m.insert(Monomial::one(), r.clone());
                }
                m
            }
            Scalar::Poly(p) => p.terms.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Scalar::Rat(r) if r.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Scalar::Rat(r) if r.is_one())
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Scalar::Rat(_))
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scalar::Rat(r) => Some(r),
            Scalar::Poly(_) => None,
        }
    }

    /// Variables occurring with nonzero exponent.
    pub fn vars(&self) -> BTreeSet<String> {
        match self {
            Scalar::Rat(_) => BTreeSet::new(),
            Scalar::Poly(p) => p
                .terms
                .keys()
                .flat_map(|m| m.exponents().map(|(v, _)| v.to_string()))
                .collect(),
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        if let (Scalar::Rat(a), Scalar::Rat(b)) = (self, other) {
            return Scalar::Rat(a + b);
        }
        let mut terms = self.terms();
        for (m, c) in other.terms() {
            let entry = terms.entry(m).or_insert_with(Rational::zero);
            *entry += c;
        }
        Scalar::from_terms(terms)
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rat(r) => Scalar::Rat(-r),
            Scalar::Poly(p) => Scalar::Poly(Poly {
                terms: p.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
            }),
        }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        if self.is_zero() || other.is_zero() {
            return Scalar::zero();
        }
        if let (Scalar::Rat(a), Scalar::Rat(b)) = (self, other) {
            return Scalar::Rat(a * b);
        }
        let mut terms: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (ma, ca) in self.terms() {
            for (mb, cb) in other.terms() {
                let m = ma.mul(&mb);
                let entry = terms.entry(m).or_insert_with(Rational::zero);
                *entry += &ca * &cb;
            }
        }
        Scalar::from_terms(terms)
    }

    pub fn scale(&self, r: &Rational) -> Scalar {
        self.mul(&Scalar::Rat(r.clone()))
    }

    /// Substitute rational values for variables. Unbound variables survive,
    /// so partial substitution yields a polynomial in the remainder.
    pub fn eval(&self, bindings: &BTreeMap<String, Rational>) -> Scalar {
        match self {
            Scalar::Rat(_) => self.clone(),
            Scalar::Poly(p) => {
                let mut acc = Scalar::zero();
                for (m, c) in &p.terms {
                    let mut term = Scalar::Rat(c.clone());
                    for (v, e) in m.exponents() {
                        let factor = match bindings.get(v) {
                            Some(r) => {
                                let mut pw = Rational::one();
                                for _ in 0..e {
                                    pw *= r;
                                }
                                Scalar::Rat(pw)
                            }
                            None => Scalar::Poly(Poly {
                                terms: [(Monomial::with_exponent(v, e), Rational::one())]
                                    .into_iter()
                                    .collect(),
                            }),
                        };
                        term = term.mul(&factor);
                    }
                    acc = acc.add(&term);
                }
                acc
            }
        }
    }

    /// Substitute arbitrary scalars (possibly polynomials) for variables.
    pub fn substitute(&self, subs: &BTreeMap<String, Scalar>) -> Scalar {
        match self {
            Scalar::Rat(_) => self.clone(),
            Scalar::Poly(p) => {
                let mut acc = Scalar::zero();
                for (m, c) in &p.terms {
                    let mut term = Scalar::Rat(c.clone());
                    for (v, e) in m.exponents() {
                        let base = subs.get(v).cloned().unwrap_or_else(|| Scalar::var(v));
                        for _ in 0..e {
                            term = term.mul(&base);
                        }
                    }
                    acc = acc.add(&term);
                }
                acc
            }
        }
    }

    /// Decompose as `r*v + rest` with `r` a nonzero rational and `v` absent
    /// from `rest`. Returns `(coefficient, rest)` when the variable is
    /// isolated that way, `None` otherwise.
    pub fn isolate_linear_in(&self, v: &str) -> Option<(Rational, Scalar)> {
        let p = match self {
            Scalar::Poly(p) => p,
            Scalar::Rat(_) => return None,
        };
        let mut coeff: Option<Rational> = None;
        let mut rest: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (m, c) in &p.terms {
            let deg = m.exponents().find(|(n, _)| n == &v).map_or(0, |(_, e)| e);
            match deg {
                0 => {
                    rest.insert(m.clone(), c.clone());
                }
                1 if m.exponents().count() == 1 => {
                    coeff = Some(c.clone());
                }
                _ => return None,
            }
        }
        coeff.map(|c| (c, Scalar::from_terms(rest)))
    }

    /// Variables in which this scalar is isolatable per `isolate_linear_in`.
    pub fn linear_vars(&self) -> Vec<String> {
        self.vars()
            .into_iter()
            .filter(|v| self.isolate_linear_in(v).is_some())
            .collect()
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => write!(f, "{}", format_rational(r)),
            Scalar::Poly(p) => {
                let mut first = true;
                for (m, c) in &p.terms {
                    let neg = c.is_negative();
                    if first {
                        if neg {
                            write!(f, "-")?;
                        }
                        first = false;
                    } else if neg {
                        write!(f, " - ")?;
                    } else {
                        write!(f, " + ")?;
                    }
                    let abs = c.abs();
                    if m.is_one() {
                        write!(f, "{}", format_rational(&abs))?;
                    } else {
                        if !abs.is_one() {
                            write!(f, "{}*", format_rational(&abs))?;
                        }
                        let mut vf = true;
                        for (v, e) in m.exponents() {
                            if !vf {
                                write!(f, "*")?;
                            }
                            vf = false;
                            if e == 1 {
                                write!(f, "{}", v)?;
                            } else {
                                write!(f, "{}^{}", v, e)?;
                            }
                        }
                    }
                }
                Ok(())
            }
        }
    }
}

fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse the scalar text grammar: rationals as `p/q` or `p`, polynomials as
/// sums of `coeff*var1^e1*var2^e2` terms. Whitespace is insignificant.
pub fn parse_scalar(input: &str) -> Result<Scalar, crate::error::Error> {
    Parser::new(input).parse()
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(input: &'a str) -> Self {
        Parser {
            bytes: input.as_bytes(),
            pos: 0,
        }
    }

    fn err(&self, msg: &str) -> crate::error::Error {
        crate::error::Error::Parse {
            line: 1,
            col: self.pos + 1,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn parse(mut self) -> Result<Scalar, crate::error::Error> {
        let mut acc = Scalar::zero();
        let mut sign = Rational::one();
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                sign = -sign;
            }
            Some(b'+') => {
                self.pos += 1;
            }
            Some(_) => {}
            None => return Err(self.err("empty scalar")),
        }
        loop {
            let term = self.parse_term()?;
            acc = acc.add(&term.scale(&sign));
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    sign = Rational::one();
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = -Rational::one();
                }
                Some(_) => return Err(self.err("expected '+' or '-'")),
                None => return Ok(acc),
            }
        }
    }

    fn parse_term(&mut self) -> Result<Scalar, crate::error::Error> {
        let mut acc = self.parse_factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let f = self.parse_factor()?;
            acc = acc.mul(&f);
        }
        Ok(acc)
    }

    fn parse_factor(&mut self) -> Result<Scalar, crate::error::Error> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let num = self.parse_int()?;
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let den = self.parse_int()?;
                    if den.is_zero() {
                        return Err(self.err("zero denominator"));
                    }
                    Ok(Scalar::Rat(Rational::new(num, den)))
                } else {
                    Ok(Scalar::Rat(Rational::from_integer(num)))
                }
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let name = self.parse_ident();
                if self.peek() == Some(b'^') {
                    self.pos += 1;
                    let e = self.parse_int()?;
                    let e: u32 = e
                        .try_into()
                        .map_err(|_| self.err("exponent out of range"))?;
                    let mut acc = Scalar::one();
                    let v = Scalar::var(&name);
                    for _ in 0..e {
                        acc = acc.mul(&v);
                    }
                    Ok(acc)
                } else {
                    Ok(Scalar::var(&name))
                }
            }
            _ => Err(self.err("expected number or variable")),
        }
    }

    fn parse_int(&mut self) -> Result<BigInt, crate::error::Error> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let s = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        s.parse().map_err(|_| self.err("bad integer"))
    }

    fn parse_ident(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len()
            && (self.bytes[self.pos].is_ascii_alphanumeric() || self.bytes[self.pos] == b'_')
        {
            self.pos += 1;
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Scalar {
        Scalar::from_frac(n, d)
    }

    #[test]
    fn rational_add_canonical() {
        let s = rat(1, 2).add(&rat(1, 3));
        assert_eq!(s, rat(5, 6));
    }

    #[test]
    fn poly_times_zero() {
        let a1 = Scalar::var("a1");
        assert!(a1.mul(&Scalar::zero()).is_zero());
    }

    #[test]
    fn difference_of_squares() {
        let x = Scalar::var("x");
        let lhs = x.add(&Scalar::one()).mul(&x.sub(&Scalar::one()));
        let rhs = x.mul(&x).sub(&Scalar::one());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn constant_poly_demotes_to_rational() {
        let x = Scalar::var("x");
        let s = x.sub(&x).add(&rat(2, 1));
        assert!(s.is_rational());
        assert_eq!(s, rat(2, 1));
    }

    #[test]
    fn eval_examples() {
        let mut b = BTreeMap::new();
        b.insert("a1".to_string(), Rational::new(1.into(), 3.into()));
        let e = Scalar::from_int(3).mul(&Scalar::var("a1"));
        assert_eq!(e.eval(&b), Scalar::one());

        let mut b = BTreeMap::new();
        b.insert("lam".to_string(), Rational::from_integer((-1).into()));
        let e = Scalar::var("lam").add(&Scalar::one());
        assert!(e.eval(&b).is_zero());

        let mut b = BTreeMap::new();
        b.insert("a1".to_string(), Rational::from_integer(2.into()));
        b.insert("b2".to_string(), Rational::from_integer(6.into()));
        let e = Scalar::var("b2").sub(&Scalar::from_int(3).mul(&Scalar::var("a1")));
        assert!(e.eval(&b).is_zero());
    }

    #[test]
    fn eval_is_homomorphism() {
        let p = Scalar::var("x").add(&rat(1, 2));
        let q = Scalar::var("x").mul(&Scalar::var("y")).sub(&Scalar::from_int(3));
        let mut b = BTreeMap::new();
        b.insert("x".to_string(), Rational::new(7.into(), 3.into()));
        b.insert("y".to_string(), Rational::from_integer((-2).into()));
        assert_eq!(p.mul(&q).eval(&b), p.eval(&b).mul(&q.eval(&b)));
    }

    #[test]
    fn isolate_linear_finds_pivot_variable() {
        let e = Scalar::var("c1_1_1").add(&Scalar::var("a1"));
        assert_eq!(e.linear_vars(), vec!["a1".to_string(), "c1_1_1".to_string()]);
        let (c, rest) = e.isolate_linear_in("c1_1_1").unwrap();
        assert_eq!(c, Rational::one());
        assert_eq!(rest, Scalar::var("a1"));

        // 2*a1*c is not linear in either variable
        let e = Scalar::from_int(2)
            .mul(&Scalar::var("a1"))
            .mul(&Scalar::var("c"));
        assert!(e.linear_vars().is_empty());
    }

    #[test]
    fn parse_round_trip() {
        for s in ["5/6", "-3", "3*a1 - 1/2*b2^2", "x^2 - 1", "a1*b2*c3"] {
            let v = parse_scalar(s).unwrap();
            let printed = v.to_string();
            assert_eq!(parse_scalar(&printed).unwrap(), v, "{s} -> {printed}");
        }
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse_scalar("").is_err());
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("3 +").is_err());
        assert!(parse_scalar("@x").is_err());
    }
}
