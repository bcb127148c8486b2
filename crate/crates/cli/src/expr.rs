//! Text syntax for elements of the degree-two Weyl algebra.
//!
//! ```text
//! expr := term (('+' | '-') term)*
//! term := [rational '*'] atom
//! atom := 'K' | 'b(' int ')' | ':b(' int ')b(' int '):' | 'T(' int ')' | 'S(' int ')' | 'L(' int ')' | '0'
//! ```
//!
//! `T(p)` is the oscillator lift of `L_p`, `L(p)` an alias for it, `S(p)` the
//! lift of `L_p` through `sigma`. The printer emits the canonical form: `K`, then
//! `b(m)` by ascending `m`, then `:b(a)b(b):` with `a <= b` in lexicographic
//! order, then `T(p)` by ascending `p`.

use std::collections::BTreeMap;
use std::fmt;

use mpalg::quad::QuadraticElement;
use mpalg::scalar::{self, Rational};
use mpalg::series::IndexSeries;
use mpalg::witt::{sigma_hat, DGenerator};
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Atom {
    K,
    B(i64),
    Pair(i64, i64),
    T(i64),
    S(i64),
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::K => write!(f, "K"),
            Atom::B(m) => write!(f, "b({m})"),
            Atom::Pair(a, b) => write!(f, ":b({a})b({b}):"),
            Atom::T(p) => write!(f, "T({p})"),
            Atom::S(p) => write!(f, "S({p})"),
        }
    }
}

/// A parsed expression: a signed sum of scaled atoms, in input order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expression {
    pub terms: Vec<(Rational, Atom)>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{message} at position {position}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            position: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected '{}'", c as char))
        }
    }

    fn digits(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| std::str::from_utf8(&self.src[start..self.pos]).expect("ascii"))
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        let neg = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let start = self.pos;
        let Some(d) = self.digits() else {
            return self.err("expected an integer");
        };
        let v: i64 = match d.parse() {
            Ok(v) => v,
            Err(_) => {
                self.pos = start;
                return self.err("integer out of range");
            }
        };
        Ok(if neg { -v } else { v })
    }

    fn mode_index(&mut self) -> Result<i64, ParseError> {
        let start = self.pos;
        let m = self.integer()?;
        if m == 0 {
            self.pos = start;
            return self.err("b(0) is the central element; write K instead");
        }
        Ok(m)
    }

    fn call(&mut self, word: &str) -> Result<i64, ParseError> {
        for c in word.bytes() {
            self.expect(c)?;
        }
        self.expect(b'(')?;
        let v = if word == "b" {
            self.mode_index()?
        } else {
            self.integer()?
        };
        self.expect(b')')?;
        Ok(v)
    }

    fn atom(&mut self) -> Result<Option<Atom>, ParseError> {
        match self.peek() {
            Some(b'K') => {
                self.pos += 1;
                Ok(Some(Atom::K))
            }
            Some(b'b') => Ok(Some(Atom::B(self.call("b")?))),
            Some(b'T') => Ok(Some(Atom::T(self.call("T")?))),
            Some(b'L') => Ok(Some(Atom::T(self.call("L")?))),
            Some(b'S') => Ok(Some(Atom::S(self.call("S")?))),
            Some(b':') => {
                self.pos += 1;
                let a = self.call("b")?;
                let b = self.call("b")?;
                self.expect(b':')?;
                Ok(Some(Atom::Pair(a, b)))
            }
            Some(b'0') => {
                self.pos += 1;
                Ok(None)
            }
            Some(_) => {
                self.err("expected K, b(..), :b(..)b(..):, T(..), S(..), L(..) or a coefficient")
            }
            None => self.err("unexpected end of input"),
        }
    }

    fn rational(&mut self) -> Result<Option<Rational>, ParseError> {
        let start = self.pos;
        let Some(num) = self.digits() else {
            return Ok(None);
        };
        let mut text = num.to_string();
        if self.peek() == Some(b'/') {
            self.pos += 1;
            let Some(den) = self.digits() else {
                return self.err("expected a denominator");
            };
            if den.bytes().all(|c| c == b'0') {
                return self.err("zero denominator");
            }
            text = format!("{text}/{den}");
        }
        match self.peek() {
            Some(b'*') => {
                self.pos += 1;
                Ok(Some(scalar::parse(&text).expect("digits")))
            }
            _ if text == "0" => {
                // the literal 0
                self.pos = start;
                Ok(None)
            }
            _ => self.err("expected '*' after coefficient"),
        }
    }

    fn term(&mut self, sign: Rational) -> Result<Option<(Rational, Atom)>, ParseError> {
        let coeff = self.rational()?.unwrap_or_else(Rational::one);
        Ok(self.atom()?.map(|a| (sign * coeff, a)))
    }

    fn expression(&mut self) -> Result<Expression, ParseError> {
        let mut terms = Vec::new();
        let mut sign = Rational::one();
        if self.peek() == Some(b'-') {
            self.pos += 1;
            sign = -sign;
        }
        terms.extend(self.term(sign)?);
        loop {
            match self.peek() {
                None => break,
                Some(b'+') => {
                    self.pos += 1;
                    terms.extend(self.term(Rational::one())?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    terms.extend(self.term(-Rational::one())?);
                }
                Some(_) => return self.err("expected '+' or '-'"),
            }
        }
        Ok(Expression { terms })
    }
}

pub fn parse_expression(s: &str) -> Result<Expression, ParseError> {
    Parser {
        src: s.as_bytes(),
        pos: 0,
    }
    .expression()
}

impl Atom {
    pub fn element(&self) -> QuadraticElement {
        match *self {
            Atom::K => QuadraticElement::one(),
            Atom::B(m) => QuadraticElement::mode(m).expect("parser rejects b(0)"),
            Atom::Pair(a, b) => {
                QuadraticElement::normal_ordered(a, b).expect("parser rejects b(0)")
            }
            Atom::T(p) => QuadraticElement::tau_hat(p),
            Atom::S(p) => sigma_hat(DGenerator::L(p)).expect("L generator"),
        }
    }
}

impl Expression {
    pub fn evaluate(&self) -> QuadraticElement {
        self.terms
            .iter()
            .fold(QuadraticElement::zero(), |acc, (c, a)| {
                &acc + &a.element().scale(c)
            })
    }
}

pub fn parse_element(s: &str) -> Result<QuadraticElement, ParseError> {
    Ok(parse_expression(s)?.evaluate())
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("diagonal {0} has non-constant coefficients and no text form")]
pub struct NotPrintable(pub i64);

/// The canonical term list of an element.
pub fn canonical_terms(x: &QuadraticElement) -> Result<Vec<(Rational, Atom)>, NotPrintable> {
    let mut out = Vec::new();
    if !x.central_part().is_zero() {
        out.push((x.central_part().clone(), Atom::K));
    }
    for (m, c) in x.linear_part().terms() {
        out.push((c.clone(), Atom::B(m)));
    }
    let mut pairs: BTreeMap<(i64, i64), Rational> = BTreeMap::new();
    let mut taus = Vec::new();
    for (d, c) in x.diagonals() {
        let poly = c.poly();
        let kappa = match poly.degree() {
            None => Rational::zero(),
            Some(0) => poly.coeffs()[0].clone(),
            Some(_) => return Err(NotPrintable(d)),
        };
        let rest: IndexSeries = if kappa.is_zero() {
            c.clone()
        } else {
            taus.push((kappa.clone(), Atom::T(d)));
            c - &QuadraticElement::tau(d)
                .diagonal(d)
                .expect("tau diagonal")
                .scale(&kappa)
        };
        for (a, _) in rest.finite_support().expect("constant part removed") {
            let b = d - a;
            if a <= b {
                let v = if a == b {
                    rest.value(a) * scalar::rat(1, 2)
                } else {
                    rest.value(a)
                };
                if !v.is_zero() {
                    pairs.insert((a, b), v);
                }
            }
        }
    }
    out.extend(pairs.into_iter().map(|((a, b), v)| (v, Atom::Pair(a, b))));
    out.extend(taus);
    Ok(out)
}

pub fn format_terms(terms: &[(Rational, Atom)]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (i, (c, a)) in terms.iter().enumerate() {
        let mag = c.abs();
        match (i, c.is_negative()) {
            (0, true) => s.push('-'),
            (0, false) => {}
            (_, true) => s.push_str(" - "),
            (_, false) => s.push_str(" + "),
        }
        if !mag.is_one() {
            s.push_str(&scalar::format(&mag));
            s.push('*');
        }
        s.push_str(&a.to_string());
    }
    s
}

pub fn print_element(x: &QuadraticElement) -> Result<String, NotPrintable> {
    Ok(format_terms(&canonical_terms(x)?))
}
