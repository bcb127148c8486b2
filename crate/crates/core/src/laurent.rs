//! Finite Laurent polynomials in `t`, residues and the symplectic form.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::scalar::{self, int, Rational};

/// A finite-support Laurent polynomial `sum c_n t^n`. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, Rational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `t^n`
    pub fn t(n: i64) -> Self {
        Self::monomial(n, Rational::one())
    }

    /// `c * t^n`
    pub fn monomial(n: i64, c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(n, c);
        p
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(0, c)
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, Rational)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (n, c) in terms {
            p.add_term(n, c);
        }
        p
    }

    pub fn add_term(&mut self, n: i64, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(n).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&n);
        }
    }

    pub fn coeff(&self, n: i64) -> Rational {
        self.coeffs.get(&n).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn has_constant_term(&self) -> bool {
        self.coeffs.contains_key(&0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> + '_ {
        self.coeffs.iter().map(|(n, c)| (*n, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|(n, a)| (*n, a * c)).collect(),
        }
    }

    /// The same polynomial with its constant term removed (projection onto H').
    pub fn without_constant(&self) -> Self {
        let mut p = self.clone();
        p.coeffs.remove(&0);
        p
    }
}

/// Coefficient of `t^-1`.
pub fn residue(f: &LaurentPoly) -> Rational {
    f.coeff(-1)
}

/// Term-by-term `d/dt`.
pub fn derivative(f: &LaurentPoly) -> LaurentPoly {
    LaurentPoly::from_terms(f.terms().map(|(n, c)| (n - 1, c * int(n))))
}

/// `<f, g> = -Res f dg`. On monomials, `<t^a, t^b> = a` when `a + b = 0` and zero otherwise.
pub fn symplectic_form(f: &LaurentPoly, g: &LaurentPoly) -> Rational {
    // Only the t^-1 coefficient of f*g' matters; avoid forming the full product.
    let mut acc = Rational::zero();
    for (a, fa) in f.terms() {
        let b = -a;
        if b == 0 {
            continue;
        }
        let gb = g.coeff(b);
        if !gb.is_zero() {
            acc += fa * &gb * int(a);
        }
    }
    acc
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (n, c) in rhs.terms() {
            out.add_term(n, c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (n, c) in rhs.terms() {
            out.add_term(n, -c.clone());
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (a, ca) in self.terms() {
            for (b, cb) in rhs.terms() {
                out.add_term(a + b, ca * cb);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(&-Rational::one())
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: LaurentPoly) -> LaurentPoly {
        &self + &rhs
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        &self - &rhs
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

/// Text form `3*t^-1 + 1/2*t^2`; the zero polynomial prints as `0`.
impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (n, c)) in self.terms().enumerate() {
            let mag = c.abs();
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let unit = mag.is_one();
            match n {
                0 => write!(f, "{}", scalar::format(&mag))?,
                1 if unit => write!(f, "t")?,
                1 => write!(f, "{}*t", scalar::format(&mag))?,
                _ if unit => write!(f, "t^{n}")?,
                _ => write!(f, "{}*t^{n}", scalar::format(&mag))?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse Laurent polynomial term `{term}`")]
pub struct ParseLaurentError {
    pub term: String,
}

impl FromStr for LaurentPoly {
    type Err = ParseLaurentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(ParseLaurentError {
                term: s.to_string(),
            });
        }
        // Split on + and - that start a new term (not the sign of an exponent).
        let bytes = compact.as_bytes();
        let mut terms = Vec::new();
        let mut start = 0;
        for i in 1..bytes.len() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^' {
                terms.push(&compact[start..i]);
                start = i;
            }
        }
        terms.push(&compact[start..]);

        let mut out = LaurentPoly::zero();
        for raw in terms {
            let err = || ParseLaurentError {
                term: raw.to_string(),
            };
            let (sign, body) = match raw.as_bytes().first() {
                Some(b'-') => (-Rational::one(), &raw[1..]),
                Some(b'+') => (Rational::one(), &raw[1..]),
                _ => (Rational::one(), raw),
            };
            let (coeff, mono) = match body.split_once('*') {
                Some((c, m)) => (scalar::parse(c).ok_or_else(err)?, Some(m)),
                None if body.starts_with('t') => (Rational::one(), Some(body)),
                None => (scalar::parse(body).ok_or_else(err)?, None),
            };
            let exp = match mono {
                None => 0,
                Some("t") => 1,
                Some(m) => m
                    .strip_prefix("t^")
                    .and_then(|e| e.parse::<i64>().ok())
                    .ok_or_else(err)?,
            };
            out.add_term(exp, sign * coeff);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};
    use proptest::prelude::*;

    #[test]
    fn residue_examples() {
        assert_eq!(residue(&LaurentPoly::t(-1)), int(1));
        let f = &LaurentPoly::monomial(-1, int(3)) + &LaurentPoly::monomial(1, int(2));
        assert_eq!(residue(&f), int(3));
        assert_eq!(residue(&LaurentPoly::t(2)), int(0));
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(
            derivative(&LaurentPoly::t(3)),
            LaurentPoly::monomial(2, int(3))
        );
        assert_eq!(
            derivative(&LaurentPoly::t(-1)),
            LaurentPoly::monomial(-2, int(-1))
        );
        assert!(derivative(&LaurentPoly::constant(int(5))).is_zero());
    }

    #[test]
    fn symplectic_examples() {
        assert_eq!(
            symplectic_form(&LaurentPoly::t(1), &LaurentPoly::t(-1)),
            int(1)
        );
        assert_eq!(
            symplectic_form(&LaurentPoly::t(2), &LaurentPoly::t(3)),
            int(0)
        );
        assert_eq!(
            symplectic_form(&LaurentPoly::t(2), &LaurentPoly::t(-2)),
            int(2)
        );
    }

    #[test]
    fn symplectic_matches_residue_definition() {
        for a in -16..=16 {
            for b in -16..=16 {
                let (f, g) = (LaurentPoly::t(a), LaurentPoly::t(b));
                let by_residue = -residue(&(&f * &derivative(&g)));
                let expected = if a + b == 0 { int(a) } else { int(0) };
                assert_eq!(by_residue, expected);
                assert_eq!(symplectic_form(&f, &g), expected);
            }
        }
    }

    #[test]
    fn gram_matrix_is_invertible_on_windows() {
        for w in 1..=8i64 {
            let idx: Vec<i64> = (-w..=w).filter(|&i| i != 0).collect();
            let rows: Vec<Vec<Rational>> = idx
                .iter()
                .map(|&a| {
                    idx.iter()
                        .map(|&b| symplectic_form(&LaurentPoly::t(a), &LaurentPoly::t(b)))
                        .collect()
                })
                .collect();
            assert_eq!(crate::linalg::rank(&rows), idx.len(), "window {w}");
        }
    }

    #[test]
    fn text_round_trip() {
        let p: LaurentPoly = "3*t^-1 + 1/2*t^2".parse().unwrap();
        assert_eq!(p.coeff(-1), int(3));
        assert_eq!(p.coeff(2), rat(1, 2));
        assert_eq!(p.to_string(), "3*t^-1 + 1/2*t^2");
        let q: LaurentPoly = "-t - 2 + t^3".parse().unwrap();
        assert_eq!(q.to_string(), "-2 - t + t^3");
        assert!("3*x^2".parse::<LaurentPoly>().is_err());
    }

    fn arb_poly() -> impl Strategy<Value = LaurentPoly> {
        prop::collection::vec((-8i64..=8, -5i64..=5, 1i64..=3), 0..6)
            .prop_map(|ts| LaurentPoly::from_terms(ts.into_iter().map(|(n, p, q)| (n, rat(p, q)))))
    }

    proptest! {
        #[test]
        fn antisymmetric(f in arb_poly(), g in arb_poly()) {
            prop_assert_eq!(symplectic_form(&f, &g), -symplectic_form(&g, &f));
        }

        #[test]
        fn blind_to_constants(f in arb_poly(), g in arb_poly(), c in -4i64..=4, d in -4i64..=4) {
            let fc = &f + &LaurentPoly::constant(int(c));
            let gd = &g + &LaurentPoly::constant(int(d));
            prop_assert_eq!(symplectic_form(&fc, &gd), symplectic_form(&f, &g));
        }

        #[test]
        fn display_parses_back(f in arb_poly()) {
            let text = f.to_string();
            let back: LaurentPoly = text.parse().unwrap();
            prop_assert_eq!(back, f);
        }
    }
}
