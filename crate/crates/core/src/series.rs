//! Integer-indexed coefficient families of the form "polynomial, except at finitely
//! many indices". Every infinite diagonal sum in the crate (the oscillator
//! Virasoro elements, derivations, their brackets) is one of these, which keeps
//! brackets exact and closed-form.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::scalar::{int, Rational};

/// Dense univariate polynomial with rational coefficients, lowest degree first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self::new(vec![Rational::zero(), Rational::one()])
    }

    /// `c0 + c1 x + ...`
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn eval(&self, x: i64) -> Rational {
        let x = int(x);
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * &x + c)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// `p(x + s)`
    pub fn shift(&self, s: i64) -> Self {
        let lin = Poly::new(vec![int(s), Rational::one()]);
        self.compose_linear(&lin)
    }

    /// `p(s - x)`
    pub fn reflect(&self, s: i64) -> Self {
        let lin = Poly::new(vec![int(s), -Rational::one()]);
        self.compose_linear(&lin)
    }

    fn compose_linear(&self, lin: &Poly) -> Self {
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * lin) + &Poly::constant(c.clone());
        }
        acc
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let get = |v: &Vec<Rational>, i: usize| v.get(i).cloned().unwrap_or_else(Rational::zero);
        Poly::new(
            (0..n)
                .map(|i| get(&self.coeffs, i) + get(&rhs.coeffs, i))
                .collect(),
        )
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

/// A map `Z -> Q` equal to a polynomial away from a finite exception set.
///
/// Canonical form: exceptions are stored only where they differ from the polynomial,
/// so structural equality is equality of functions.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexSeries {
    poly: Poly,
    exceptions: BTreeMap<i64, Rational>,
}

impl IndexSeries {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_poly(poly: Poly) -> Self {
        Self {
            poly,
            exceptions: BTreeMap::new(),
        }
    }

    /// Finitely supported family.
    pub fn finite<I: IntoIterator<Item = (i64, Rational)>>(values: I) -> Self {
        let mut s = Self::zero();
        for (k, v) in values {
            let cur = s.value(k);
            s.set(k, cur + v);
        }
        s
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn exceptions(&self) -> &BTreeMap<i64, Rational> {
        &self.exceptions
    }

    pub fn value(&self, k: i64) -> Rational {
        match self.exceptions.get(&k) {
            Some(v) => v.clone(),
            None => self.poly.eval(k),
        }
    }

    /// Overrides the value at `k`, keeping the canonical form.
    pub fn set(&mut self, k: i64, v: Rational) {
        if self.poly.eval(k) == v {
            self.exceptions.remove(&k);
        } else {
            self.exceptions.insert(k, v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero() && self.exceptions.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.poly.is_zero()
    }

    /// Nonzero values, for finitely supported families.
    pub fn finite_support(&self) -> Option<Vec<(i64, Rational)>> {
        self.is_finite().then(|| {
            self.exceptions
                .iter()
                .map(|(k, v)| (*k, v.clone()))
                .collect()
        })
    }

    pub fn exception_keys(&self) -> impl Iterator<Item = i64> + '_ {
        self.exceptions.keys().copied()
    }

    /// Builds a family from its generic polynomial and an exact evaluator. The
    /// evaluator must agree with `poly` away from `special`.
    pub fn assemble<F>(poly: Poly, special: BTreeSet<i64>, exact: F) -> Self
    where
        F: Fn(i64) -> Rational,
    {
        let mut out = Self::from_poly(poly);
        for k in special {
            out.set(k, exact(k));
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            poly: self.poly.scale(c),
            exceptions: self.exceptions.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    /// `k -> self(k + s)`
    pub fn shift(&self, s: i64) -> Self {
        Self {
            poly: self.poly.shift(s),
            exceptions: self
                .exceptions
                .iter()
                .map(|(k, v)| (k - s, v.clone()))
                .collect(),
        }
    }

    /// `k -> self(s - k)`
    pub fn reflect(&self, s: i64) -> Self {
        Self {
            poly: self.poly.reflect(s),
            exceptions: self
                .exceptions
                .iter()
                .map(|(k, v)| (s - k, v.clone()))
                .collect(),
        }
    }

    /// Pointwise product.
    pub fn pointwise(&self, other: &Self) -> Self {
        let special: BTreeSet<i64> = self
            .exception_keys()
            .chain(other.exception_keys())
            .collect();
        Self::assemble(&self.poly * &other.poly, special, |k| {
            self.value(k) * other.value(k)
        })
    }

    /// Pointwise product with a polynomial weight.
    pub fn weighted(&self, weight: &Poly) -> Self {
        let special: BTreeSet<i64> = self.exception_keys().collect();
        Self::assemble(&self.poly * weight, special, |k| {
            self.value(k) * weight.eval(k)
        })
    }
}

impl Add for &IndexSeries {
    type Output = IndexSeries;
    fn add(self, rhs: &IndexSeries) -> IndexSeries {
        let special: BTreeSet<i64> = self.exception_keys().chain(rhs.exception_keys()).collect();
        IndexSeries::assemble(&self.poly + &rhs.poly, special, |k| {
            self.value(k) + rhs.value(k)
        })
    }
}

impl Sub for &IndexSeries {
    type Output = IndexSeries;
    fn sub(self, rhs: &IndexSeries) -> IndexSeries {
        self + &(-rhs)
    }
}

impl Neg for &IndexSeries {
    type Output = IndexSeries;
    fn neg(self) -> IndexSeries {
        self.scale(&-Rational::one())
    }
}
