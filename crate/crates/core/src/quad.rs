//! Elements of the completed degree-two Weyl algebra: a central part, a finite
//! linear part in H', and a quadratic part made of banded diagonal families.
//!
//! The quadratic part is `1/2 sum_{a,b} c(a,b) :b_a b_b:` with `c` symmetric. It is
//! stored per anti-diagonal `a + b = d` as the function `a -> c(a, d - a)`, which
//! vanishes at `a = 0` and `a = d` (no `b_0` factor survives). Normal ordering
//! puts the positive (annihilation) index on the right.
//!
//! Brackets follow the central extension of `sp(H') ⋉ H'`: the symplectic
//! commutator lifted by normal ordering, plus `-1/2 psi` between quadratic parts
//! and `<f, g>` between linear parts.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::laurent::{symplectic_form, LaurentPoly};
use crate::operator::{self, HOperator};
use crate::scalar::{int, rat, Rational};
use crate::series::{IndexSeries, Poly};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QuadraticElement {
    central: Rational,
    linear: LaurentPoly,
    quadratic: BTreeMap<i64, IndexSeries>,
}

/// Symmetrizes `c` on the anti-diagonal `d` and forces the `b_0` slots to zero.
fn canonical_diagonal(d: i64, c: &IndexSeries) -> IndexSeries {
    let mut sym = (c + &c.reflect(d)).scale(&rat(1, 2));
    sym.set(0, Rational::zero());
    sym.set(d, Rational::zero());
    sym
}

impl QuadraticElement {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The central element `1 = b_0`.
    pub fn one() -> Self {
        Self::central(Rational::one())
    }

    pub fn central(c: Rational) -> Self {
        Self {
            central: c,
            ..Self::default()
        }
    }

    /// The linear mode `b_m`, `m != 0`.
    pub fn mode(m: i64) -> Result<Self> {
        Self::linear(LaurentPoly::t(m))
    }

    /// A linear element of H'.
    pub fn linear(f: LaurentPoly) -> Result<Self> {
        if f.has_constant_term() {
            return Err(Error::ConstantTerm);
        }
        Ok(Self {
            linear: f,
            ..Self::default()
        })
    }

    /// Builds an element from raw parts, canonicalizing every diagonal.
    pub fn from_parts<I>(central: Rational, linear: LaurentPoly, diagonals: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, IndexSeries)>,
    {
        if linear.has_constant_term() {
            return Err(Error::ConstantTerm);
        }
        let mut out = Self {
            central,
            linear,
            quadratic: BTreeMap::new(),
        };
        for (d, c) in diagonals {
            out.add_diagonal(d, &c);
        }
        Ok(out)
    }

    fn add_diagonal(&mut self, d: i64, c: &IndexSeries) {
        let sum = match self.quadratic.get(&d) {
            Some(cur) => cur + c,
            None => c.clone(),
        };
        let sum = canonical_diagonal(d, &sum);
        if sum.is_zero() {
            self.quadratic.remove(&d);
        } else {
            self.quadratic.insert(d, sum);
        }
    }

    /// The normal-ordered lift `:fg:` of the symmetric product of `f, g ∈ H'`.
    pub fn normal_order_lift(f: &LaurentPoly, g: &LaurentPoly) -> Result<Self> {
        if f.has_constant_term() || g.has_constant_term() {
            return Err(Error::ConstantTerm);
        }
        // c(a, b) = f_a g_b + f_b g_a, grouped by anti-diagonal.
        let mut by_offset: BTreeMap<i64, Vec<(i64, Rational)>> = BTreeMap::new();
        for (a, fa) in f.terms() {
            for (b, gb) in g.terms() {
                let v = fa * gb;
                let entry = by_offset.entry(a + b).or_default();
                entry.push((a, v.clone()));
                entry.push((b, v));
            }
        }
        let diagonals = by_offset
            .into_iter()
            .map(|(d, vals)| (d, IndexSeries::finite(vals)));
        Self::from_parts(Rational::zero(), LaurentPoly::zero(), diagonals)
    }

    /// `:b_a b_b:`
    pub fn normal_ordered(a: i64, b: i64) -> Result<Self> {
        Self::normal_order_lift(&LaurentPoly::t(a), &LaurentPoly::t(b))
    }

    /// Oscillator image of `L_p`: `1/2 sum_i b_{-i} b_{i+p}`, `i ∉ {0, -p}`.
    pub fn tau(p: i64) -> Self {
        let c = IndexSeries::from_poly(Poly::constant(Rational::one()));
        Self::from_parts(Rational::zero(), LaurentPoly::zero(), [(p, c)]).expect("no linear part")
    }

    /// Lift of `L_p` to the metaplectic algebra. Same normal-ordered sum as [`Self::tau`];
    /// the central term only shows up in brackets.
    pub fn tau_hat(p: i64) -> Self {
        Self::tau(p)
    }

    /// The number operator `:b_{-i} b_i:`.
    pub fn number_operator(i: i64) -> Self {
        Self::normal_ordered(-i, i).expect("i != 0")
    }

    pub fn central_part(&self) -> &Rational {
        &self.central
    }

    pub fn linear_part(&self) -> &LaurentPoly {
        &self.linear
    }

    pub fn diagonals(&self) -> impl Iterator<Item = (i64, &IndexSeries)> + '_ {
        self.quadratic.iter().map(|(d, c)| (*d, c))
    }

    pub fn diagonal(&self, d: i64) -> Option<&IndexSeries> {
        self.quadratic.get(&d)
    }

    /// Symmetric coefficient `c(a, b)`.
    pub fn symmetric_coefficient(&self, a: i64, b: i64) -> Rational {
        self.quadratic
            .get(&(a + b))
            .map(|c| c.value(a))
            .unwrap_or_else(Rational::zero)
    }

    /// Coefficient of the monomial `:b_a b_b:` on the unordered pair `{a, b}`.
    pub fn pair_coefficient(&self, a: i64, b: i64) -> Rational {
        let c = self.symmetric_coefficient(a, b);
        if a == b {
            c * rat(1, 2)
        } else {
            c
        }
    }

    pub fn is_zero(&self) -> bool {
        self.central.is_zero() && self.linear.is_zero() && self.quadratic.is_empty()
    }

    pub fn has_quadratic_part(&self) -> bool {
        !self.quadratic.is_empty()
    }

    /// Largest `|d|` over the diagonals, 0 when there is no quadratic part.
    pub fn bandwidth(&self) -> i64 {
        self.quadratic.keys().map(|d| d.abs()).max().unwrap_or(0)
    }

    /// Image in `sp(H') ⋉ H'`: drop the central part.
    pub fn forget_central(&self) -> Self {
        Self {
            central: Rational::zero(),
            ..self.clone()
        }
    }

    pub fn quadratic_part(&self) -> Self {
        Self {
            quadratic: self.quadratic.clone(),
            ..Self::default()
        }
    }

    pub fn linear_element(&self) -> Self {
        Self {
            linear: self.linear.clone(),
            ..Self::default()
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            central: &self.central * c,
            linear: self.linear.scale(c),
            quadratic: self
                .quadratic
                .iter()
                .map(|(d, s)| (*d, s.scale(c)))
                .collect(),
        }
    }

    /// The quadratic part as an endomorphism of H: `k -> <f,k> g + <g,k> f` per
    /// monomial, i.e. `t^k -> -k c(-k, k+d) t^(k+d)` on the diagonal `d`.
    pub fn quadratic_operator(&self) -> HOperator {
        HOperator::from_diagonals(self.quadratic.iter().map(|(d, c)| (*d, column_function(c))))
    }

    /// Quadratic part acting on H plus the linear part acting by multiplication.
    pub fn h_operator(&self) -> HOperator {
        &self.quadratic_operator() + &HOperator::multiplication(&self.linear)
    }

    /// Action of the quadratic part on an element of H.
    pub fn act(&self, f: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (k, fk) in f.terms() {
            for (d, c) in &self.quadratic {
                out.add_term(k + d, fk * int(-k) * c.value(-k));
            }
        }
        out
    }

    /// The Lie bracket of the completed degree-two Weyl algebra.
    pub fn bracket(&self, other: &Self) -> Self {
        let mut central =
            -rat(1, 2) * operator::psi(&self.quadratic_operator(), &other.quadratic_operator());
        central += symplectic_form(&self.linear, &other.linear);

        let linear = &self.act(&other.linear) - &other.act(&self.linear);

        let mut out = Self {
            central,
            linear,
            quadratic: BTreeMap::new(),
        };
        for (d, ca) in &self.quadratic {
            for (e, cb) in &other.quadratic {
                out.add_diagonal(d + e, &commutator_diagonal(*d, ca, *e, cb));
            }
        }
        out
    }

    /// Bracket in `sp(H') ⋉ H'`, i.e. with the central part of the result discarded.
    pub fn semidirect_bracket(&self, other: &Self) -> Self {
        self.bracket(other).forget_central()
    }

    /// Indices `a <= b` with a nonzero coefficient, for finitely supported quadratic parts.
    pub fn finite_pairs(&self) -> Option<Vec<(i64, i64, Rational)>> {
        let mut out = Vec::new();
        for (d, c) in &self.quadratic {
            for (a, _) in c.finite_support()? {
                let b = d - a;
                if a <= b {
                    out.push((a, b, self.pair_coefficient(a, b)));
                }
            }
        }
        Some(out)
    }
}

/// `k -> -k c(-k)`
fn column_function(c: &IndexSeries) -> IndexSeries {
    c.reflect(0).weighted(&Poly::new(vec![int(0), int(-1)]))
}

/// Diagonal `d + e` of the commutator of two diagonals:
/// `c(a) = (d - a) cA(a) cB(a - d) - (e - a) cB(a) cA(a - e)`.
fn commutator_diagonal(d: i64, ca: &IndexSeries, e: i64, cb: &IndexSeries) -> IndexSeries {
    let w1 = Poly::new(vec![int(d), int(-1)]);
    let w2 = Poly::new(vec![int(e), int(-1)]);
    let t1 = ca.pointwise(&cb.shift(-d)).weighted(&w1);
    let t2 = cb.pointwise(&ca.shift(-e)).weighted(&w2);
    &t1 - &t2
}

impl Add for &QuadraticElement {
    type Output = QuadraticElement;
    fn add(self, rhs: &QuadraticElement) -> QuadraticElement {
        let mut out = QuadraticElement {
            central: &self.central + &rhs.central,
            linear: &self.linear + &rhs.linear,
            quadratic: self.quadratic.clone(),
        };
        for (d, c) in &rhs.quadratic {
            out.add_diagonal(*d, c);
        }
        out
    }
}

impl Sub for &QuadraticElement {
    type Output = QuadraticElement;
    fn sub(self, rhs: &QuadraticElement) -> QuadraticElement {
        self + &(-rhs)
    }
}

impl Neg for &QuadraticElement {
    type Output = QuadraticElement;
    fn neg(self) -> QuadraticElement {
        self.scale(&-Rational::one())
    }
}

impl Mul<&QuadraticElement> for &Rational {
    type Output = QuadraticElement;
    fn mul(self, rhs: &QuadraticElement) -> QuadraticElement {
        rhs.scale(self)
    }
}

impl Add for QuadraticElement {
    type Output = QuadraticElement;
    fn add(self, rhs: QuadraticElement) -> QuadraticElement {
        &self + &rhs
    }
}

impl Sub for QuadraticElement {
    type Output = QuadraticElement;
    fn sub(self, rhs: QuadraticElement) -> QuadraticElement {
        &self - &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(m: i64) -> QuadraticElement {
        QuadraticElement::mode(m).unwrap()
    }

    fn nq(a: i64, bb: i64) -> QuadraticElement {
        QuadraticElement::normal_ordered(a, bb).unwrap()
    }

    #[test]
    fn lift_examples() {
        let x = nq(1, -1);
        assert_eq!(x.pair_coefficient(1, -1), int(1));
        assert_eq!(x.finite_pairs().unwrap().len(), 1);

        let sq = nq(-2, -2);
        assert_eq!(sq.pair_coefficient(-2, -2), int(1));

        let f = &LaurentPoly::t(1) + &LaurentPoly::t(2);
        let lifted = QuadraticElement::normal_order_lift(&f, &LaurentPoly::t(-1)).unwrap();
        assert_eq!(lifted, &nq(1, -1) + &nq(2, -1));

        assert_eq!(
            QuadraticElement::normal_order_lift(&LaurentPoly::t(0), &LaurentPoly::t(1)),
            Err(Error::ConstantTerm)
        );
    }

    #[test]
    fn bracket_examples_from_cocycle_computation() {
        assert_eq!(b(1).bracket(&b(-1)), QuadraticElement::one());
        assert_eq!(nq(1, -2).bracket(&b(-1)), b(-2));
        assert_eq!(b(-1).bracket(&nq(1, 1)), b(1).scale(&int(-2)));
        assert!(nq(1, 1).bracket(&nq(1, -2)).is_zero());
    }

    #[test]
    fn finite_quadratic_central_term() {
        // [b_1^2, b_-1^2] = 4 :b_-1 b_1: + 2
        let lhs = nq(1, 1).bracket(&nq(-1, -1));
        let rhs = &nq(-1, 1).scale(&int(4)) + &QuadraticElement::central(int(2));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn oscillator_virasoro_relations() {
        for p in -4i64..=4 {
            for q in -4i64..=4 {
                let lhs = QuadraticElement::tau_hat(p).bracket(&QuadraticElement::tau_hat(q));
                let mut rhs = QuadraticElement::tau_hat(p + q).scale(&int(p - q));
                if p + q == 0 {
                    rhs = &rhs + &QuadraticElement::central(rat(p * p * p - p, 12));
                }
                assert_eq!(lhs, rhs, "p={p} q={q}");
            }
        }
    }

    #[test]
    fn tau_acts_as_derivation_on_h_prime() {
        assert_eq!(
            QuadraticElement::tau(0).act(&LaurentPoly::t(3)),
            LaurentPoly::monomial(3, int(-3))
        );
        for p in -3i64..=3 {
            for k in -6i64..=6 {
                let img = QuadraticElement::tau(p).act(&LaurentPoly::t(k));
                let expected = if k == 0 || k + p == 0 {
                    LaurentPoly::zero()
                } else {
                    LaurentPoly::monomial(k + p, int(-k))
                };
                assert_eq!(img, expected, "p={p} k={k}");
            }
        }
    }

    #[test]
    fn tau_series_has_excluded_slots() {
        let t = QuadraticElement::tau(3);
        let c = t.diagonal(3).unwrap();
        assert_eq!(c.value(0), int(0));
        assert_eq!(c.value(3), int(0));
        assert_eq!(c.value(1), int(1));
        assert_eq!(t.pair_coefficient(1, 2), int(1));
        let t0 = QuadraticElement::tau(0);
        assert_eq!(t0.pair_coefficient(-2, 2), int(1));
    }
}
