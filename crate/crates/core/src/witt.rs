//! The Witt algebra ⋉ H' and the maps `sigma`, `sigma_hat` into the Weyl algebra.
//!
//! Elements are `sum_p w_p L_p + f` with `L_p = -t^(p+1) d/dt` and `f ∈ H'`. On H they
//! act by the derivation plus multiplication by `f`.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::operator::HOperator;
use crate::quad::QuadraticElement;
use crate::scalar::{int, rat, Rational};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WittElement {
    vector_field: BTreeMap<i64, Rational>,
    function: LaurentPoly,
}

impl WittElement {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `L_p`
    pub fn l(p: i64) -> Self {
        Self::from_parts([(p, Rational::from_integer(1.into()))], LaurentPoly::zero())
            .expect("no constant term")
    }

    /// `b_q = t^q`, `q != 0`
    pub fn b(q: i64) -> Result<Self> {
        Self::from_parts([], LaurentPoly::t(q))
    }

    pub fn from_parts<I>(vector_field: I, function: LaurentPoly) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, Rational)>,
    {
        if function.has_constant_term() {
            return Err(Error::ConstantTerm);
        }
        let mut vf = BTreeMap::new();
        for (p, c) in vector_field {
            let e: &mut Rational = vf.entry(p).or_insert_with(Rational::zero);
            *e += c;
        }
        vf.retain(|_, c: &mut Rational| !c.is_zero());
        Ok(Self {
            vector_field: vf,
            function,
        })
    }

    /// The vector field `f d/dt` with `f = -sum_p w_p t^(p+1)`.
    pub fn vector_field_coefficient(&self) -> LaurentPoly {
        LaurentPoly::from_terms(self.vector_field.iter().map(|(p, c)| (p + 1, -c.clone())))
    }

    pub fn vector_field(&self) -> impl Iterator<Item = (i64, &Rational)> + '_ {
        self.vector_field.iter().map(|(p, c)| (*p, c))
    }

    pub fn function(&self) -> &LaurentPoly {
        &self.function
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_parts(
            self.vector_field.iter().map(|(p, w)| (*p, w * c)),
            self.function.scale(c),
        )
        .expect("scaling keeps H'")
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_parts(
            self.vector_field
                .iter()
                .chain(other.vector_field.iter())
                .map(|(p, c)| (*p, c.clone())),
            &self.function + &other.function,
        )
        .expect("sum stays in H'")
    }

    /// Derivation part acting on all of H (including the constants).
    pub fn derivation_operator(&self) -> HOperator {
        let mut op = HOperator::zero();
        for (p, c) in &self.vector_field {
            op = &op + &HOperator::derivation(*p).scale(c);
        }
        op
    }

    pub fn multiplication_operator(&self) -> HOperator {
        HOperator::multiplication(&self.function)
    }

    /// Applies the vector field part to a function, projected to H'.
    pub fn derive(&self, f: &LaurentPoly) -> LaurentPoly {
        self.derivation_operator().apply(f).without_constant()
    }

    /// `[L_p, L_q] = (p - q) L_{p+q}`, `[L_p, b_q] = -q b_{p+q}`, `[b_p, b_q] = 0`,
    /// with `b_0 = 0` in H'.
    pub fn bracket(&self, other: &Self) -> Self {
        let mut vf = Vec::new();
        for (p, a) in &self.vector_field {
            for (q, b) in &other.vector_field {
                vf.push((p + q, a * b * int(p - q)));
            }
        }
        let function = &self.derive(&other.function) - &other.derive(&self.function);
        Self::from_parts(vf, function).expect("projected to H'")
    }
}

/// Generators of the central extension `D` of Witt ⋉ H'.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DGenerator {
    L(i64),
    B(i64),
    One,
}

/// `sigma(L_p) = tau(L_p) - (p+1)/2 b_p`, `sigma(b_q) = b_q`, extended linearly.
pub fn sigma(u: &WittElement) -> QuadraticElement {
    let mut out = QuadraticElement::linear(u.function.clone()).expect("H' element");
    for (p, c) in &u.vector_field {
        out = &out + &sigma_l(*p).scale(c);
    }
    out
}

fn sigma_l(p: i64) -> QuadraticElement {
    let tau = QuadraticElement::tau(p);
    if p == 0 {
        return tau;
    }
    let shift =
        QuadraticElement::linear(LaurentPoly::monomial(p, rat(-(p + 1), 2))).expect("p != 0");
    &tau + &shift
}

/// Lift of `sigma` to `D`: same formulas, with `1 -> 1`.
pub fn sigma_hat(x: DGenerator) -> Result<QuadraticElement> {
    match x {
        DGenerator::L(p) => Ok(sigma_l(p)),
        DGenerator::B(q) => QuadraticElement::mode(q),
        DGenerator::One => Ok(QuadraticElement::one()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_examples() {
        assert!(sigma(&WittElement::l(0)).linear_part().is_zero());
        assert_eq!(
            sigma(&WittElement::b(3).unwrap()),
            QuadraticElement::mode(3).unwrap()
        );
        let expected =
            &QuadraticElement::tau(2) - &QuadraticElement::mode(2).unwrap().scale(&rat(3, 2));
        assert_eq!(sigma(&WittElement::l(2)), expected);
        assert!(sigma(&WittElement::l(-1)).linear_part().is_zero());
    }

    #[test]
    fn witt_relations() {
        let (l2, l3) = (WittElement::l(2), WittElement::l(3));
        assert_eq!(l2.bracket(&l3), WittElement::l(5).scale(&int(-1)));
        let b = WittElement::b(-1).unwrap();
        assert_eq!(WittElement::l(1).bracket(&b), WittElement::zero());
        assert_eq!(WittElement::l(2).bracket(&b), WittElement::b(1).unwrap());
    }

    #[test]
    fn sigma_is_a_lie_homomorphism_modulo_center() {
        let gens: Vec<WittElement> = (-4..=4)
            .map(WittElement::l)
            .chain(
                (-4..=4)
                    .filter(|&q| q != 0)
                    .map(|q| WittElement::b(q).unwrap()),
            )
            .collect();
        for u in &gens {
            for v in &gens {
                let lhs = sigma(u).semidirect_bracket(&sigma(v));
                assert_eq!(lhs, sigma(&u.bracket(v)), "{u:?} {v:?}");
            }
        }
    }

    #[test]
    fn sigma_hat_forgets_to_sigma() {
        for p in -5..=5 {
            let hat = sigma_hat(DGenerator::L(p)).unwrap();
            assert_eq!(hat.forget_central(), sigma(&WittElement::l(p)));
        }
        assert_eq!(sigma_hat(DGenerator::One).unwrap(), QuadraticElement::one());
    }
}
