//! Two-cocycles on `sp(H') ⋉ H'` and `Witt ⋉ H'`.
//!
//! Every element splits into an endomorphism `X` of H and a linear part `f ∈ H'`
//! acting by multiplication. With `psi` the trace cocycle:
//!
//! - `alpha(X+f, Y+g) = psi(X, Y)`
//! - `beta(X+f, Y+g)  = psi(f, g) = -Res f dg`
//! - `gamma(X+f, Y+g) = psi(X, g) - psi(Y, f)`
//!
//! and `psi = alpha + beta + gamma`.

use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::laurent::{derivative, residue, symplectic_form, LaurentPoly};
use crate::operator::{self, HOperator};
use crate::quad::QuadraticElement;
use crate::scalar::{rat, Rational};
use crate::witt::WittElement;

/// An element seen as (endomorphism of H, multiplication part).
#[derive(Clone, Debug)]
pub struct Split {
    pub endo: HOperator,
    pub linear: LaurentPoly,
}

impl Split {
    pub fn total_operator(&self) -> HOperator {
        &self.endo + &HOperator::multiplication(&self.linear)
    }
}

/// A Lie algebra on which the cocycles are evaluated.
pub trait CocycleDomain: Clone + fmt::Debug {
    fn split(&self) -> Split;
    fn lie_bracket(&self, other: &Self) -> Self;
}

/// `sp(H') ⋉ H'`: the quadratic part acts through its symplectic endomorphism.
/// The central part is ignored; brackets drop it.
impl CocycleDomain for QuadraticElement {
    fn split(&self) -> Split {
        Split {
            endo: self.quadratic_operator(),
            linear: self.linear_part().clone(),
        }
    }

    fn lie_bracket(&self, other: &Self) -> Self {
        self.semidirect_bracket(other)
    }
}

/// `Witt ⋉ H'`: vector fields act on H as derivations.
impl CocycleDomain for WittElement {
    fn split(&self) -> Split {
        Split {
            endo: self.derivation_operator(),
            linear: self.function().clone(),
        }
    }

    fn lie_bracket(&self, other: &Self) -> Self {
        self.bracket(other)
    }
}

pub fn psi_split(u: &Split, v: &Split) -> Rational {
    operator::psi(&u.total_operator(), &v.total_operator())
}

pub fn alpha_split(u: &Split, v: &Split) -> Rational {
    operator::psi(&u.endo, &v.endo)
}

pub fn beta_split(u: &Split, v: &Split) -> Rational {
    symplectic_form(&u.linear, &v.linear)
}

pub fn gamma_split(u: &Split, v: &Split) -> Rational {
    operator::psi(&u.endo, &HOperator::multiplication(&v.linear))
        - operator::psi(&v.endo, &HOperator::multiplication(&u.linear))
}

pub fn psi<D: CocycleDomain>(u: &D, v: &D) -> Rational {
    psi_split(&u.split(), &v.split())
}

pub fn alpha<D: CocycleDomain>(u: &D, v: &D) -> Rational {
    alpha_split(&u.split(), &v.split())
}

pub fn beta<D: CocycleDomain>(u: &D, v: &D) -> Rational {
    beta_split(&u.split(), &v.split())
}

pub fn gamma<D: CocycleDomain>(u: &D, v: &D) -> Rational {
    gamma_split(&u.split(), &v.split())
}

type Evaluator = Arc<dyn Fn(&Split, &Split) -> Rational + Send + Sync>;

/// A named bilinear form, either one of the built-in cocycles or user supplied.
#[derive(Clone)]
pub enum CocycleHandle {
    Psi,
    Alpha,
    Beta,
    Gamma,
    Custom { name: String, eval: Evaluator },
}

impl fmt::Debug for CocycleHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CocycleHandle({})", self.name())
    }
}

impl CocycleHandle {
    pub fn custom<F>(name: impl Into<String>, eval: F) -> Self
    where
        F: Fn(&Split, &Split) -> Rational + Send + Sync + 'static,
    {
        Self::Custom {
            name: name.into(),
            eval: Arc::new(eval),
        }
    }

    /// `sum_i c_i * handle_i`
    pub fn linear_combination(
        name: impl Into<String>,
        terms: Vec<(Rational, CocycleHandle)>,
    ) -> Self {
        Self::custom(name, move |u, v| {
            terms
                .iter()
                .fold(Rational::zero(), |acc, (c, h)| acc + c * h.eval_split(u, v))
        })
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "psi" => Some(Self::Psi),
            "alpha" => Some(Self::Alpha),
            "beta" => Some(Self::Beta),
            "gamma" => Some(Self::Gamma),
            _ => None,
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Self::Psi => "psi",
            Self::Alpha => "alpha",
            Self::Beta => "beta",
            Self::Gamma => "gamma",
            Self::Custom { name, .. } => name,
        }
    }

    pub fn eval_split(&self, u: &Split, v: &Split) -> Rational {
        match self {
            Self::Psi => psi_split(u, v),
            Self::Alpha => alpha_split(u, v),
            Self::Beta => beta_split(u, v),
            Self::Gamma => gamma_split(u, v),
            Self::Custom { eval, .. } => eval(u, v),
        }
    }

    pub fn eval<D: CocycleDomain>(&self, u: &D, v: &D) -> Rational {
        self.eval_split(&u.split(), &v.split())
    }

    /// First probe pair violating antisymmetry, if any.
    pub fn antisymmetry_violation<D: CocycleDomain>(&self, probes: &[D]) -> Option<(usize, usize)> {
        let splits: Vec<Split> = probes.iter().map(|p| p.split()).collect();
        for (i, u) in splits.iter().enumerate() {
            for (j, v) in splits.iter().enumerate().skip(i) {
                if self.eval_split(u, v) != -self.eval_split(v, u) {
                    return Some((i, j));
                }
            }
        }
        None
    }
}

/// `alpha(f d/dt + g, h d/dt + k) = 1/6 Res f dh''` on Witt ⋉ H'.
pub fn alpha_residue_form(u: &WittElement, v: &WittElement) -> Rational {
    let f = u.vector_field_coefficient();
    let h = v.vector_field_coefficient();
    let dh3 = derivative(&derivative(&derivative(&h)));
    rat(1, 6) * residue(&(&f * &dh3))
}

/// `gamma(f d/dt + g, h d/dt + k) = -1/2 Res (f dk' - h dg')` on Witt ⋉ H'.
pub fn gamma_residue_form(u: &WittElement, v: &WittElement) -> Rational {
    let (f, g) = (u.vector_field_coefficient(), u.function().clone());
    let (h, k) = (v.vector_field_coefficient(), v.function().clone());
    let dk2 = derivative(&derivative(&k));
    let dg2 = derivative(&derivative(&g));
    rat(-1, 2) * residue(&(&(&f * &dk2) - &(&h * &dg2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn b(m: i64) -> QuadraticElement {
        QuadraticElement::mode(m).unwrap()
    }

    fn nq(x: i64, y: i64) -> QuadraticElement {
        QuadraticElement::normal_ordered(x, y).unwrap()
    }

    #[test]
    fn cocycle_values_from_the_proof() {
        assert_eq!(gamma(&nq(1, 1), &b(-2)), int(2));
        assert_eq!(gamma(&nq(1, -2), &b(1)), int(0));
        assert_eq!(beta(&b(1), &b(-1)), int(1));
        assert_eq!(psi(&b(1), &b(-1)), int(1));
    }

    #[test]
    fn psi_on_oscillator_virasoro() {
        let (a, bb) = (QuadraticElement::tau(2), QuadraticElement::tau(-2));
        assert_eq!(psi(&a, &bb), int(-1));
        for p in 1i64..=8 {
            let v = psi(&QuadraticElement::tau(p), &QuadraticElement::tau(-p));
            assert_eq!(rat(-1, 2) * v, rat(p * p * p - p, 12));
        }
    }

    #[test]
    fn psi_is_sum_of_pieces() {
        let elems = [
            &nq(1, 1) + &b(-2),
            &QuadraticElement::tau(2) + &b(-1),
            &nq(-1, -2) + &b(3),
            &QuadraticElement::tau(-1) - &b(1),
        ];
        for u in &elems {
            for v in &elems {
                assert_eq!(psi(u, v), alpha(u, v) + beta(u, v) + gamma(u, v));
            }
        }
    }

    #[test]
    fn psi_vanishes_when_both_preserve_h_plus() {
        assert_eq!(psi(&nq(2, 3), &nq(1, 4)), int(0));
        assert_eq!(psi(&nq(-1, 2), &nq(3, -1)), int(0));
    }

    #[test]
    fn residue_forms_match_trace_on_generators() {
        let l = WittElement::l;
        assert_eq!(alpha_residue_form(&l(2), &l(-2)), int(-1));
        assert_eq!(alpha(&l(2), &l(-2)), int(-1));
        assert_eq!(alpha_residue_form(&l(2), &l(3)), int(0));
        let bm1 = WittElement::b(-1).unwrap();
        assert_eq!(gamma(&l(1), &bm1), gamma_residue_form(&l(1), &bm1));
        assert_eq!(gamma(&l(1), &bm1), int(1));
    }

    #[test]
    fn handles_are_antisymmetric_on_probes() {
        let probes = vec![nq(1, 1), nq(1, -2), b(-1), QuadraticElement::tau(2), b(2)];
        for h in [
            CocycleHandle::Psi,
            CocycleHandle::Alpha,
            CocycleHandle::Beta,
            CocycleHandle::Gamma,
        ] {
            assert_eq!(h.antisymmetry_violation(&probes), None, "{}", h.name());
        }
        let combo = CocycleHandle::linear_combination(
            "mp",
            vec![
                (rat(-1, 2), CocycleHandle::Alpha),
                (int(1), CocycleHandle::Beta),
            ],
        );
        assert_eq!(
            combo.eval(&QuadraticElement::tau(2), &QuadraticElement::tau(-2)),
            rat(1, 2)
        );
    }
}
