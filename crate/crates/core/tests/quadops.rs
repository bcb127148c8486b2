use mpalg::cocycle::{self, CocycleHandle};
use mpalg::coinv::FPoint;
use mpalg::scalar::{int, rat};
use mpalg::spmatrix::{is_in_sp, is_in_sp_f, quad_to_endo};
use mpalg::verify::{generator_set, weyl_cocycle};
use mpalg::witt::{sigma, sigma_hat, DGenerator, WittElement};
use mpalg::{LaurentPoly, QuadraticElement};
use num_traits::Zero;

fn nq(a: i64, b: i64) -> QuadraticElement {
    QuadraticElement::normal_ordered(a, b).unwrap()
}

fn b(m: i64) -> QuadraticElement {
    QuadraticElement::mode(m).unwrap()
}

#[test]
fn normal_order_lift_examples() {
    let t = LaurentPoly::t;
    assert_eq!(
        QuadraticElement::normal_order_lift(&t(1), &t(-1)).unwrap(),
        nq(1, -1)
    );
    assert_eq!(nq(1, -1).pair_coefficient(-1, 1), int(1));
    assert_eq!(nq(-2, -2).pair_coefficient(-2, -2), int(1));
    let f = &t(1) + &t(2);
    let lifted = QuadraticElement::normal_order_lift(&f, &t(-1)).unwrap();
    assert_eq!(lifted, &nq(1, -1) + &nq(2, -1));
    assert!(QuadraticElement::normal_order_lift(&LaurentPoly::constant(int(1)), &t(1)).is_err());
}

#[test]
fn bracket_examples() {
    assert_eq!(b(1).bracket(&b(-1)), QuadraticElement::one());
    assert_eq!(nq(1, -2).bracket(&b(-1)), b(-2));
    assert_eq!(b(-1).bracket(&nq(1, 1)), b(1).scale(&int(-2)));
    let lhs = QuadraticElement::tau_hat(2).bracket(&QuadraticElement::tau_hat(-2));
    let rhs = &QuadraticElement::tau_hat(0).scale(&int(4)) + &QuadraticElement::central(rat(1, 2));
    assert_eq!(lhs, rhs);
}

#[test]
fn central_term_at_p_three() {
    let x = QuadraticElement::tau_hat(3).bracket(&QuadraticElement::tau_hat(-3));
    let rest = &x - &QuadraticElement::tau_hat(0).scale(&int(6));
    assert_eq!(rest, QuadraticElement::central(int(2)));
}

#[test]
fn endomorphism_examples() {
    let m = quad_to_endo(&nq(-1, 1), 6).unwrap();
    assert_eq!(m.get(1, 1), int(-1));
    let l0 = quad_to_endo(&QuadraticElement::tau(0), 6).unwrap();
    assert_eq!(l0.get(3, 3), int(-3));
    // k -> <t^-2,k> t^-3 + <t^-3,k> t^-2
    let x = quad_to_endo(&nq(-2, -3), 6).unwrap();
    assert_eq!(x.get(-3, 2), int(-2));
    assert_eq!(x.get(-2, 3), int(-3));
    assert_eq!(nq(-2, -3).act(&LaurentPoly::t(5)), LaurentPoly::zero());
}

#[test]
fn endomorphism_is_a_homomorphism_on_the_interior() {
    let elems = [
        nq(1, 1),
        nq(-1, 2),
        nq(-2, -3),
        nq(3, -1),
        QuadraticElement::tau(2),
        QuadraticElement::tau(-1),
        QuadraticElement::tau(0),
    ];
    let w = 10;
    for x in &elems {
        for y in &elems {
            let margin = x.bandwidth() + y.bandwidth();
            let lhs = quad_to_endo(&x.bracket(y).forget_central(), w).unwrap();
            let mx = quad_to_endo(x, w).unwrap();
            let my = quad_to_endo(y, w).unwrap();
            assert!(
                lhs.eq_on_interior(&mx.commutator(&my), margin),
                "{x:?} {y:?}"
            );
            assert!(lhs.is_symplectic());
        }
    }
}

#[test]
fn tau_lies_in_sp() {
    for p in -5..=5 {
        assert!(is_in_sp(&QuadraticElement::tau(p), 10).unwrap());
    }
}

#[test]
fn stabilizer_membership_examples() {
    let g1 = FPoint::new([1]).unwrap();
    assert!(is_in_sp_f(&nq(-2, 5), &g1, 8).unwrap());
    assert!(!is_in_sp_f(&QuadraticElement::tau(0), &g1, 8).unwrap());
    let g0 = FPoint::new([]).unwrap();
    for (x, y) in [(-1, 3), (-2, -4), (-5, 1)] {
        assert!(is_in_sp_f(&nq(x, y), &g0, 8).unwrap());
    }
    assert!(!is_in_sp_f(&nq(1, 2), &g0, 8).unwrap());
}

#[test]
fn cocycles_are_antisymmetric_on_the_generator_set() {
    let probes: Vec<QuadraticElement> = generator_set(3)
        .into_iter()
        .skip(1)
        .map(|(_, x)| x)
        .collect();
    for h in [
        CocycleHandle::Psi,
        CocycleHandle::Alpha,
        CocycleHandle::Beta,
        CocycleHandle::Gamma,
    ] {
        assert_eq!(h.antisymmetry_violation(&probes), None, "{}", h.name());
    }
}

#[test]
fn central_projections_commute() {
    for p in -5..=5 {
        assert_eq!(
            QuadraticElement::tau_hat(p).forget_central(),
            QuadraticElement::tau(p)
        );
        let hat = sigma_hat(DGenerator::L(p)).unwrap();
        assert_eq!(hat.forget_central(), sigma(&WittElement::l(p)));
    }
}

/// The central term of `[σ̂(L_p), σ̂(b_q)] - σ̂([L_p, b_q])` is the Ũ₂ cocycle
/// `(-1/2 alpha + beta)(σ L_p, b_q) = -p(p+1)/2 δ_{p+q,0}`. On these pairs this is
/// the negative of `psi(L_p, b_q)` computed with Witt acting by derivations.
#[test]
fn d_homomorphism_central_terms() {
    let weyl = weyl_cocycle();
    for p in -4i64..=4 {
        for q in (-4i64..=4).filter(|&q| q != 0) {
            let (u, v) = (WittElement::l(p), WittElement::b(q).unwrap());
            let lhs = sigma_hat(DGenerator::L(p))
                .unwrap()
                .bracket(&sigma_hat(DGenerator::B(q)).unwrap());
            let image = sigma(&u.bracket(&v));
            let central = &lhs - &image;
            assert!(central.linear_part().is_zero() && !central.has_quadratic_part());
            let c = central.central_part().clone();
            assert_eq!(c, weyl.eval(&sigma(&u), &sigma(&v)));
            let expected = if p + q == 0 {
                rat(-p * (p + 1), 2)
            } else {
                int(0)
            };
            assert_eq!(c, expected);
            assert_eq!(cocycle::psi(&u, &v), -expected);
        }
    }
}

#[test]
fn virasoro_relations_exact() {
    for p in -4i64..=4 {
        for q in -4i64..=4 {
            let lhs = QuadraticElement::tau_hat(p).bracket(&QuadraticElement::tau_hat(q));
            let mut rhs = QuadraticElement::tau_hat(p + q).scale(&int(p - q));
            if p + q == 0 {
                rhs = &rhs + &QuadraticElement::central(rat(p * p * p - p, 12));
            }
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn psi_preserving_h_plus_vanishes() {
    let plus = [
        nq(1, 2),
        nq(3, 3),
        QuadraticElement::tau(1),
        QuadraticElement::tau(0),
    ];
    for x in &plus {
        for y in &plus {
            assert!(cocycle::psi(x, y).is_zero());
        }
    }
}
