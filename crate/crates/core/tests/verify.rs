use mpalg::cocycle::CocycleHandle;
use mpalg::coinv::FPoint;
use mpalg::scalar::int;
use mpalg::verify::{self, cocycle_defect, fit_cocycle_coefficients};
use mpalg::QuadraticElement;

#[test]
fn splitting_holds_for_small_gap_sets() {
    for mask in 0u32..64 {
        let gaps: Vec<i64> = (1..=6).filter(|g| mask & (1 << (g - 1)) != 0).collect();
        let p = FPoint::new(gaps).unwrap();
        let v = verify::check_splitting(&p, 7);
        assert!(v.pass, "{v:?}");
    }
}

#[test]
fn gamma_defect_changes_sign_under_transposition() {
    let nq = |a, b| QuadraticElement::normal_ordered(a, b).unwrap();
    let (x, y, z) = (nq(1, 1), nq(1, -2), QuadraticElement::mode(-1).unwrap());
    let g = CocycleHandle::Gamma;
    assert_eq!(cocycle_defect(&g, &x, &y, &z), int(2));
    assert_eq!(cocycle_defect(&g, &y, &x, &z), int(-2));
    assert_eq!(cocycle_defect(&g, &y, &z, &x), int(2));
}

#[test]
fn fit_is_linear() {
    let combo = CocycleHandle::linear_combination(
        "2psi - gamma",
        vec![
            (int(2), CocycleHandle::Psi),
            (int(-1), CocycleHandle::Gamma),
        ],
    );
    assert_eq!(
        fit_cocycle_coefficients(&combo).unwrap(),
        (int(2), int(2), int(1))
    );
}

#[test]
fn verdicts_serialize_with_fixed_fields() {
    let v = verify::check_projections(2);
    let s = serde_json::to_string(&v).unwrap();
    assert_eq!(
        s,
        r#"{"check":"projections","parameters":{"bound":2,"failures":0},"pass":true,"witnesses":[]}"#
    );
}
