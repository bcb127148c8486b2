use mpalg::fock::{
    apply_mode, apply_quadratic, basis_up_to, graded_basis, measure_central_charge, FockVector,
    VirasoroField,
};
use mpalg::scalar::int;
use mpalg::QuadraticElement;

#[test]
fn heisenberg_relations() {
    let vectors = basis_up_to(8, 1);
    for m in -5i64..=5 {
        for n in -5i64..=5 {
            if m == 0 || n == 0 {
                continue;
            }
            for v in &vectors {
                let mn = apply_mode(m, 1, &apply_mode(n, 1, v).unwrap()).unwrap();
                let nm = apply_mode(n, 1, &apply_mode(m, 1, v).unwrap()).unwrap();
                let expected = if m + n == 0 {
                    v.scale(&int(m))
                } else {
                    FockVector::zero(1)
                };
                assert_eq!(mn.try_sub(&nm).unwrap(), expected, "m={m} n={n} v={v}");
            }
        }
    }
}

#[test]
fn single_diagonal_shifts_degree() {
    let elems = [
        QuadraticElement::normal_ordered(1, 2).unwrap(),
        QuadraticElement::normal_ordered(-1, -1).unwrap(),
        QuadraticElement::normal_ordered(-3, 1).unwrap(),
        QuadraticElement::tau(2),
        QuadraticElement::tau(-3),
    ];
    for x in &elems {
        let d = x.diagonals().next().unwrap().0;
        for v in basis_up_to(7, 1) {
            let k = v.homogeneous_degree().unwrap() as i64;
            let w = apply_quadratic(x, &v, 1).unwrap();
            if let Some(deg) = w.homogeneous_degree() {
                assert_eq!(deg as i64, k - d);
            } else {
                assert!(w.is_zero());
            }
        }
    }
}

#[test]
fn rank_two_channels_are_independent() {
    let v: FockVector = "([2]|[1])".parse().unwrap();
    let a = apply_mode(-1, 1, &apply_mode(1, 2, &v).unwrap()).unwrap();
    let b = apply_mode(1, 2, &apply_mode(-1, 1, &v).unwrap()).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.to_string(), "([2,1]|[])");
    assert_eq!(graded_basis(3, 2).len(), 10);
}

#[test]
fn central_charge_is_additive_over_channels() {
    let vectors = basis_up_to(4, 2);
    assert_eq!(
        measure_central_charge(3, &vectors, VirasoroField::Total).unwrap(),
        int(2)
    );
    assert_eq!(
        measure_central_charge(3, &vectors, VirasoroField::Channel(2)).unwrap(),
        int(1)
    );
}
