//! Identity checks. Each check returns a [`Verdict`] with the parameters it ran
//! under and up to [`MAX_WITNESSES`] failing instances.

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cocycle::{self, CocycleDomain, CocycleHandle};
use crate::coinv::FPoint;
use crate::error::{Error, Result};
use crate::fock::{self, apply_quadratic, basis_up_to, FockVector};
use crate::linalg;
use crate::quad::QuadraticElement;
use crate::scalar::{format, int, rat, Rational};
use crate::witt::{sigma, sigma_hat, DGenerator, WittElement};

pub const MAX_WITNESSES: usize = 20;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub check: String,
    pub parameters: Value,
    pub pass: bool,
    pub witnesses: Vec<String>,
}

impl Verdict {
    fn from_failures(check: &str, parameters: Value, failures: Vec<String>) -> Self {
        let pass = failures.is_empty();
        let mut parameters = parameters;
        if let Value::Object(map) = &mut parameters {
            map.insert("failures".into(), json!(failures.len()));
        }
        let witnesses = failures.into_iter().take(MAX_WITNESSES).collect();
        Self {
            check: check.into(),
            parameters,
            pass,
            witnesses,
        }
    }
}

fn q(x: &Rational) -> String {
    format(x)
}

pub fn cocycle_defect<D: CocycleDomain>(c: &CocycleHandle, x: &D, y: &D, z: &D) -> Rational {
    c.eval(x, &y.lie_bracket(z)) + c.eval(y, &z.lie_bracket(x)) + c.eval(z, &x.lie_bracket(y))
}

/// `{1, b_{±1..B}, :b_i b_j: (i <= j, 0 < |i|,|j| <= B), T(-(B-1)..B-1)}` with display names.
pub fn generator_set(bound: i64) -> Vec<(String, QuadraticElement)> {
    let mut out = vec![("K".to_string(), QuadraticElement::one())];
    let idx: Vec<i64> = (-bound..=bound).filter(|&i| i != 0).collect();
    for &m in &idx {
        out.push((
            format!("b({m})"),
            QuadraticElement::mode(m).expect("m != 0"),
        ));
    }
    for (n, &i) in idx.iter().enumerate() {
        for &j in &idx[n..] {
            out.push((
                format!(":b({i})b({j}):"),
                QuadraticElement::normal_ordered(i, j).expect("nonzero"),
            ));
        }
    }
    for p in -(bound - 1)..=(bound - 1) {
        out.push((format!("T({p})"), QuadraticElement::tau_hat(p)));
    }
    out
}

/// `-1/2 psi(tau(L_p), tau(L_-p)) = (p^3 - p)/12` for `1 <= p <= max_p`.
pub fn check_virasoro_central(max_p: i64) -> Verdict {
    let failures = (1..=max_p)
        .filter_map(|p| {
            let v =
                rat(-1, 2) * cocycle::psi(&QuadraticElement::tau(p), &QuadraticElement::tau(-p));
            let want = rat(p * p * p - p, 12);
            (v != want).then(|| format!("p={p}: got {} want {}", q(&v), q(&want)))
        })
        .collect();
    Verdict::from_failures("virasoro_central", json!({ "max_p": max_p }), failures)
}

/// Oscillator Virasoro relations in the degree-two Weyl algebra.
pub fn check_oscillator_virasoro(bound: i64) -> Verdict {
    let mut failures = Vec::new();
    for p in -bound..=bound {
        for r in -bound..=bound {
            let lhs = QuadraticElement::tau_hat(p).bracket(&QuadraticElement::tau_hat(r));
            let mut rhs = QuadraticElement::tau_hat(p + r).scale(&int(p - r));
            if p + r == 0 {
                rhs = &rhs + &QuadraticElement::central(rat(p * p * p - p, 12));
            }
            if lhs != rhs {
                failures.push(format!("[T({p}),T({r})]"));
            }
        }
    }
    Verdict::from_failures("oscillator_virasoro", json!({ "bound": bound }), failures)
}

/// Jacobi identity on all unordered triples of [`generator_set`].
pub fn check_jacobi(bound: i64) -> Verdict {
    let gens = generator_set(bound);
    let n = gens.len();
    let pair: Vec<Vec<QuadraticElement>> = (0..n)
        .into_par_iter()
        .map(|i| (0..n).map(|j| gens[i].1.bracket(&gens[j].1)).collect())
        .collect();
    let failures: Vec<String> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let gens = &gens;
            let pair = &pair;
            (i..n).flat_map(move |j| {
                (j..n).filter_map(move |k| {
                    let (a, b, c) = (&gens[i].1, &gens[j].1, &gens[k].1);
                    let s = &(&a.bracket(&pair[j][k]) + &b.bracket(&pair[k][i]))
                        + &c.bracket(&pair[i][j]);
                    (!s.is_zero()).then(|| format!("({}, {}, {})", gens[i].0, gens[j].0, gens[k].0))
                })
            })
        })
        .collect();
    let triples = n * (n + 1) * (n + 2) / 6;
    Verdict::from_failures(
        "jacobi",
        json!({ "bound": bound, "generators": n, "triples": triples }),
        failures,
    )
}

/// The regression values from the non-cocycle argument for `gamma`, plus zero
/// defect of `alpha` and `beta` on all triples of [`generator_set`] (central element omitted).
pub fn check_cocycle_defects(bound: i64) -> Verdict {
    let b = |m| QuadraticElement::mode(m).expect("m != 0");
    let nq = |x, y| QuadraticElement::normal_ordered(x, y).expect("nonzero");
    let mut failures = Vec::new();
    let mut expect = |what: &str, got: Rational, want: Rational| {
        if got != want {
            failures.push(format!("{what}: got {} want {}", q(&got), q(&want)));
        }
    };
    let (x, y, z) = (nq(1, 1), nq(1, -2), b(-1));
    expect(
        "gamma defect",
        cocycle_defect(&CocycleHandle::Gamma, &x, &y, &z),
        int(2),
    );
    expect(
        "alpha defect",
        cocycle_defect(&CocycleHandle::Alpha, &x, &y, &z),
        int(0),
    );
    expect(
        "beta defect",
        cocycle_defect(&CocycleHandle::Beta, &b(1), &b(2), &b(3)),
        int(0),
    );
    expect(
        "gamma(:b(1)b(1):, b(-2))",
        cocycle::gamma(&x, &b(-2)),
        int(2),
    );
    expect(
        "gamma(:b(1)b(-2):, b(1))",
        cocycle::gamma(&y, &b(1)),
        int(0),
    );
    let checks = [
        ("[:b(1)b(-2):, b(-1)]", y.bracket(&z), b(-2)),
        ("[b(-1), :b(1)b(1):]", z.bracket(&x), b(1).scale(&int(-2))),
        (
            "[:b(1)b(1):, :b(1)b(-2):]",
            x.bracket(&y),
            QuadraticElement::zero(),
        ),
    ];
    for (name, got, want) in checks {
        if got != want {
            failures.push(format!("{name}: got {got:?}"));
        }
    }

    let gens: Vec<(String, QuadraticElement)> = generator_set(bound).into_iter().skip(1).collect();
    let n = gens.len();
    let handles = [CocycleHandle::Alpha, CocycleHandle::Beta];
    let extra: Vec<String> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let gens = &gens;
            let handles = &handles;
            (i..n).flat_map(move |j| {
                (j..n).flat_map(move |k| {
                    handles.iter().filter_map(move |h| {
                        let d = cocycle_defect(h, &gens[i].1, &gens[j].1, &gens[k].1);
                        (!d.is_zero()).then(|| {
                            format!(
                                "{} defect {} on ({}, {}, {})",
                                h.name(),
                                q(&d),
                                gens[i].0,
                                gens[j].0,
                                gens[k].0
                            )
                        })
                    })
                })
            })
        })
        .collect();
    failures.extend(extra);
    Verdict::from_failures("cocycle_defects", json!({ "bound": bound }), failures)
}

/// `alpha` vanishes on pairs of `sp_F` window generators, `beta` on pairs from `F`.
pub fn check_splitting(point: &FPoint, window: i64) -> Verdict {
    let gens = point.sp_f_generators(window);
    let mut failures = Vec::new();
    for x in &gens {
        for y in &gens {
            let a = cocycle::alpha(x, y);
            if !a.is_zero() {
                failures.push(format!("alpha({x:?}, {y:?}) = {}", q(&a)));
            }
        }
    }
    let lin = point.f_generators(window);
    for x in &lin {
        for y in &lin {
            let b = cocycle::beta(x, y);
            if !b.is_zero() {
                failures.push(format!("beta({x:?}, {y:?}) = {}", q(&b)));
            }
        }
    }
    Verdict::from_failures(
        "splitting",
        json!({ "gaps": point.gaps().collect::<Vec<_>>(), "W": window, "generators": gens.len() }),
        failures,
    )
}

/// Witt ⋉ H' generators `L_p` (`|p| <= bound`) and `b_q` (`0 < |q| <= bound`), named.
pub fn witt_probes(bound: i64) -> Vec<(String, WittElement)> {
    let mut out: Vec<(String, WittElement)> = (-bound..=bound)
        .map(|p| (format!("L({p})"), WittElement::l(p)))
        .collect();
    for m in (-bound..=bound).filter(|&m| m != 0) {
        out.push((format!("b({m})"), WittElement::b(m).expect("m != 0")));
    }
    out
}

/// The Ũ₂ central cocycle `-1/2 alpha + beta`.
pub fn weyl_cocycle() -> CocycleHandle {
    CocycleHandle::linear_combination(
        "-1/2*alpha + beta",
        vec![
            (rat(-1, 2), CocycleHandle::Alpha),
            (Rational::one(), CocycleHandle::Beta),
        ],
    )
}

/// Compares `(-1/2 alpha + beta)(sigma u, sigma v)` with `psi(u, v)` on Witt ⋉ H',
/// where Witt acts on H by derivations and H' by multiplication.
pub fn check_pullback_sigma(bound: i64) -> Verdict {
    let probes = witt_probes(bound);
    let c = weyl_cocycle();
    let images: Vec<QuadraticElement> = probes.iter().map(|(_, u)| sigma(u)).collect();
    let mut failures = Vec::new();
    for (i, (nu, u)) in probes.iter().enumerate() {
        for (j, (nv, v)) in probes.iter().enumerate() {
            let lhs = c.eval(&images[i], &images[j]);
            let rhs = cocycle::psi(u, v);
            if lhs != rhs {
                failures.push(format!(
                    "({nu}, {nv}): pullback {} vs psi {}",
                    q(&lhs),
                    q(&rhs)
                ));
            }
        }
    }
    Verdict::from_failures(
        "pullback_sigma",
        json!({ "bound": bound, "pairs": probes.len() * probes.len() }),
        failures,
    )
}

/// The gauge probes `(L_2, L_-2)`, `(b_1, b_-1)`, `(L_1, b_-1)` in Witt ⋉ H'.
pub fn gauge_probes() -> [(WittElement, WittElement); 3] {
    let b = |m| WittElement::b(m).expect("m != 0");
    [
        (WittElement::l(2), WittElement::l(-2)),
        (b(1), b(-1)),
        (WittElement::l(1), b(-1)),
    ]
}

/// Coefficients `(A, B, C)` with `c = A alpha + B beta + C gamma` on the gauge probes.
/// Only meaningful modulo coboundaries; the probes fix the gauge.
pub fn fit_cocycle_coefficients(c: &CocycleHandle) -> Result<(Rational, Rational, Rational)> {
    let probes = gauge_probes();
    let basis = [
        CocycleHandle::Alpha,
        CocycleHandle::Beta,
        CocycleHandle::Gamma,
    ];
    let matrix: Vec<Vec<Rational>> = probes
        .iter()
        .map(|(u, v)| basis.iter().map(|h| h.eval(u, v)).collect())
        .collect();
    let rhs: Vec<Rational> = probes.iter().map(|(u, v)| c.eval(u, v)).collect();
    if linalg::rank(&matrix) < 3 {
        return Err(Error::SingularProbes);
    }
    let x = linalg::solve(&matrix, &rhs).ok_or(Error::SingularProbes)?;
    Ok((x[0].clone(), x[1].clone(), x[2].clone()))
}

pub fn check_fit() -> Verdict {
    let mut failures = Vec::new();
    let cases = [
        (CocycleHandle::Psi, (int(1), int(1), int(1))),
        (weyl_cocycle(), (rat(-1, 2), int(1), int(0))),
        (CocycleHandle::Alpha, (int(1), int(0), int(0))),
    ];
    for (h, want) in cases {
        match fit_cocycle_coefficients(&h) {
            Ok(got) if got == want => {}
            Ok(got) => failures.push(format!(
                "{}: got ({}, {}, {})",
                h.name(),
                q(&got.0),
                q(&got.1),
                q(&got.2)
            )),
            Err(e) => failures.push(format!("{}: {e}", h.name())),
        }
    }
    Verdict::from_failures(
        "cocycle_fit",
        json!({ "probes": ["(L(2),L(-2))", "(b(1),b(-1))", "(L(1),b(-1))"], "gauge": "fixed probe basis; coboundaries shift probe values" }),
        failures,
    )
}

/// Trace `alpha`, `gamma` against the residue forms on `u = L_p + b_q`, `v = L_p' + b_q'`.
pub fn check_closed_forms(window: i64) -> Verdict {
    let mut elems = Vec::new();
    for p in -window..=window {
        for m in (-window..=window).filter(|&m| m != 0) {
            elems.push((
                (p, m),
                WittElement::l(p).add(&WittElement::b(m).expect("m != 0")),
            ));
        }
    }
    let failures: Vec<String> = elems
        .par_iter()
        .flat_map_iter(|((p, m), u)| {
            elems.iter().filter_map(move |((p2, m2), v)| {
                let a = cocycle::alpha(u, v);
                let a_res = cocycle::alpha_residue_form(u, v);
                let g = cocycle::gamma(u, v);
                let g_res = cocycle::gamma_residue_form(u, v);
                (a != a_res || g != g_res).then(|| {
                    format!(
                        "(L({p})+b({m}), L({p2})+b({m2})): alpha {} vs {}, gamma {} vs {}",
                        q(&a),
                        q(&a_res),
                        q(&g),
                        q(&g_res)
                    )
                })
            })
        })
        .collect();
    Verdict::from_failures(
        "closed_forms",
        json!({ "window": window, "pairs": elems.len() * elems.len() }),
        failures,
    )
}

/// Central data of the extensions and the twisting multiples.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CentralScalars {
    pub central_charge: String,
    pub mp_cocycle: String,
    pub weyl_cocycle: String,
    pub lambda_fiber_scalar: String,
    pub theta_fiber_scalar: String,
    pub a_side_multiple: String,
    pub x_side_multiple: String,
    pub mp_on_tau_2: String,
    pub consistent: bool,
}

pub const LAMBDA_FIBER_SCALAR: i64 = 2;
pub const THETA_FIBER_SCALAR: i64 = -1;

/// The multiples are `c / (fiber scalar)`: `c/2` on the A side, `-c` on the X side.
pub fn central_scalars(c: &Rational) -> CentralScalars {
    let a_side = c / int(LAMBDA_FIBER_SCALAR);
    let x_side = c / int(THETA_FIBER_SCALAR);
    let mp =
        CocycleHandle::linear_combination("-1/2*alpha", vec![(rat(-1, 2), CocycleHandle::Alpha)]);
    let mp_value = mp.eval(&QuadraticElement::tau(2), &QuadraticElement::tau(-2));
    let consistent = &a_side * int(LAMBDA_FIBER_SCALAR) == *c
        && &x_side * int(THETA_FIBER_SCALAR) == *c
        && mp_value == rat(1, 2);
    CentralScalars {
        central_charge: q(c),
        mp_cocycle: "-1/2*alpha".into(),
        weyl_cocycle: "-1/2*alpha + beta".into(),
        lambda_fiber_scalar: LAMBDA_FIBER_SCALAR.to_string(),
        theta_fiber_scalar: THETA_FIBER_SCALAR.to_string(),
        a_side_multiple: q(&a_side),
        x_side_multiple: q(&x_side),
        mp_on_tau_2: q(&mp_value),
        consistent,
    }
}

pub fn check_central_scalars(charges: &[Rational]) -> Verdict {
    let mut failures = Vec::new();
    for c in charges {
        let t = central_scalars(c);
        if !t.consistent || t.a_side_multiple != q(&(c * rat(1, 2))) || t.x_side_multiple != q(&-c)
        {
            failures.push(format!("c={}: {t:?}", q(c)));
        }
    }
    let cs: Vec<String> = charges.iter().map(q).collect();
    Verdict::from_failures("central_scalars", json!({ "charges": cs }), failures)
}

/// Forgetting central parts sends `tau_hat` to `tau` and `sigma_hat` to `sigma`.
pub fn check_projections(bound: i64) -> Verdict {
    let mut failures = Vec::new();
    for p in -bound..=bound {
        if QuadraticElement::tau_hat(p).forget_central() != QuadraticElement::tau(p) {
            failures.push(format!("tau_hat({p})"));
        }
        let hat = sigma_hat(DGenerator::L(p)).expect("L generator");
        if hat.forget_central() != sigma(&WittElement::l(p)) {
            failures.push(format!("sigma_hat(L({p}))"));
        }
        if p != 0 {
            let hat = sigma_hat(DGenerator::B(p)).expect("p != 0");
            if hat.forget_central() != sigma(&WittElement::b(p).expect("p != 0")) {
                failures.push(format!("sigma_hat(b({p}))"));
            }
        }
    }
    if !sigma_hat(DGenerator::One)
        .expect("one")
        .forget_central()
        .is_zero()
    {
        failures.push("sigma_hat(1) is not central".into());
    }
    Verdict::from_failures("projections", json!({ "bound": bound }), failures)
}

fn commutator_defect(
    a: &QuadraticElement,
    b: &QuadraticElement,
    ab: &QuadraticElement,
    v: &FockVector,
) -> Result<FockVector> {
    let lhs = apply_quadratic(ab, v, 1)?;
    let x = apply_quadratic(a, &apply_quadratic(b, v, 1)?, 1)?;
    let y = apply_quadratic(b, &apply_quadratic(a, v, 1)?, 1)?;
    lhs.try_sub(&x.try_sub(&y)?)
}

/// `bracket(A, B)` acts on the Fock space as the commutator of the actions.
pub fn check_bracket_action(bound: i64, max_degree: u32) -> Verdict {
    let gens = generator_set(bound);
    let vectors = basis_up_to(max_degree, 1);
    let n = gens.len();
    let failures: Vec<String> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let gens = &gens;
            let vectors = &vectors;
            (0..n).flat_map(move |j| {
                let ab = gens[i].1.bracket(&gens[j].1);
                vectors.iter().filter_map(move |v| {
                    let d = commutator_defect(&gens[i].1, &gens[j].1, &ab, v).expect("rank one");
                    (!d.is_zero()).then(|| format!("[{}, {}] on {v}", gens[i].0, gens[j].0))
                })
            })
        })
        .collect();
    Verdict::from_failures(
        "bracket_action",
        json!({ "bound": bound, "max_degree": max_degree, "vectors": vectors.len() }),
        failures,
    )
}

/// `([L_p, L_q] - (p-q) L_{p+q} - δ (p^3-p)/12) v = 0` on the rank-one Fock space.
pub fn check_fock_virasoro(bound: i64, max_degree: u32) -> Verdict {
    let vectors = basis_up_to(max_degree, 1);
    let pairs: Vec<(i64, i64)> = (-bound..=bound)
        .flat_map(|p| (-bound..=bound).map(move |r| (p, r)))
        .collect();
    let failures: Vec<String> = pairs
        .par_iter()
        .flat_map_iter(|&(p, r)| {
            vectors.iter().filter_map(move |v| {
                let l = |k: i64, w: &FockVector| fock::virasoro(k, w, 1).expect("rank one");
                let mut d = l(p, &l(r, v)).try_sub(&l(r, &l(p, v))).expect("rank one");
                d = d
                    .try_sub(&l(p + r, v).scale(&int(p - r)))
                    .expect("rank one");
                if p + r == 0 {
                    d = d
                        .try_sub(&v.scale(&rat(p * p * p - p, 12)))
                        .expect("rank one");
                }
                (!d.is_zero()).then(|| format!("[L({p}), L({r})] on {v}"))
            })
        })
        .collect();
    Verdict::from_failures(
        "fock_virasoro",
        json!({ "bound": bound, "max_degree": max_degree }),
        failures,
    )
}

pub fn check_admissibility(max_i: i64, max_degree: u32) -> Verdict {
    let failures = match fock::check_admissibility(1, max_i, max_degree) {
        Ok(()) => Vec::new(),
        Err(e) => vec![e.to_string()],
    };
    Verdict::from_failures(
        "heisenberg_admissibility",
        json!({ "max_i": max_i, "max_degree": max_degree }),
        failures,
    )
}

/// The gap sets used by the aggregate splitting check.
pub fn splitting_gap_sets() -> Vec<Vec<i64>> {
    vec![vec![], vec![1], vec![1, 2], vec![1, 3]]
}

/// All checks at probe bound `b`; Fock checks use degree `2b`.
pub fn verify_all(bound: i64) -> Vec<Verdict> {
    let degree = (2 * bound).max(0) as u32;
    let mut out = vec![
        check_virasoro_central(2 * bound),
        check_oscillator_virasoro(bound),
        check_jacobi(bound),
        check_cocycle_defects(bound),
        check_closed_forms(bound),
        check_pullback_sigma(bound),
    ];
    for gaps in splitting_gap_sets() {
        let point = FPoint::new(gaps).expect("positive gaps");
        out.push(check_splitting(&point, 2 * bound));
    }
    out.push(check_fit());
    out.push(check_central_scalars(&[int(0), int(1), int(2), int(26)]));
    out.push(check_projections(bound));
    out.push(check_fock_virasoro(bound, degree));
    out.push(check_bracket_action(bound, degree.min(6)));
    out.push(check_admissibility(2 * bound, degree));
    out
}
