//! Points `F ⊂ H_-` given by numerical semigroups, and truncated coinvariants.
//!
//! For `S ⊂ Z_{>0}` with finite complement `G` (the gaps), `F` is the closed span
//! of `t^{-s}`, `s ∈ S`. It has codimension `g = |G|` in `H_-`. The stabilizer
//! `sp_F` is truncated to the window family `:b_{-s} b_m:` with `s ∈ S ∩ [1, W]`
//! and `0 < |m| <= W`, and the quotient `V / sp_F V` is computed degree by
//! degree with exact row reduction.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{apply_embedded, graded_basis, FockVector, Label, VoaConfig};
use crate::laurent::LaurentPoly;
use crate::linalg::{EchelonBasis, SparseRow};
use crate::quad::QuadraticElement;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FPoint {
    gaps: BTreeSet<i64>,
}

impl FPoint {
    pub fn new<I: IntoIterator<Item = i64>>(gaps: I) -> Result<Self> {
        let gaps: BTreeSet<i64> = gaps.into_iter().collect();
        if let Some(bad) = gaps.iter().find(|&&g| g <= 0) {
            return Err(Error::InvalidGaps(format!(
                "gap {bad} is not a positive integer"
            )));
        }
        Ok(Self { gaps })
    }

    /// Gaps of the semigroup generated by `generators` (which must have gcd 1).
    pub fn from_semigroup_generators(generators: &[i64]) -> Result<Self> {
        if generators.iter().any(|&g| g <= 0) {
            return Err(Error::InvalidGaps("generators must be positive".into()));
        }
        let gcd = generators.iter().fold(0i64, |a, &b| num_integer_gcd(a, b));
        if gcd != 1 {
            return Err(Error::InvalidGaps(format!(
                "generators have gcd {gcd}, complement is infinite"
            )));
        }
        let bound = generators.iter().product::<i64>().max(1);
        let mut member = vec![false; bound as usize + 1];
        member[0] = true;
        for n in 1..=bound as usize {
            member[n] = generators
                .iter()
                .any(|&g| n >= g as usize && member[n - g as usize]);
        }
        Self::new((1..=bound).filter(|&n| !member[n as usize]))
    }

    pub fn gaps(&self) -> impl Iterator<Item = i64> + '_ {
        self.gaps.iter().copied()
    }

    pub fn genus(&self) -> usize {
        self.gaps.len()
    }

    pub fn in_s(&self, s: i64) -> bool {
        s > 0 && !self.gaps.contains(&s)
    }

    /// Whether `S` is closed under addition.
    pub fn is_semigroup(&self) -> bool {
        let top = self.gaps.iter().max().copied().unwrap_or(0);
        (1..=top).all(|a| (1..=top).all(|b| !(self.in_s(a) && self.in_s(b)) || self.in_s(a + b)))
    }

    /// Whether `f` lies in `F`, i.e. is supported on `{-s : s ∈ S}`.
    pub fn contains(&self, f: &LaurentPoly) -> bool {
        f.terms().all(|(k, _)| self.in_s(-k))
    }

    /// Basis of `F^⊥` within the window: `t^{-m}` for `1 <= m <= W`, then `t^m` for gaps `m <= W`.
    pub fn fperp_basis(&self, window: i64) -> Vec<LaurentPoly> {
        let mut out: Vec<LaurentPoly> = (1..=window).map(|m| LaurentPoly::t(-m)).collect();
        out.extend(
            self.gaps
                .iter()
                .filter(|&&g| g <= window)
                .map(|&g| LaurentPoly::t(g)),
        );
        out
    }

    /// `:b_{-s} b_m:` for `s ∈ S ∩ [1, W]`, `m ∈ [-W, W] \ {0}`, in that nesting order.
    pub fn sp_f_generators(&self, window: i64) -> Vec<QuadraticElement> {
        let mut out = Vec::new();
        for s in (1..=window).filter(|&s| self.in_s(s)) {
            for m in (-window..=window).filter(|&m| m != 0) {
                out.push(QuadraticElement::normal_ordered(-s, m).expect("nonzero modes"));
            }
        }
        out
    }

    /// The linear generators `b_{-s}`, `s ∈ S ∩ [1, W]`.
    pub fn f_generators(&self, window: i64) -> Vec<QuadraticElement> {
        (1..=window)
            .filter(|&s| self.in_s(s))
            .map(|s| QuadraticElement::mode(-s).expect("nonzero mode"))
            .collect()
    }
}

fn num_integer_gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        num_integer_gcd(b, a % b)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoinvReport {
    pub gaps: Vec<i64>,
    pub rank: usize,
    #[serde(rename = "N")]
    pub n: u32,
    #[serde(rename = "M")]
    pub m: u32,
    #[serde(rename = "W")]
    pub w: u32,
    pub dims: Vec<usize>,
    pub stabilized: bool,
    pub generators: usize,
}

/// Which quotient to compute.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoinvKind {
    /// `V / sp_F V`
    A,
    /// `V / (sp_F ⋉ F) V`
    X,
}

/// Bounds on a single run. When exceeded the report is partial and never stabilized.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Limits {
    pub max_relations: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoinvRun {
    pub report: CoinvReport,
    pub complete: bool,
}

fn check_params(n: u32, m: u32, w: u32) -> Result<()> {
    if n > m {
        return Err(Error::InvalidParameters(format!("N = {n} exceeds M = {m}")));
    }
    if w < m {
        return Err(Error::InvalidParameters(format!(
            "W = {w} is smaller than M = {m}"
        )));
    }
    Ok(())
}

/// Quotient dimension in degree `t` and whether the relation budget sufficed.
fn degree_quotient(
    config: &VoaConfig,
    gens: &[(i64, QuadraticElement)],
    t: u32,
    m: u32,
    budget: Option<usize>,
) -> Result<(usize, bool)> {
    let basis = graded_basis(t, config.rank());
    let index: HashMap<&Label, usize> = basis.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let mut ech = EchelonBasis::new();
    let mut used = 0usize;
    for (lowering, x) in gens {
        let k = t as i64 + lowering;
        if k < 0 || k > m as i64 {
            continue;
        }
        for label in graded_basis(k as u32, config.rank()) {
            if ech.rank() == basis.len() {
                return Ok((0, true));
            }
            if budget.is_some_and(|b| used >= b) {
                return Ok((basis.len() - ech.rank(), false));
            }
            used += 1;
            let image = apply_embedded(config, x, &FockVector::basis(label))?;
            let row: SparseRow = image.terms().map(|(l, c)| (index[l], c.clone())).collect();
            ech.insert(row);
        }
    }
    Ok((basis.len() - ech.rank(), true))
}

/// Degree lowered by a generator on `V`.
fn lowering(x: &QuadraticElement) -> i64 {
    if let Some((d, _)) = x.diagonals().next() {
        d
    } else {
        x.linear_part().max_exponent().expect("nonzero generator")
    }
}

/// One truncated run. Degrees are reduced independently and in parallel; the
/// result does not depend on scheduling.
pub fn coinvariants(
    kind: CoinvKind,
    config: &VoaConfig,
    point: &FPoint,
    n: u32,
    m: u32,
    w: u32,
    limits: Limits,
) -> Result<CoinvRun> {
    check_params(n, m, w)?;
    let mut gens = point.sp_f_generators(w as i64);
    if kind == CoinvKind::X {
        gens.extend(point.f_generators(w as i64));
    }
    let tagged: Vec<(i64, QuadraticElement)> =
        gens.iter().map(|x| (lowering(x), x.clone())).collect();
    let per_degree: Vec<Result<(usize, bool)>> = (0..=n)
        .into_par_iter()
        .map(|t| degree_quotient(config, &tagged, t, m, limits.max_relations))
        .collect();
    let mut dims = Vec::with_capacity(per_degree.len());
    let mut complete = true;
    for r in per_degree {
        let (d, ok) = r?;
        dims.push(d);
        complete &= ok;
    }
    Ok(CoinvRun {
        report: CoinvReport {
            gaps: point.gaps().collect(),
            rank: config.rank(),
            n,
            m,
            w,
            dims,
            stabilized: false,
            generators: gens.len(),
        },
        complete,
    })
}

pub fn coinvariants_a(
    config: &VoaConfig,
    point: &FPoint,
    n: u32,
    m: u32,
    w: u32,
) -> Result<CoinvReport> {
    Ok(coinvariants(CoinvKind::A, config, point, n, m, w, Limits::default())?.report)
}

pub fn coinvariants_x(
    config: &VoaConfig,
    point: &FPoint,
    n: u32,
    m: u32,
    w: u32,
) -> Result<CoinvReport> {
    Ok(coinvariants(CoinvKind::X, config, point, n, m, w, Limits::default())?.report)
}

/// Runs the schedule of `(M, W)` steps until two consecutive complete runs agree.
/// Returns the last run performed; `stabilized` is set only on agreement.
pub fn stabilize(
    kind: CoinvKind,
    config: &VoaConfig,
    point: &FPoint,
    n: u32,
    schedule: &[(u32, u32)],
    limits: Limits,
) -> Result<CoinvReport> {
    if schedule.is_empty() {
        return Err(Error::InvalidParameters("empty schedule".into()));
    }
    for pair in schedule.windows(2) {
        let ((m0, w0), (m1, w1)) = (pair[0], pair[1]);
        if m1 < m0 || w1 < w0 || (m1, w1) == (m0, w0) {
            return Err(Error::InvalidParameters(
                "schedule must be strictly increasing".into(),
            ));
        }
    }
    let mut prev: Option<Vec<usize>> = None;
    let mut last = None;
    for &(m, w) in schedule {
        let run = coinvariants(kind, config, point, n, m, w, limits)?;
        if !run.complete {
            let mut report = run.report;
            report.stabilized = false;
            return Ok(report);
        }
        let mut report = run.report;
        if prev.as_ref() == Some(&report.dims) {
            report.stabilized = true;
            return Ok(report);
        }
        prev = Some(report.dims.clone());
        last = Some(report);
    }
    Ok(last.expect("nonempty schedule"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::psi;
    use crate::laurent::symplectic_form;
    use crate::spmatrix::is_in_sp_f;
    use num_traits::Zero;

    fn genus_one() -> FPoint {
        FPoint::new([1]).unwrap()
    }

    #[test]
    fn fperp_examples() {
        let t = LaurentPoly::t;
        assert_eq!(
            genus_one().fperp_basis(4),
            vec![t(-1), t(-2), t(-3), t(-4), t(1)]
        );
        assert_eq!(
            FPoint::new([]).unwrap().fperp_basis(3),
            vec![t(-1), t(-2), t(-3)]
        );
        let g2 = FPoint::new([1, 2]).unwrap();
        assert_eq!(g2.fperp_basis(3), vec![t(-1), t(-2), t(-3), t(1), t(2)]);
    }

    #[test]
    fn generator_counts() {
        assert_eq!(FPoint::new([]).unwrap().sp_f_generators(2).len(), 8);
        assert_eq!(genus_one().sp_f_generators(2).len(), 4);
    }

    #[test]
    fn generators_are_sound() {
        for p in [
            FPoint::new([]).unwrap(),
            genus_one(),
            FPoint::new([1, 2, 4, 5]).unwrap(),
        ] {
            let gens = p.sp_f_generators(5);
            for x in &gens {
                assert!(is_in_sp_f(x, &p, 5).unwrap(), "{x:?}");
            }
            for x in &gens {
                for y in &gens {
                    assert!(psi(x, y).is_zero());
                }
            }
        }
    }

    #[test]
    fn f_is_isotropic_with_codimension_g() {
        let p = FPoint::new([1, 2, 4]).unwrap();
        let basis: Vec<i64> = (1..=10).filter(|&s| p.in_s(s)).collect();
        for &a in &basis {
            for &b in &basis {
                assert!(symplectic_form(&LaurentPoly::t(-a), &LaurentPoly::t(-b)).is_zero());
            }
        }
        assert_eq!(10 - basis.len(), p.genus());
    }

    #[test]
    fn semigroup_helpers() {
        let p = FPoint::from_semigroup_generators(&[3, 5]).unwrap();
        assert_eq!(p.gaps().collect::<Vec<_>>(), [1, 2, 4, 7]);
        assert!(p.is_semigroup());
        assert!(!FPoint::new([2]).unwrap().is_semigroup());
        assert!(FPoint::new([0]).is_err());
        assert!(FPoint::from_semigroup_generators(&[2, 4]).is_err());
    }

    #[test]
    fn small_runs() {
        let v = VoaConfig::heisenberg(1).unwrap();
        let g0 = FPoint::new([]).unwrap();
        assert_eq!(coinvariants_a(&v, &g0, 0, 0, 0).unwrap().dims, [1]);
        assert_eq!(
            coinvariants_a(&v, &g0, 6, 8, 8).unwrap().dims,
            [1, 0, 0, 0, 0, 0, 0]
        );
        assert_eq!(coinvariants_x(&v, &g0, 3, 4, 4).unwrap().dims[0], 1);
        assert_eq!(
            coinvariants_a(&v, &genus_one(), 4, 6, 6).unwrap().dims,
            [1, 1, 1, 1, 1]
        );
        assert!(coinvariants_a(&v, &g0, 5, 4, 4).is_err());
    }

    #[test]
    fn stabilize_protocol() {
        let v = VoaConfig::heisenberg(1).unwrap();
        let g0 = FPoint::new([]).unwrap();
        let r = stabilize(
            CoinvKind::A,
            &v,
            &g0,
            4,
            &[(4, 4), (5, 5), (6, 6)],
            Limits::default(),
        )
        .unwrap();
        assert!(r.stabilized);
        assert_eq!(r.m, 5);
        assert!(stabilize(
            CoinvKind::A,
            &v,
            &g0,
            4,
            &[(5, 5), (5, 5)],
            Limits::default()
        )
        .is_err());
        let tiny = Limits {
            max_relations: Some(3),
        };
        let r = stabilize(CoinvKind::A, &v, &g0, 4, &[(4, 4), (5, 5)], tiny).unwrap();
        assert!(!r.stabilized);
    }

    #[test]
    fn report_json_shape() {
        let v = VoaConfig::heisenberg(1).unwrap();
        let r = coinvariants_a(&v, &genus_one(), 1, 2, 2).unwrap();
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(
            s,
            r#"{"gaps":[1],"rank":1,"N":1,"M":2,"W":2,"dims":[1,1],"stabilized":false,"generators":4}"#
        );
    }
}
