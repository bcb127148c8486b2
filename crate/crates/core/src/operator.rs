//! Banded operators on H = Q((t)) and the trace cocycle
//! `psi(A, B) = Tr(p+ A p- B p+ - p+ B p- A p+)`.
//!
//! An operator is stored diagonal by diagonal: `diag[d](k)` is the coefficient of
//! `t^(k+d)` in `A(t^k)`. Each diagonal is an [`IndexSeries`], so derivations and
//! the infinite oscillator sums are represented exactly. The trace only ever
//! touches finitely many basis vectors, so `psi` is a finite sum.

use std::collections::BTreeMap;
use std::ops::Add;

use num_traits::Zero;

use crate::laurent::LaurentPoly;
use crate::scalar::{int, Rational};
use crate::series::{IndexSeries, Poly};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HOperator {
    diags: BTreeMap<i64, IndexSeries>,
}

impl HOperator {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_diagonals<I: IntoIterator<Item = (i64, IndexSeries)>>(diags: I) -> Self {
        let mut op = Self::zero();
        for (d, s) in diags {
            op.add_diagonal(d, &s);
        }
        op
    }

    pub fn add_diagonal(&mut self, offset: i64, series: &IndexSeries) {
        let sum = match self.diags.get(&offset) {
            Some(cur) => cur + series,
            None => series.clone(),
        };
        if sum.is_zero() {
            self.diags.remove(&offset);
        } else {
            self.diags.insert(offset, sum);
        }
    }

    /// The Witt generator `L_p = -t^(p+1) d/dt` acting on all of H.
    pub fn derivation(p: i64) -> Self {
        Self::from_diagonals([(p, IndexSeries::from_poly(Poly::new(vec![int(0), int(-1)])))])
    }

    /// Multiplication by `f`.
    pub fn multiplication(f: &LaurentPoly) -> Self {
        Self::from_diagonals(
            f.terms()
                .map(|(m, c)| (m, IndexSeries::from_poly(Poly::constant(c.clone())))),
        )
    }

    pub fn diagonals(&self) -> impl Iterator<Item = (i64, &IndexSeries)> + '_ {
        self.diags.iter().map(|(d, s)| (*d, s))
    }

    pub fn entry(&self, row: i64, col: i64) -> Rational {
        self.diags
            .get(&(row - col))
            .map(|s| s.value(col))
            .unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_diagonals(self.diags.iter().map(|(d, s)| (*d, s.scale(c))))
    }

    pub fn apply(&self, f: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (k, fk) in f.terms() {
            for (d, s) in &self.diags {
                out.add_term(k + d, fk * s.value(k));
            }
        }
        out
    }
}

impl Add for &HOperator {
    type Output = HOperator;
    fn add(self, rhs: &HOperator) -> HOperator {
        let mut out = self.clone();
        for (d, s) in rhs.diagonals() {
            out.add_diagonal(d, s);
        }
        out
    }
}

/// The trace cocycle on banded operators of H.
pub fn psi(a: &HOperator, b: &HOperator) -> Rational {
    half_trace(a, b) - half_trace(b, a)
}

/// `Tr(p+ A p- B p+)`: start at `t^k` with `k >= 0`, let B push it below zero, let A
/// bring it back to `t^k`. Only diagonals with opposite offsets contribute.
fn half_trace(a: &HOperator, b: &HOperator) -> Rational {
    let mut acc = Rational::zero();
    for (e, b_diag) in b.diagonals() {
        if e >= 0 {
            continue;
        }
        let Some(a_diag) = a.diags.get(&-e) else {
            continue;
        };
        for k in 0..-e {
            acc += b_diag.value(k) * a_diag.value(k + e);
        }
    }
    acc
}
