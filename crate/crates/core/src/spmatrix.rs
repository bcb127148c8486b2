//! Window truncations of symplectic endomorphisms and the membership predicates
//! for `sp(H')`, `sp+(H')` and the stabilizers `sp_F(H')`.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::coinv::FPoint;
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::quad::QuadraticElement;
use crate::scalar::{int, Rational};

/// Banded matrix on the basis `t^j`, `j ∈ [-W, W] \ {0}`. Entry `(row, col)` is the
/// coefficient of `t^row` in the image of `t^col`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpMatrix {
    window: i64,
    bandwidth: i64,
    entries: BTreeMap<(i64, i64), Rational>,
}

fn window_indices(w: i64) -> impl Iterator<Item = i64> {
    (-w..=w).filter(|&j| j != 0)
}

impl SpMatrix {
    pub fn from_entries<I>(window: i64, entries: I) -> Self
    where
        I: IntoIterator<Item = ((i64, i64), Rational)>,
    {
        let mut map = BTreeMap::new();
        for ((r, c), v) in entries {
            if v.is_zero() || r == 0 || c == 0 || r.abs() > window || c.abs() > window {
                continue;
            }
            map.insert((r, c), v);
        }
        let bandwidth = map.keys().map(|(r, c)| (r - c).abs()).max().unwrap_or(0);
        Self {
            window,
            bandwidth,
            entries: map,
        }
    }

    pub fn window(&self) -> i64 {
        self.window
    }

    pub fn bandwidth(&self) -> i64 {
        self.bandwidth
    }

    pub fn get(&self, row: i64, col: i64) -> Rational {
        self.entries
            .get(&(row, col))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = ((i64, i64), &Rational)> + '_ {
        self.entries.iter().map(|(k, v)| (*k, v))
    }

    /// Columns whose full image is visible inside the window.
    fn complete_column(&self, j: i64) -> bool {
        j.abs() + self.bandwidth <= self.window
    }

    /// `XY - YX` computed inside the window.
    pub fn commutator(&self, other: &Self) -> Self {
        let w = self.window.min(other.window);
        let prod = |a: &Self, b: &Self| {
            let mut out: BTreeMap<(i64, i64), Rational> = BTreeMap::new();
            for (&(k, c), bv) in &b.entries {
                for r in window_indices(w) {
                    let av = a.get(r, k);
                    if !av.is_zero() {
                        *out.entry((r, c)).or_insert_with(Rational::zero) += av * bv;
                    }
                }
            }
            out
        };
        let mut out = prod(self, other);
        for (k, v) in prod(other, self) {
            *out.entry(k).or_insert_with(Rational::zero) -= v;
        }
        Self::from_entries(w, out)
    }

    /// Equality on rows and columns at distance more than `margin` from the window edge.
    pub fn eq_on_interior(&self, other: &Self, margin: i64) -> bool {
        let inner = self.window.min(other.window) - margin;
        window_indices(inner)
            .all(|r| window_indices(inner).all(|c| self.get(r, c) == other.get(r, c)))
    }

    /// `<Xa, b> + <a, Xb> = 0` on all pairs of window basis vectors whose images are complete.
    pub fn is_symplectic(&self) -> bool {
        // <X t^j, t^k> = -k X[-k, j] and <t^j, X t^k> = j X[-j, k].
        window_indices(self.window)
            .filter(|&j| self.complete_column(j))
            .all(|j| {
                window_indices(self.window)
                    .filter(|&k| self.complete_column(k))
                    .all(|k| {
                        int(-k) * self.get(-k, j) + int(j) * self.get(-j, k) == Rational::zero()
                    })
            })
    }

    /// The trace cocycle restricted to the window.
    pub fn psi(&self, other: &Self) -> Rational {
        let half = |a: &Self, b: &Self| {
            let mut acc = Rational::zero();
            for (&(m, k), bv) in &b.entries {
                if k > 0 && m < 0 {
                    acc += bv * a.get(k, m);
                }
            }
            acc
        };
        half(self, other) - half(other, self)
    }
}

fn require_pure_quadratic(a: &QuadraticElement) -> Result<()> {
    if !a.central_part().is_zero() {
        return Err(Error::UnexpectedPart("central"));
    }
    if !a.linear_part().is_zero() {
        return Err(Error::UnexpectedPart("linear"));
    }
    Ok(())
}

/// Matrix of the action `k -> <f,k> g + <g,k> f` restricted to the window.
pub fn quad_to_endo(a: &QuadraticElement, window: i64) -> Result<SpMatrix> {
    require_pure_quadratic(a)?;
    let mut entries = Vec::new();
    for col in window_indices(window) {
        for (row, v) in a.act(&LaurentPoly::t(col)).terms() {
            entries.push(((row, col), v.clone()));
        }
    }
    let mut m = SpMatrix::from_entries(window, entries);
    m.bandwidth = m.bandwidth.max(a.bandwidth());
    Ok(m)
}

pub fn is_in_sp(a: &QuadraticElement, window: i64) -> Result<bool> {
    Ok(quad_to_endo(a, window)?.is_symplectic())
}

/// Additionally checks `X(H'_+) ⊆ H'_+` on the window, using exact images.
pub fn is_in_sp_plus(a: &QuadraticElement, window: i64) -> Result<bool> {
    if !is_in_sp(a, window)? {
        return Ok(false);
    }
    Ok((1..=window).all(|k| {
        a.act(&LaurentPoly::t(k))
            .min_exponent()
            .is_none_or(|m| m > 0)
    }))
}

/// `X(F^⊥) ⊆ F` on the window basis of `F^⊥`, using exact images.
pub fn is_in_sp_f(a: &QuadraticElement, point: &FPoint, window: i64) -> Result<bool> {
    require_pure_quadratic(a)?;
    Ok(point
        .fperp_basis(window)
        .iter()
        .all(|v| point.contains(&a.act(v))))
}
