//! Exact linear algebra over the rationals: incremental sparse echelon forms for
//! relation spaces and a small dense solver.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::scalar::Rational;

/// Sparse row: column index -> nonzero entry.
pub type SparseRow = BTreeMap<usize, Rational>;

/// Incrementally built reduced echelon basis of a row space. Each stored row has a
/// leading entry 1 at its pivot column.
#[derive(Clone, Debug, Default)]
pub struct EchelonBasis {
    rows: BTreeMap<usize, SparseRow>,
}

impl EchelonBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    /// Reduces `row` against the basis, returning the remainder.
    pub fn reduce(&self, mut row: SparseRow) -> SparseRow {
        let mut cursor = 0usize;
        loop {
            let next = row
                .range(cursor..)
                .map(|(c, _)| *c)
                .find(|c| self.rows.contains_key(c));
            let Some(col) = next else { break };
            let factor = row.get(&col).cloned().expect("present");
            let pivot_row = &self.rows[&col];
            for (c, v) in pivot_row {
                let entry = row.entry(*c).or_insert_with(Rational::zero);
                *entry -= &factor * v;
                if entry.is_zero() {
                    row.remove(c);
                }
            }
            cursor = col + 1;
        }
        row
    }

    /// Adds a row to the span. Returns true if the rank grew.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        let rem = self.reduce(row);
        let Some((&pivot, lead)) = rem.iter().next() else {
            return false;
        };
        let inv = lead.recip();
        let normalized: SparseRow = rem.iter().map(|(c, v)| (*c, v * &inv)).collect();
        self.rows.insert(pivot, normalized);
        true
    }

    pub fn contains(&self, row: SparseRow) -> bool {
        self.reduce(row).is_empty()
    }
}

/// Rank of a dense matrix.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut basis = EchelonBasis::new();
    for r in rows {
        let sparse: SparseRow = r
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, v)| (i, v.clone()))
            .collect();
        basis.insert(sparse);
    }
    basis.rank()
}

/// Solves the square system `a x = b` exactly; `None` if `a` is singular.
pub fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.len();
    assert!(
        a.iter().all(|r| r.len() == n) && b.len() == n,
        "square system expected"
    );
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            r.iter()
                .cloned()
                .chain(std::iter::once(bi.clone()))
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        let inv = m[col][col].recip();
        for v in m[col].iter_mut() {
            *v *= &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let pivot_row = m[col].clone();
                for (x, y) in m[r].iter_mut().zip(&pivot_row).skip(col) {
                    *x -= &f * y;
                }
            }
        }
    }
    debug_assert!(m.iter().enumerate().all(|(i, r)| r[i].is_one()));
    Some(m.into_iter().map(|r| r[n].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    #[test]
    fn echelon_rank_and_membership() {
        let mut basis = EchelonBasis::new();
        let r1: SparseRow = [(0, int(1)), (2, int(2))].into_iter().collect();
        let r2: SparseRow = [(0, int(2)), (2, int(4))].into_iter().collect();
        let r3: SparseRow = [(1, int(3))].into_iter().collect();
        assert!(basis.insert(r1.clone()));
        assert!(!basis.insert(r2));
        assert!(basis.insert(r3));
        assert_eq!(basis.rank(), 2);
        let combo: SparseRow = [(0, int(1)), (1, int(1)), (2, int(2))]
            .into_iter()
            .collect();
        assert!(basis.contains(combo));
        assert!(!basis.contains([(2, int(1))].into_iter().collect()));
    }

    #[test]
    fn dense_solve() {
        let a = vec![vec![int(2), int(1)], vec![int(1), int(3)]];
        let x = solve(&a, &[int(3), int(5)]).unwrap();
        assert_eq!(x, vec![rat(4, 5), rat(7, 5)]);
        assert!(solve(
            &[vec![int(1), int(2)], vec![int(2), int(4)]],
            &[int(1), int(2)]
        )
        .is_none());
    }
}
