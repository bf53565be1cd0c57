//! Incremental reduced row echelon form for sparse systems.

use super::{Kernel, QMat, Quotient, Rat};

/// A sparse row, sorted by column, without explicit zeros.
pub type SparseRow = Vec<(usize, Rat)>;

/// The reduced row echelon form of the span of the rows pushed so far.
///
/// Since the reduced form depends only on the row space, pivots and free
/// columns agree with [`super::Echelon`] on the same rows.
#[derive(Clone, Debug)]
pub struct SparseEchelon {
    cols: usize,
    rows: Vec<SparseRow>,
    /// `pivot_row[c]` is the row whose pivot is column `c`.
    pivot_row: Vec<Option<usize>>,
    /// Rows that may have an entry in each column; stale entries are allowed.
    occurs: Vec<Vec<usize>>,
    scratch: Vec<Rat>,
}

fn entry(row: &SparseRow, c: usize) -> Option<&Rat> {
    row.binary_search_by_key(&c, |e| e.0).ok().map(|k| &row[k].1)
}

/// `a - f·b` on sorted sparse rows.
fn sub_mul(a: &SparseRow, f: &Rat, b: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j == b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i == a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            out.push((b[j].0, -&(f * &b[j].1)));
            j += 1;
        } else {
            let v = a[i].1.sub_mul(f, &b[j].1);
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

impl SparseEchelon {
    pub fn new(cols: usize) -> SparseEchelon {
        SparseEchelon {
            cols,
            rows: Vec::new(),
            pivot_row: vec![None; cols],
            occurs: vec![Vec::new(); cols],
            scratch: vec![Rat::zero(); cols],
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds a row given by its nonzero entries, in any column order.
    pub fn push(&mut self, entries: impl IntoIterator<Item = (usize, Rat)>) {
        let mut touched: Vec<usize> = Vec::new();
        for (c, v) in entries {
            assert!(c < self.cols, "column {c} out of range");
            if self.scratch[c].is_zero() {
                touched.push(c);
            }
            self.scratch[c] = &self.scratch[c] + &v;
        }
        touched.sort_unstable();
        touched.dedup();
        // Pivot rows vanish at every other pivot column, so only the row's
        // own entries at pivot columns need clearing.
        let at_pivots: Vec<(usize, usize)> =
            touched.iter().filter_map(|&c| self.pivot_row[c].map(|r| (c, r))).collect();
        for (c, r) in at_pivots {
            let factor = std::mem::take(&mut self.scratch[c]);
            if factor.is_zero() {
                continue;
            }
            for (j, v) in &self.rows[r] {
                if *j == c {
                    continue;
                }
                if self.scratch[*j].is_zero() {
                    touched.push(*j);
                }
                self.scratch[*j] = self.scratch[*j].sub_mul(&factor, v);
            }
        }
        touched.sort_unstable();
        touched.dedup();
        let mut row: SparseRow = Vec::new();
        for c in touched {
            let v = std::mem::take(&mut self.scratch[c]);
            if !v.is_zero() {
                row.push((c, v));
            }
        }
        let Some(&(lead, ref lv)) = row.first() else {
            return;
        };
        let inv = lv.recip();
        for e in &mut row {
            e.1 = &e.1 * &inv;
        }
        let id = self.rows.len();
        for r in std::mem::take(&mut self.occurs[lead]) {
            let Some(factor) = entry(&self.rows[r], lead).cloned() else { continue };
            let updated = sub_mul(&self.rows[r], &factor, &row);
            for &(j, _) in &row {
                if j != lead {
                    self.occurs[j].push(r);
                }
            }
            self.rows[r] = updated;
        }
        for &(j, _) in &row {
            self.occurs[j].push(id);
        }
        self.pivot_row[lead] = Some(id);
        self.rows.push(row);
    }

    /// Columns without a pivot, ascending.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.cols).filter(|&c| self.pivot_row[c].is_none()).collect()
    }

    /// The null space, with the same basis as the dense elimination.
    pub fn kernel(&self) -> Kernel {
        let free = self.free_columns();
        let mut basis = QMat::zeros(self.cols, free.len());
        for (n, &f) in free.iter().enumerate() {
            basis.set(f, n, Rat::one());
            let mut rows = self.occurs[f].clone();
            rows.sort_unstable();
            rows.dedup();
            for r in rows {
                if let Some(v) = entry(&self.rows[r], f) {
                    basis.set(self.rows[r][0].0, n, -v);
                }
            }
        }
        Kernel { basis, free }
    }

    /// The quotient of the ambient space by the span of the rows, as
    /// [`super::cokernel_of_rows`] would give it.
    pub fn quotient(&self) -> Quotient {
        let k = self.kernel();
        Quotient { proj: k.basis.transpose(), section: QMat::identity(self.cols).select_cols(&k.free) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::{cokernel_of_rows, kernel_with_coordinates};
    use proptest::prelude::*;

    fn to_sparse(m: &QMat, r: usize) -> SparseRow {
        m.row(r).iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(c, v)| (c, v.clone())).collect()
    }

    proptest! {
        #[test]
        fn agrees_with_dense_elimination(
            rows in 0usize..9,
            cols in 1usize..9,
            entries in prop::collection::vec(prop_oneof![4 => Just(0i64), 1 => -3i64..=3], 81),
        ) {
            let data = (0..rows * cols).map(|k| Rat::from_int(entries[k])).collect();
            let m = QMat::from_vec(rows, cols, data).unwrap();
            let mut e = SparseEchelon::new(cols);
            for r in 0..rows {
                e.push(to_sparse(&m, r));
            }
            prop_assert_eq!(e.kernel(), kernel_with_coordinates(&m));
            prop_assert_eq!(e.quotient(), cokernel_of_rows(&m));
        }
    }

    #[test]
    fn duplicate_columns_in_a_row_add() {
        let mut e = SparseEchelon::new(2);
        e.push([(0, Rat::one()), (0, Rat::one()), (1, Rat::from_int(-2))]);
        let k = e.kernel();
        assert_eq!(k.free, vec![1]);
        assert_eq!(k.basis, QMat::from_ints(&[[1], [1]]));
    }
}
