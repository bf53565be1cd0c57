use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{LinalgError, Rat};

/// A dense row-major matrix of exact rationals.
///
/// Zero-row and zero-column shapes are legal and common: a dimension-0 space
/// is the zero object.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QMat {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

/// A based set, recorded by its number of non-basepoint elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BasedSet {
    points: usize,
}

impl BasedSet {
    /// A based set with `points` elements besides the basepoint.
    pub fn with_points(points: usize) -> BasedSet {
        BasedSet { points }
    }

    /// A based set of total cardinality `n` (basepoint included). `n` must be at least 1.
    pub fn with_cardinality(n: usize) -> BasedSet {
        assert!(n >= 1, "a based set contains its basepoint");
        BasedSet { points: n - 1 }
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn cardinality(&self) -> usize {
        self.points + 1
    }
}

impl QMat {
    pub fn zeros(rows: usize, cols: usize) -> QMat {
        QMat { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> QMat {
        let mut m = QMat::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Rat::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<QMat, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(LinalgError::Ragged { expected: c, found: bad.len() });
        }
        Ok(QMat { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Rat>) -> Result<QMat, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::Ragged { expected: rows * cols, found: data.len() });
        }
        Ok(QMat { rows, cols, data })
    }

    /// Convenience constructor from integer rows; panics on ragged input.
    pub fn from_ints<const C: usize>(rows: &[[i64; C]]) -> QMat {
        QMat {
            rows: rows.len(),
            cols: C,
            data: rows.iter().flat_map(|r| r.iter().map(|&v| Rat::from_int(v))).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rat {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rat) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rat] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Rat::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| {
                    let v = self.get(r, c);
                    if r == c {
                        v.is_one()
                    } else {
                        v.is_zero()
                    }
                })
            })
    }

    pub fn transpose(&self) -> QMat {
        let mut t = QMat::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let v = self.get(r, c);
                if !v.is_zero() {
                    t.set(c, r, v.clone());
                }
            }
        }
        t
    }

    pub fn scale(&self, s: &Rat) -> QMat {
        QMat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| v * s).collect() }
    }

    pub fn checked_mul(&self, rhs: &QMat) -> Result<QMat, LinalgError> {
        if self.cols != rhs.rows {
            return Err(LinalgError::DimensionMismatch {
                op: "multiply",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        Ok(self.mul_scaled(rhs).unwrap_or_else(|| self.mul_scaled_big(rhs)))
    }

    /// Entry-by-entry rational arithmetic, the reference for the scaled paths.
    #[cfg(test)]
    fn mul_generic(&self, rhs: &QMat) -> QMat {
        let mut out = QMat::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for c in 0..rhs.cols {
                let v = (0..self.cols).fold(Rat::zero(), |acc, k| &acc + &(self.get(r, k) * rhs.get(k, c)));
                out.set(r, c, v);
            }
        }
        out
    }

    /// The product computed on integers: each row of `self` and column of
    /// `rhs` is scaled to a common denominator, so every entry is reduced
    /// once. `None` if some intermediate leaves `i64`/`i128`.
    fn mul_scaled(&self, rhs: &QMat) -> Option<QMat> {
        let lhs_rows: Vec<(Vec<(usize, i64)>, i64)> =
            (0..self.rows).map(|r| scaled(self.row(r).iter())).collect::<Option<_>>()?;
        let rhs_cols: Vec<(Vec<i64>, i64)> = (0..rhs.cols)
            .map(|c| {
                let (entries, den) = scaled((0..rhs.rows).map(|k| rhs.get(k, c)))?;
                let mut dense = vec![0; rhs.rows];
                for (k, v) in entries {
                    dense[k] = v;
                }
                Some((dense, den))
            })
            .collect::<Option<_>>()?;
        let mut data = Vec::with_capacity(self.rows * rhs.cols);
        for (row, den_r) in &lhs_rows {
            for (col, den_c) in &rhs_cols {
                let mut sum: i128 = 0;
                for &(k, a) in row {
                    sum = sum.checked_add(a as i128 * col[k] as i128)?;
                }
                data.push(if sum == 0 { Rat::zero() } else { Rat::from_i128(sum, *den_r as i128 * *den_c as i128) });
            }
        }
        Some(QMat { rows: self.rows, cols: rhs.cols, data })
    }

    /// As [`QMat::mul_scaled`] with arbitrary-precision integers.
    fn mul_scaled_big(&self, rhs: &QMat) -> QMat {
        let lhs_rows: Vec<_> = (0..self.rows).map(|r| scaled_big(self.row(r).iter())).collect();
        let rhs_cols: Vec<(Vec<BigInt>, BigInt)> = (0..rhs.cols)
            .map(|c| {
                let (entries, den) = scaled_big((0..rhs.rows).map(|k| rhs.get(k, c)));
                let mut dense = vec![BigInt::zero(); rhs.rows];
                for (k, v) in entries {
                    dense[k] = v;
                }
                (dense, den)
            })
            .collect();
        let mut data = Vec::with_capacity(self.rows * rhs.cols);
        for (row, den_r) in &lhs_rows {
            for (col, den_c) in &rhs_cols {
                let mut sum = BigInt::zero();
                for (k, a) in row {
                    if !col[*k].is_zero() {
                        sum += a * &col[*k];
                    }
                }
                data.push(if sum.is_zero() {
                    Rat::zero()
                } else {
                    Rat::from(BigRational::new(sum, den_r * den_c))
                });
            }
        }
        QMat { rows: self.rows, cols: rhs.cols, data }
    }

    fn zip_with(&self, rhs: &QMat, op: &'static str, f: impl Fn(&Rat, &Rat) -> Rat) -> Result<QMat, LinalgError> {
        if self.shape() != rhs.shape() {
            return Err(LinalgError::DimensionMismatch { op, left: self.shape(), right: rhs.shape() });
        }
        Ok(QMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn checked_add(&self, rhs: &QMat) -> Result<QMat, LinalgError> {
        self.zip_with(rhs, "add", |a, b| a + b)
    }

    pub fn checked_sub(&self, rhs: &QMat) -> Result<QMat, LinalgError> {
        self.zip_with(rhs, "subtract", |a, b| a - b)
    }

    /// The submatrix on the given rows (in order), all columns.
    pub fn select_rows(&self, rows: &[usize]) -> QMat {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            data.extend_from_slice(self.row(r));
        }
        QMat { rows: rows.len(), cols: self.cols, data }
    }

    /// The submatrix on the given columns (in order), all rows.
    pub fn select_cols(&self, cols: &[usize]) -> QMat {
        let mut data = Vec::with_capacity(cols.len() * self.rows);
        for r in 0..self.rows {
            for &c in cols {
                data.push(self.get(r, c).clone());
            }
        }
        QMat { rows: self.rows, cols: cols.len(), data }
    }

    pub fn block(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> QMat {
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for r in rows.clone() {
            data.extend_from_slice(&self.row(r)[cols.clone()]);
        }
        QMat { rows: rows.len(), cols: cols.len(), data }
    }

    /// Writes `m` into `self` with its top-left corner at `(r0, c0)`.
    pub fn put(&mut self, r0: usize, c0: usize, m: &QMat) {
        assert!(r0 + m.rows <= self.rows && c0 + m.cols <= self.cols, "block out of range");
        for r in 0..m.rows {
            for c in 0..m.cols {
                self.set(r0 + r, c0 + c, m.get(r, c).clone());
            }
        }
    }

    pub fn hstack(parts: &[QMat], rows: usize) -> Result<QMat, LinalgError> {
        let grid = vec![parts.to_vec()];
        if parts.is_empty() {
            return Ok(QMat::zeros(rows, 0));
        }
        QMat::block_assemble(&grid)
    }

    pub fn vstack(parts: &[QMat], cols: usize) -> Result<QMat, LinalgError> {
        if parts.is_empty() {
            return Ok(QMat::zeros(0, cols));
        }
        if let Some(bad) = parts.iter().find(|p| p.cols != cols) {
            return Err(LinalgError::DimensionMismatch {
                op: "vstack",
                left: (0, cols),
                right: bad.shape(),
            });
        }
        let rows = parts.iter().map(|p| p.rows).sum();
        let mut data = Vec::with_capacity(rows * cols);
        for p in parts {
            data.extend_from_slice(&p.data);
        }
        Ok(QMat { rows, cols, data })
    }

    /// Assembles a grid of blocks. Every block in a grid row must share a row
    /// count, and every block in a grid column must share a column count.
    pub fn block_assemble(grid: &[Vec<QMat>]) -> Result<QMat, LinalgError> {
        if grid.is_empty() {
            return Ok(QMat::zeros(0, 0));
        }
        let width = grid[0].len();
        if let Some(row) = grid.iter().find(|row| row.len() != width) {
            return Err(LinalgError::Ragged { expected: width, found: row.len() });
        }
        let row_heights: Vec<usize> = grid.iter().map(|row| row.first().map_or(0, |b| b.rows)).collect();
        let col_widths: Vec<usize> = (0..width).map(|j| grid[0][j].cols).collect();
        for (i, row) in grid.iter().enumerate() {
            for (j, b) in row.iter().enumerate() {
                if b.rows != row_heights[i] || b.cols != col_widths[j] {
                    return Err(LinalgError::DimensionMismatch {
                        op: "block_assemble",
                        left: (row_heights[i], col_widths[j]),
                        right: b.shape(),
                    });
                }
            }
        }
        let total_rows = row_heights.iter().sum();
        let total_cols = col_widths.iter().sum();
        let mut out = QMat::zeros(total_rows, total_cols);
        let mut r0 = 0;
        for (i, row) in grid.iter().enumerate() {
            let mut c0 = 0;
            for (j, b) in row.iter().enumerate() {
                out.put(r0, c0, b);
                c0 += col_widths[j];
            }
            r0 += row_heights[i];
        }
        Ok(out)
    }

    /// Block-diagonal sum.
    pub fn direct_sum(parts: &[QMat]) -> QMat {
        let rows = parts.iter().map(|p| p.rows).sum();
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut out = QMat::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for p in parts {
            out.put(r0, c0, p);
            r0 += p.rows;
            c0 += p.cols;
        }
        out
    }

    /// One copy of the map per non-basepoint element of `s`; the basepoint
    /// contributes the zero space.
    pub fn tensor_with_based_set(&self, s: BasedSet) -> QMat {
        QMat::direct_sum(&vec![self.clone(); s.points()])
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &QMat) -> QMat {
        let mut out = QMat::zeros(self.rows * rhs.rows, self.cols * rhs.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let a = self.get(r, c);
                if a.is_zero() {
                    continue;
                }
                out.put(r * rhs.rows, c * rhs.cols, &rhs.scale(a));
            }
        }
        out
    }
}

impl Mul for &QMat {
    type Output = QMat;
    /// Panics on a shape mismatch; use [`QMat::checked_mul`] to recover.
    fn mul(self, rhs: &QMat) -> QMat {
        self.checked_mul(rhs).expect("matrix product shape mismatch")
    }
}

impl Add for &QMat {
    type Output = QMat;
    fn add(self, rhs: &QMat) -> QMat {
        self.checked_add(rhs).expect("matrix sum shape mismatch")
    }
}

impl Sub for &QMat {
    type Output = QMat;
    fn sub(self, rhs: &QMat) -> QMat {
        self.checked_sub(rhs).expect("matrix difference shape mismatch")
    }
}

impl Neg for &QMat {
    type Output = QMat;
    fn neg(self) -> QMat {
        self.scale(&Rat::from_int(-1))
    }
}

impl fmt::Debug for QMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMat {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Nonzero entries as integers over a common denominator, if everything
/// fits in an `i64`.
fn scaled<'a>(values: impl Iterator<Item = &'a Rat> + Clone) -> Option<(Vec<(usize, i64)>, i64)> {
    let mut den: i64 = 1;
    for v in values.clone() {
        let (_, d) = v.as_small()?;
        den = den.checked_mul(d / gcd(den, d))?;
    }
    let mut out = Vec::new();
    for (k, v) in values.enumerate() {
        let (n, d) = v.as_small()?;
        if n != 0 {
            out.push((k, n.checked_mul(den / d)?));
        }
    }
    Some((out, den))
}

fn scaled_big<'a>(values: impl Iterator<Item = &'a Rat> + Clone) -> (Vec<(usize, BigInt)>, BigInt) {
    let den = values.clone().filter(|v| !v.is_zero()).fold(BigInt::one(), |acc, v| acc.lcm(&v.denom()));
    let out = values.enumerate().filter(|(_, v)| !v.is_zero()).map(|(k, v)| (k, v.numer() * (&den / v.denom()))).collect();
    (out, den)
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat() -> impl Strategy<Value = Rat> {
        prop_oneof![
            3 => Just(Rat::zero()),
            3 => (-5i64..=5, 1i64..=6).prop_map(|(n, d)| Rat::new(n, d)),
            1 => (any::<i64>(), 1i64..=i64::MAX).prop_map(|(n, d)| Rat::new(n, d)),
        ]
    }

    proptest! {
        #[test]
        fn integer_product_matches_rational_product(
            (r, k, c) in (0usize..5, 0usize..5, 0usize..5),
            entries in prop::collection::vec(rat(), 50),
        ) {
            let a = QMat::from_vec(r, k, entries[..r * k].to_vec()).unwrap();
            let b = QMat::from_vec(k, c, entries[25..25 + k * c].to_vec()).unwrap();
            prop_assert_eq!(a.checked_mul(&b).unwrap(), a.mul_generic(&b));
            prop_assert_eq!(a.mul_scaled_big(&b), a.mul_generic(&b));
        }
    }

    #[test]
    fn tensor_with_basepoint_only_is_zero_dimensional() {
        let m = QMat::identity(3).tensor_with_based_set(BasedSet::with_cardinality(1));
        assert_eq!(m.shape(), (0, 0));
    }

    #[test]
    fn tensor_q2_with_three_element_based_set() {
        let m = QMat::identity(2).tensor_with_based_set(BasedSet::with_cardinality(3));
        assert_eq!(m.shape(), (4, 4));
        assert!(m.is_identity());
    }

    #[test]
    fn block_assemble_checks_shapes() {
        let a = QMat::identity(2);
        let b = QMat::zeros(2, 1);
        let c = QMat::zeros(1, 2);
        let d = QMat::identity(1);
        let m = QMat::block_assemble(&[vec![a.clone(), b.clone()], vec![c.clone(), d]]).unwrap();
        assert!(m.is_identity());
        let err = QMat::block_assemble(&[vec![a, b], vec![c.clone(), c]]);
        assert!(matches!(err, Err(LinalgError::DimensionMismatch { .. })));
    }

    #[test]
    fn multiply_with_empty_inner_dimension() {
        let a = QMat::zeros(2, 0);
        let b = QMat::zeros(0, 3);
        assert_eq!((&a * &b), QMat::zeros(2, 3));
        assert!(QMat::zeros(2, 1).checked_mul(&QMat::zeros(2, 1)).is_err());
    }
}
