use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{QMat, Rat};

/// A row multiplied by the least common denominator of its entries.
fn integer_row(row: &[Rat]) -> Vec<BigInt> {
    let den = row.iter().filter(|v| !v.is_zero()).fold(BigInt::one(), |acc, v| acc.lcm(&v.denom()));
    row.iter().map(|v| if v.is_zero() { BigInt::zero() } else { v.numer() * (&den / v.denom()) }).collect()
}

/// Reduced row echelon form of a matrix together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    reduced: QMat,
    pivots: Vec<usize>,
}

impl Echelon {
    /// Fraction-free Gauss-Jordan elimination (Bareiss) on the rows scaled
    /// to integers. Every division is exact, entries stay bounded by minors
    /// of the input, and at the end each pivot equals the last one, so
    /// dividing by it gives the reduced form.
    pub fn new(m: &QMat) -> Echelon {
        let (rows, cols) = m.shape();
        let mut a: Vec<Vec<BigInt>> = (0..rows).map(|r| integer_row(m.row(r))).collect();
        let mut pivots = Vec::new();
        let mut prev = BigInt::one();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(r, p);
            let (head, tail) = a.split_at_mut(r);
            let (pivot_row, tail) = tail.split_first_mut().expect("row r exists");
            let pivot = pivot_row[c].clone();
            for row in head.iter_mut().chain(tail.iter_mut()) {
                let factor = std::mem::take(&mut row[c]);
                for j in (0..cols).filter(|&j| j != c) {
                    let mut v = &pivot * &row[j];
                    if !factor.is_zero() && !pivot_row[j].is_zero() {
                        v -= &factor * &pivot_row[j];
                    }
                    row[j] = if prev.is_one() { v } else { v / &prev };
                }
            }
            prev = pivot;
            pivots.push(c);
            r += 1;
        }
        let mut reduced = QMat::zeros(rows, cols);
        for (i, row) in a.iter().enumerate().take(r) {
            for (j, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    reduced.set(i, j, Rat::from(BigRational::new(v.clone(), prev.clone())));
                }
            }
        }
        Echelon { reduced, pivots }
    }

    pub fn reduced(&self) -> &QMat {
        &self.reduced
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Columns without a pivot, ascending.
    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.reduced.cols()];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.reduced.cols()).filter(|&c| !is_pivot[c]).collect()
    }

    /// A basis of the null space, one column per free variable.
    pub fn kernel_basis(&self) -> QMat {
        let cols = self.reduced.cols();
        let free = self.free_columns();
        let mut k = QMat::zeros(cols, free.len());
        for (n, &f) in free.iter().enumerate() {
            k.set(f, n, Rat::one());
            for (row, &p) in self.pivots.iter().enumerate() {
                let v = self.reduced.get(row, f);
                if !v.is_zero() {
                    k.set(p, n, -v);
                }
            }
        }
        k
    }
}

/// Everything elimination tells us about one matrix.
#[derive(Clone, Debug)]
pub struct RrefSummary {
    pub rank: usize,
    /// Columns span the kernel.
    pub kernel: QMat,
    /// Columns span the image; they are the pivot columns of the input.
    pub image: QMat,
    echelon: Echelon,
    source: QMat,
}

impl RrefSummary {
    pub fn echelon(&self) -> &Echelon {
        &self.echelon
    }

    /// Solves `A x = b` exactly; `None` if inconsistent.
    pub fn solve(&self, b: &QMat) -> Option<QMat> {
        solve(&self.source, b)
    }
}

pub fn rref_kernel_image(m: &QMat) -> RrefSummary {
    let echelon = Echelon::new(m);
    let kernel = echelon.kernel_basis();
    let image = m.select_cols(echelon.pivots());
    RrefSummary { rank: echelon.rank(), kernel, image, echelon, source: m.clone() }
}

/// A kernel basis in which every vector of the kernel is determined by its
/// entries at the free columns: `basis.select_rows(&free)` is the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Kernel {
    pub basis: QMat,
    pub free: Vec<usize>,
}

impl Kernel {
    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    /// Coordinates of vectors (columns of `v`) that lie in the kernel.
    pub fn coordinates(&self, v: &QMat) -> QMat {
        v.select_rows(&self.free)
    }
}

pub fn kernel_with_coordinates(m: &QMat) -> Kernel {
    let e = Echelon::new(m);
    Kernel { basis: e.kernel_basis(), free: e.free_columns() }
}

pub fn rank(m: &QMat) -> usize {
    Echelon::new(m).rank()
}

pub fn kernel(m: &QMat) -> QMat {
    Echelon::new(m).kernel_basis()
}

/// Solves `A X = B` column by column. Among all solutions the one with zero
/// free variables is returned. `None` if some column is inconsistent.
pub fn solve(a: &QMat, b: &QMat) -> Option<QMat> {
    assert_eq!(a.rows(), b.rows(), "solve: row mismatch");
    let n = a.cols();
    let aug = QMat::hstack(&[a.clone(), b.clone()], a.rows()).expect("row counts agree");
    let e = Echelon::new(&aug);
    if e.pivots().iter().any(|&p| p >= n) {
        return None;
    }
    let mut x = QMat::zeros(n, b.cols());
    for (row, &p) in e.pivots().iter().enumerate() {
        for c in 0..b.cols() {
            let v = e.reduced().get(row, n + c);
            if !v.is_zero() {
                x.set(p, c, v.clone());
            }
        }
    }
    Some(x)
}

/// True iff `m` is square of full rank.
pub fn is_isomorphism(m: &QMat) -> bool {
    m.is_square() && rank(m) == m.rows()
}

pub fn inverse(m: &QMat) -> Option<QMat> {
    if !m.is_square() {
        return None;
    }
    let x = solve(m, &QMat::identity(m.rows()))?;
    Some(x)
}

/// The quotient of the codomain of `m` by its column space.
///
/// `proj` maps the codomain onto the quotient and kills the columns of `m`;
/// `section` is a right inverse of `proj` choosing standard basis vectors
/// complementary to the image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quotient {
    pub proj: QMat,
    pub section: QMat,
}

impl Quotient {
    pub fn dim(&self) -> usize {
        self.proj.rows()
    }
}

pub fn cokernel(m: &QMat) -> Quotient {
    cokernel_of_rows(&m.transpose())
}

/// Like [`cokernel`], but the spanning vectors are given as rows, which
/// avoids a transpose when they are produced row by row.
pub fn cokernel_of_rows(relations: &QMat) -> Quotient {
    let ambient = relations.cols();
    let e = Echelon::new(relations);
    let free = e.free_columns();
    let mut proj = QMat::zeros(free.len(), ambient);
    let mut section = QMat::zeros(ambient, free.len());
    for (q, &f) in free.iter().enumerate() {
        proj.set(q, f, Rat::one());
        section.set(f, q, Rat::one());
        for (row, &p) in e.pivots().iter().enumerate() {
            let v = e.reduced().get(row, f);
            if !v.is_zero() {
                proj.set(q, p, -v);
            }
        }
    }
    Quotient { proj, section }
}
