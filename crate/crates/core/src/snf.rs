//! Integer matrices and Smith normal form with unimodular transforms.
//!
//! The reduction picks the minimum-absolute-value nonzero entry as pivot and
//! falls back to gcd-combining row/column operations whenever a pivot fails
//! to divide the rest, which keeps coefficient growth bounded on the
//! desk-scale matrices this crate deals with.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::linalg::Int;

#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Int>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![Int::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Int::one();
        }
        m
    }

    pub fn from_rows(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut m = Self::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c);
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = Int::from(v);
            }
        }
        m
    }

    pub fn diag(entries: &[i64]) -> Self {
        let n = entries.len();
        let mut m = Self::zero(n, n);
        for (i, &v) in entries.iter().enumerate() {
            m[(i, i)] = Int::from(v);
        }
        m
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a * b;
                    out[(i, j)] += prod;
                }
            }
        }
        out
    }

    /// Determinant by fraction-free Gaussian elimination (Bareiss).
    pub fn det(&self) -> Int {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Int::one();
        }
        let mut a = self.clone();
        let mut sign = Int::one();
        let mut prev = Int::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&r| !a[(r, k)].is_zero()) {
                    Some(r) => {
                        a.swap_rows(k, r);
                        sign = -sign;
                    }
                    None => return Int::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[(k, k)] * &a[(i, j)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = num / &prev;
                }
                a[(i, k)] = Int::zero();
            }
            prev = a[(k, k)].clone();
        }
        sign * a[(n - 1, n - 1)].clone()
    }

    fn swap_rows(&mut self, r1: usize, r2: usize) {
        if r1 == r2 {
            return;
        }
        for c in 0..self.cols {
            let i1 = r1 * self.cols + c;
            let i2 = r2 * self.cols + c;
            self.data.swap(i1, i2);
        }
    }

    fn swap_cols(&mut self, c1: usize, c2: usize) {
        if c1 == c2 {
            return;
        }
        for r in 0..self.rows {
            let i1 = r * self.cols + c1;
            let i2 = r * self.cols + c2;
            self.data.swap(i1, i2);
        }
    }

    /// row r1 += q * row r2
    fn add_row(&mut self, r1: usize, r2: usize, q: &Int) {
        if q.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let v = &self[(r2, c)] * q;
            if !v.is_zero() {
                self[(r1, c)] += v;
            }
        }
    }

    /// col c1 += q * col c2
    fn add_col(&mut self, c1: usize, c2: usize, q: &Int) {
        if q.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let v = &self[(r, c2)] * q;
            if !v.is_zero() {
                self[(r, c1)] += v;
            }
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -self[(r, c)].clone();
            self[(r, c)] = v;
        }
    }

    pub fn smith_normal_form(&self) -> SnfResult {
        smith_normal_form(self)
    }
}

impl core::ops::Index<(usize, usize)> for IntMatrix {
    type Output = Int;
    fn index(&self, (r, c): (usize, usize)) -> &Int {
        &self.data[r * self.cols + c]
    }
}

impl core::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Int {
        &mut self.data[r * self.cols + c]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{}]", self.rows, self.cols)?;
        for r in 0..self.rows.min(16) {
            for c in 0..self.cols.min(16) {
                write!(f, "{} ", self[(r, c)])?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// `left * a * right = diag`, with `left`, `right` unimodular and the
/// nonzero diagonal entries forming the divisibility chain
/// `invariant_factors`.
pub struct SnfResult {
    pub left: IntMatrix,
    pub diag: IntMatrix,
    pub right: IntMatrix,
    pub invariant_factors: Vec<Int>,
}

pub fn smith_normal_form(a: &IntMatrix) -> SnfResult {
    let mut d = a.clone();
    let mut left = IntMatrix::identity(a.rows);
    let mut right = IntMatrix::identity(a.cols);
    let n = a.rows.min(a.cols);

    for k in 0..n {
        if !move_min_pivot(&mut d, &mut left, &mut right, k) {
            break; // remaining submatrix is zero
        }
        loop {
            clear_column(&mut d, &mut left, k);
            clear_row(&mut d, &mut right, k);
            if column_cleared(&d, k) && row_cleared(&d, k) {
                // pivot must divide the remaining submatrix
                match find_nondivisible(&d, k) {
                    None => break,
                    Some(r) => {
                        d.add_row(k, r, &Int::one());
                        left.add_row(k, r, &Int::one());
                    }
                }
            }
            if !move_min_pivot(&mut d, &mut left, &mut right, k) {
                break;
            }
        }
        if d[(k, k)].is_negative() {
            d.negate_row(k);
            left.negate_row(k);
        }
    }

    let invariant_factors = (0..n)
        .map(|i| d[(i, i)].clone())
        .filter(|v| !v.is_zero())
        .collect();
    SnfResult { left, diag: d, right, invariant_factors }
}

/// Swap the minimum-absolute-value nonzero entry of the trailing submatrix
/// into position (k, k). Returns false when the submatrix is zero.
fn move_min_pivot(d: &mut IntMatrix, left: &mut IntMatrix, right: &mut IntMatrix, k: usize) -> bool {
    let mut best: Option<(usize, usize)> = None;
    for r in k..d.rows {
        for c in k..d.cols {
            if d[(r, c)].is_zero() {
                continue;
            }
            let better = match best {
                None => true,
                Some((br, bc)) => d[(r, c)].abs() < d[(br, bc)].abs(),
            };
            if better {
                best = Some((r, c));
                if d[(r, c)].abs().is_one() {
                    // can't do better than a unit
                    let (br, bc) = (r, c);
                    d.swap_rows(k, br);
                    left.swap_rows(k, br);
                    d.swap_cols(k, bc);
                    right.swap_cols(k, bc);
                    return true;
                }
            }
        }
    }
    match best {
        None => false,
        Some((br, bc)) => {
            d.swap_rows(k, br);
            left.swap_rows(k, br);
            d.swap_cols(k, bc);
            right.swap_cols(k, bc);
            true
        }
    }
}

/// Reduce every entry below the pivot with row operations (gcd-combining:
/// leaves remainders that a later pass picks up as smaller pivots).
fn clear_column(d: &mut IntMatrix, left: &mut IntMatrix, k: usize) {
    for r in k + 1..d.rows {
        if d[(r, k)].is_zero() {
            continue;
        }
        let q = -div_round(&d[(r, k)], &d[(k, k)]);
        d.add_row(r, k, &q);
        left.add_row(r, k, &q);
    }
}

fn clear_row(d: &mut IntMatrix, right: &mut IntMatrix, k: usize) {
    for c in k + 1..d.cols {
        if d[(k, c)].is_zero() {
            continue;
        }
        let q = -div_round(&d[(k, c)], &d[(k, k)]);
        d.add_col(c, k, &q);
        right.add_col(c, k, &q);
    }
}

fn column_cleared(d: &IntMatrix, k: usize) -> bool {
    (k + 1..d.rows).all(|r| d[(r, k)].is_zero())
}

fn row_cleared(d: &IntMatrix, k: usize) -> bool {
    (k + 1..d.cols).all(|c| d[(k, c)].is_zero())
}

fn find_nondivisible(d: &IntMatrix, k: usize) -> Option<usize> {
    let p = &d[(k, k)];
    for r in k + 1..d.rows {
        for c in k + 1..d.cols {
            if !d[(r, c)].is_zero() && !d[(r, c)].is_multiple_of(p) {
                return Some(r);
            }
        }
    }
    None
}

/// Floor division, matching Euclidean-style remainder shrinking.
fn div_round(a: &Int, b: &Int) -> Int {
    a.div_floor(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;

    fn factors(m: &IntMatrix) -> Vec<Int> {
        m.smith_normal_form().invariant_factors
    }

    #[test]
    fn invariant_factor_examples() {
        assert_eq!(factors(&IntMatrix::diag(&[2, 3])), [int(1), int(6)]);
        assert_eq!(factors(&IntMatrix::from_rows(&[&[1, 1], &[1, -1]])), [int(1), int(2)]);
        assert_eq!(
            factors(&IntMatrix::from_rows(&[&[1, 1, 1], &[1, -1, 0], &[1, 0, -1]])),
            [int(1), int(1), int(3)]
        );
        assert_eq!(factors(&IntMatrix::zero(3, 2)), []);
        assert_eq!(factors(&IntMatrix::identity(3)), [int(1), int(1), int(1)]);
    }

    #[test]
    fn transforms_multiply_out() {
        let m = IntMatrix::from_rows(&[&[2, 4, 4], &[-6, 6, 12], &[10, 4, 16]]);
        let snf = m.smith_normal_form();
        assert_eq!(snf.left.mul(&m).mul(&snf.right), snf.diag);
        assert_eq!(snf.left.det().abs(), int(1));
        assert_eq!(snf.right.det().abs(), int(1));
    }
}
