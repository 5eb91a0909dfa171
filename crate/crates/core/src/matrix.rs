//! Dense matrices over an exact scalar, row-major.
//!
//! Deliberately small: desk-scale exact linear algebra, no sparsity, no
//! fixed-width fast paths. Integer-specific algorithms live in
//! [`crate::zlinalg`]; field-specific elimination is implemented here for
//! ℚ only.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_traits::{One, Zero};

use crate::{Error, Rat, Result, Scalar};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    entries: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    /// Entry count must equal `rows × cols`.
    pub fn new(rows: usize, cols: usize, entries: Vec<T>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::contract(format!(
                "matrix of shape {rows}×{cols} needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(Matrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        Matrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::contract("ragged rows in matrix literal"));
        }
        Ok(Matrix {
            rows: nrows,
            cols: ncols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |r, c| if r == c { T::one() } else { T::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Matrix::identity(self.rows)
    }

    pub fn row(&self, r: usize) -> Vec<T> {
        (0..self.cols).map(|c| self[(r, c)].clone()).collect()
    }

    pub fn col(&self, c: usize) -> Vec<T> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix::from_fn(self.rows, self.cols, |r, c| f(&self[(r, c)]))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::contract("matrix addition shape mismatch"));
        }
        Ok(Matrix::from_fn(self.rows, self.cols, |r, c| {
            self[(r, c)].clone() + other[(r, c)].clone()
        }))
    }

    pub fn neg(&self) -> Self {
        self.map(|x| T::zero() - x.clone())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::contract(format!(
                "matrix product shape mismatch: {}×{} times {}×{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Matrix::from_fn(self.rows, other.cols, |r, c| {
            let mut acc = T::zero();
            for k in 0..self.cols {
                acc = acc + self[(r, k)].clone() * other[(k, c)].clone();
            }
            acc
        }))
    }

    pub fn mul_vec(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.cols {
            return Err(Error::contract("matrix-vector shape mismatch"));
        }
        Ok((0..self.rows)
            .map(|r| {
                let mut acc = T::zero();
                for c in 0..self.cols {
                    acc = acc + self[(r, c)].clone() * v[c].clone();
                }
                acc
            })
            .collect())
    }

    /// Glue columns of `other` to the right of `self`.
    pub fn hstack(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::contract("hstack row count mismatch"));
        }
        Ok(Matrix::from_fn(
            self.rows,
            self.cols + other.cols,
            |r, c| {
                if c < self.cols {
                    self[(r, c)].clone()
                } else {
                    other[(r, c - self.cols)].clone()
                }
            },
        ))
    }

    pub fn from_cols(rows: usize, cols: Vec<Vec<T>>) -> Result<Self> {
        let ncols = cols.len();
        if cols.iter().any(|c| c.len() != rows) {
            return Err(Error::contract("column length mismatch"));
        }
        Ok(Matrix::from_fn(rows, ncols, |r, c| cols[c][r].clone()))
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Matrix::from_fn(rows.len(), cols.len(), |r, c| {
            self[(rows[r], cols[c])].clone()
        })
    }

    pub fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    pub fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.rows {
            self.entries.swap(r * self.cols + i, r * self.cols + j);
        }
    }

    /// row_i ← row_i + q·row_j
    pub fn add_multiple_of_row(&mut self, i: usize, j: usize, q: &T) {
        for c in 0..self.cols {
            let delta = q.clone() * self[(j, c)].clone();
            self[(i, c)] = self[(i, c)].clone() + delta;
        }
    }

    /// col_i ← col_i + q·col_j
    pub fn add_multiple_of_col(&mut self, i: usize, j: usize, q: &T) {
        for r in 0..self.rows {
            let delta = q.clone() * self[(r, j)].clone();
            self[(r, i)] = self[(r, i)].clone() + delta;
        }
    }

    pub fn negate_row(&mut self, i: usize) {
        for c in 0..self.cols {
            self[(i, c)] = T::zero() - self[(i, c)].clone();
        }
    }

    pub fn negate_col(&mut self, c: usize) {
        for r in 0..self.rows {
            self[(r, c)] = T::zero() - self[(r, c)].clone();
        }
    }

    /// Determinant by fraction-free (Bareiss) elimination. Every division
    /// performed is exact, so this is valid over ℤ as well as over ℚ.
    /// The determinant of the empty matrix is 1.
    pub fn det(&self) -> Result<T> {
        if !self.is_square() {
            return Err(Error::contract("determinant of non-square matrix"));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(T::one());
        }
        let mut m = self.clone();
        let mut sign_flip = false;
        let mut prev = T::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                match (k + 1..n).find(|&r| !m[(r, k)].is_zero()) {
                    Some(r) => {
                        m.swap_rows(k, r);
                        sign_flip = !sign_flip;
                    }
                    None => return Ok(T::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = m[(i, j)].clone() * m[(k, k)].clone()
                        - m[(i, k)].clone() * m[(k, j)].clone();
                    m[(i, j)] = num / prev.clone();
                }
                m[(i, k)] = T::zero();
            }
            prev = m[(k, k)].clone();
        }
        let d = m[(n - 1, n - 1)].clone();
        Ok(if sign_flip { T::zero() - d } else { d })
    }

    pub fn is_unimodular(&self) -> bool {
        self.is_square() && self.det().map(|d| d.abs().is_one()).unwrap_or(false)
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (r, c): (usize, usize)) -> &T {
        assert!(r < self.rows && c < self.cols, "matrix index out of range");
        &self.entries[r * self.cols + c]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut T {
        assert!(r < self.rows && c < self.cols, "matrix index out of range");
        &mut self.entries[r * self.cols + c]
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.entries[r * self.cols + c])?;
            }
        }
        write!(f, "]")
    }
}

/// Outcome of solving a square-free rational linear system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RatSolve {
    Unique(Vec<Rat>),
    NoSolution,
    /// Consistent but underdetermined; carries the solution-space dimension.
    Underdetermined(usize),
}

impl Matrix<Rat> {
    /// Reduced row echelon form; returns (rref, pivot columns).
    pub fn rref(&self) -> (Matrix<Rat>, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut pr = 0;
        for pc in 0..m.cols {
            if pr == m.rows {
                break;
            }
            let Some(nz) = (pr..m.rows).find(|&r| !m[(r, pc)].is_zero()) else {
                continue;
            };
            m.swap_rows(pr, nz);
            let inv = Rat::one() / m[(pr, pc)].clone();
            for c in pc..m.cols {
                m[(pr, c)] = m[(pr, c)].clone() * inv.clone();
            }
            for r in 0..m.rows {
                if r != pr && !m[(r, pc)].is_zero() {
                    let q = m[(r, pc)].clone();
                    for c in pc..m.cols {
                        let delta = q.clone() * m[(pr, c)].clone();
                        m[(r, c)] = m[(r, c)].clone() - delta;
                    }
                }
            }
            pivots.push(pc);
            pr += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Solve `self · x = b` over ℚ, classifying the solution set.
    pub fn solve(&self, b: &[Rat]) -> Result<RatSolve> {
        if b.len() != self.rows {
            return Err(Error::contract("solve: rhs length mismatch"));
        }
        let rhs = Matrix::from_fn(self.rows, 1, |r, _| b[r].clone());
        let aug = self.hstack(&rhs)?;
        let (red, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(RatSolve::NoSolution);
        }
        if pivots.len() < self.cols {
            return Ok(RatSolve::Underdetermined(self.cols - pivots.len()));
        }
        let mut x = vec![Rat::zero(); self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = red[(r, self.cols)].clone();
        }
        Ok(RatSolve::Unique(x))
    }

    pub fn inverse(&self) -> Result<Matrix<Rat>> {
        if !self.is_square() {
            return Err(Error::contract("inverse of non-square matrix"));
        }
        let n = self.rows;
        let aug = self.hstack(&Matrix::identity(n))?;
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[..n] != (0..n).collect::<Vec<_>>()[..] {
            return Err(Error::domain("matrix is singular"));
        }
        Ok(Matrix::from_fn(n, n, |r, c| red[(r, n + c)].clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{int, rat, Int, IntMatrix, RatMatrix};

    fn im(rows: Vec<Vec<i64>>) -> IntMatrix {
        Matrix::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(Int::from).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn product_and_transpose() {
        let a = im(vec![vec![1, 2], vec![3, 4]]);
        let b = im(vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(a.mul(&b).unwrap(), im(vec![vec![2, 1], vec![4, 3]]));
        assert_eq!(a.transpose(), im(vec![vec![1, 3], vec![2, 4]]));
    }

    #[test]
    fn det_matches_cofactor_expansion() {
        let a = im(vec![vec![2, 4], vec![6, 8]]);
        assert_eq!(a.det().unwrap(), int(-8));
        let b = im(vec![vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 10]]);
        assert_eq!(b.det().unwrap(), int(-3));
        assert_eq!(IntMatrix::identity(0).det().unwrap(), int(1));
        assert_eq!(im(vec![vec![0, 0], vec![0, 0]]).det().unwrap(), int(0));
    }

    #[test]
    fn shape_mismatch_is_contract_violation() {
        let a = im(vec![vec![1, 2]]);
        let b = im(vec![vec![1, 2]]);
        assert!(matches!(a.mul(&b), Err(Error::Contract(_))));
        assert!(IntMatrix::new(2, 2, vec![int(1)]).is_err());
    }

    #[test]
    fn rat_solve_classifies() {
        let a = RatMatrix::from_rows(vec![vec![rat(1, 1), rat(1, 1)], vec![rat(0, 1), rat(2, 1)]])
            .unwrap();
        match a.solve(&[rat(3, 1), rat(4, 1)]).unwrap() {
            RatSolve::Unique(x) => assert_eq!(x, vec![rat(1, 1), rat(2, 1)]),
            other => panic!("expected unique, got {other:?}"),
        }
        let sing =
            RatMatrix::from_rows(vec![vec![rat(1, 1), rat(1, 1)], vec![rat(2, 1), rat(2, 1)]])
                .unwrap();
        assert_eq!(
            sing.solve(&[rat(1, 1), rat(3, 1)]).unwrap(),
            RatSolve::NoSolution
        );
        assert_eq!(
            sing.solve(&[rat(1, 1), rat(2, 1)]).unwrap(),
            RatSolve::Underdetermined(1)
        );
    }

    #[test]
    fn rat_inverse_round_trips() {
        let a = RatMatrix::from_rows(vec![vec![rat(2, 1), rat(1, 1)], vec![rat(1, 1), rat(1, 1)]])
            .unwrap();
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).unwrap().is_identity());
    }
}
