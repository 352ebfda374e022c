//! Exact Gaussian elimination over `Rat`.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rat::{self, Rat};

/// Dense row-major rational matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = rat::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Malformed("ragged rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::Malformed(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Determinant by elimination; the matrix must be square.
    pub fn det(&self) -> Result<Rat> {
        if self.rows != self.cols {
            return Err(Error::Malformed("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut det = rat::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a[(r, c)].is_zero()) else {
                return Ok(rat::zero());
            };
            if p != c {
                a.swap_rows(p, c);
                det = -det;
            }
            let piv = a[(c, c)].clone();
            det *= &piv;
            for r in c + 1..n {
                if a[(r, c)].is_zero() {
                    continue;
                }
                let factor = &a[(r, c)] / &piv;
                for j in c..n {
                    let v = &factor * &a[(c, j)];
                    a[(r, j)] -= v;
                }
            }
        }
        Ok(det)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(p, r);
            let inv = rat::one() / &self[(r, c)];
            for j in c..self.cols {
                let v = &self[(r, j)] * &inv;
                self[(r, j)] = v;
            }
            for i in 0..self.rows {
                if i == r || self[(i, c)].is_zero() {
                    continue;
                }
                let factor = self[(i, c)].clone();
                for j in c..self.cols {
                    if self[(r, j)].is_zero() {
                        continue;
                    }
                    let v = &factor * &self[(r, j)];
                    self[(i, j)] -= v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// A basis of `{x : A x = 0}`, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<Rat>> {
        let mut a = self.clone();
        let pivots = a.rref();
        kernel_from_rref(&a, &pivots)
    }
}

fn kernel_from_rref(a: &Matrix, pivots: &[usize]) -> Vec<Vec<Rat>> {
    let free: Vec<usize> = (0..a.cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![rat::zero(); a.cols];
            v[f] = rat::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[(row, f)].clone();
            }
            v
        })
        .collect()
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

/// `A x = b` over the rationals.
#[derive(Debug, Clone)]
pub struct LinearProblem {
    pub matrix: Matrix,
    pub rhs: Vec<Rat>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    Unique(Vec<Rat>),
    /// `particular + span(kernel)`.
    Affine { particular: Vec<Rat>, kernel: Vec<Vec<Rat>> },
    /// Row `row` of the original system reduces to `0 = residual`, `residual != 0`.
    Inconsistent { row: usize, residual: Rat },
}

impl LinearProblem {
    pub fn new(matrix: Matrix, rhs: Vec<Rat>) -> Result<Self> {
        if matrix.rows() != rhs.len() {
            return Err(Error::Malformed(format!(
                "{} rows but {} right-hand-side entries",
                matrix.rows(),
                rhs.len()
            )));
        }
        Ok(LinearProblem { matrix, rhs })
    }

    pub fn solve(&self) -> Solution {
        let (rows, cols) = (self.matrix.rows(), self.matrix.cols());
        let mut aug = Matrix::zeros(rows, cols + 1);
        for i in 0..rows {
            for j in 0..cols {
                aug[(i, j)] = self.matrix[(i, j)].clone();
            }
            aug[(i, cols)] = self.rhs[i].clone();
        }
        let mut tagged = aug;
        let pivots = tagged.rref();
        if pivots.last() == Some(&cols) {
            let row = self.first_inconsistent_row();
            let residual = tagged[(pivots.len() - 1, cols)].clone();
            return Solution::Inconsistent { row, residual };
        }
        let mut particular = vec![rat::zero(); cols];
        for (r, &pc) in pivots.iter().enumerate() {
            particular[pc] = tagged[(r, cols)].clone();
        }
        let mut coef = Matrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                coef[(i, j)] = tagged[(i, j)].clone();
            }
        }
        let kernel = kernel_from_rref(&coef, &pivots);
        if kernel.is_empty() {
            Solution::Unique(particular)
        } else {
            Solution::Affine { particular, kernel }
        }
    }

    /// Smallest `m` such that rows `0..=m` are already inconsistent.
    fn first_inconsistent_row(&self) -> usize {
        let cols = self.matrix.cols();
        let (mut lo, mut hi) = (0usize, self.matrix.rows() - 1);
        let consistent = |m: usize| {
            let mut aug = Matrix::zeros(m + 1, cols + 1);
            for i in 0..=m {
                for j in 0..cols {
                    aug[(i, j)] = self.matrix[(i, j)].clone();
                }
                aug[(i, cols)] = self.rhs[i].clone();
            }
            aug.rref().last() != Some(&cols)
        };
        while lo < hi {
            let mid = (lo + hi) / 2;
            if consistent(mid) {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        lo
    }
}

/// Convenience wrapper over [`LinearProblem::solve`].
pub fn solve_exact(problem: &LinearProblem) -> Solution {
    problem.solve()
}
