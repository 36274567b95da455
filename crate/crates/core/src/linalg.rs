//! Dense exact-rational linear algebra for the small Gram systems that show up
//! in Weingarten and Gram–Schmidt computations.

use num_traits::{One, Zero};

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
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

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
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
        out
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// Row-reduces a copy and returns the pivot columns.
    pub fn pivot_columns(&self) -> Vec<usize> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = Scalar::one() / &m[(row, col)];
            for j in col..m.cols {
                let v = &m[(row, j)] * &inv;
                m[(row, j)] = v;
            }
            for r in 0..m.rows {
                if r != row && !m[(r, col)].is_zero() {
                    let f = m[(r, col)].clone();
                    for j in col..m.cols {
                        let v = &m[(row, j)] * &f;
                        m[(r, j)] -= v;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.pivot_columns().len()
    }

    /// Gauss–Jordan inverse; `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let p = (col..n).find(|&r| !a[(r, col)].is_zero())?;
            a.swap_rows(col, p);
            inv.swap_rows(col, p);
            let f = Scalar::one() / &a[(col, col)];
            for j in 0..n {
                let v = &a[(col, j)] * &f;
                a[(col, j)] = v;
                let v = &inv[(col, j)] * &f;
                inv[(col, j)] = v;
            }
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let g = a[(r, col)].clone();
                for j in 0..n {
                    let v = &a[(col, j)] * &g;
                    a[(r, j)] -= v;
                    let v = &inv[(col, j)] * &g;
                    inv[(r, j)] -= v;
                }
            }
        }
        Some(inv)
    }

    /// A generalized inverse `W` with `G·W·G = G` for a symmetric positive
    /// semidefinite `G`: the inverse of the principal block on a maximal set of
    /// independent columns, zero elsewhere. Returns the matrix and the rank.
    pub fn generalized_inverse_psd(&self) -> (Self, usize) {
        assert!(self.is_square());
        if let Some(inv) = self.inverse() {
            return (inv, self.rows);
        }
        let piv = self.pivot_columns();
        let block = Self::from_fn(piv.len(), piv.len(), |i, j| self[(piv[i], piv[j])].clone());
        let block_inv = block
            .inverse()
            .expect("principal block on pivot columns of a PSD matrix is invertible");
        let mut out = Self::zeros(self.rows, self.cols);
        for (a, &i) in piv.iter().enumerate() {
            for (b, &j) in piv.iter().enumerate() {
                out[(i, j)] = block_inv[(a, b)].clone();
            }
        }
        (out, piv.len())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl std::ops::Index<(usize, usize)> for RationalMatrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    #[test]
    fn inverse_of_two_by_two() {
        let g = RationalMatrix::from_fn(2, 2, |i, j| if i == j { int(9) } else { int(3) });
        let w = g.inverse().unwrap();
        assert_eq!(w[(0, 0)], ratio(1, 8));
        assert_eq!(w[(0, 1)], ratio(-1, 24));
        assert_eq!(g.mul(&w), RationalMatrix::identity(2));
    }

    #[test]
    fn generalized_inverse_of_singular_gram() {
        // Gram of {id, (12)} on (C^1)^{⊗2}.
        let g = RationalMatrix::from_fn(2, 2, |_, _| int(1));
        assert!(g.inverse().is_none());
        let (w, rank) = g.generalized_inverse_psd();
        assert_eq!(rank, 1);
        assert_eq!(g.mul(&w).mul(&g), g);
    }

    #[test]
    fn rank_counts_independent_rows() {
        let m = RationalMatrix::from_fn(3, 3, |i, j| int((i * 3 + j) as i64));
        assert_eq!(m.rank(), 2);
    }
}
