//! Small dense linear algebra for frames, rotations and least squares.

use crate::error::{Error, Result};
use crate::scalar::{lit, Scalar};

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat<T> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<T>,
}

impl<T: Scalar> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<T>]) -> Self {
        let rows = cols.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, &v) in c.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == T::zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "matvec shape mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    /// Determinant by partial-pivot elimination.
    pub fn determinant(&self) -> T {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut det = T::one();
        for c in 0..n {
            let p = (c..n)
                .max_by(|&x, &y| {
                    a[(x, c)]
                        .abs()
                        .partial_cmp(&a[(y, c)].abs())
                        .expect("finite entries")
                })
                .expect("non-empty range");
            if a[(p, c)] == T::zero() {
                return T::zero();
            }
            if p != c {
                for j in 0..n {
                    a.data.swap(p * n + j, c * n + j);
                }
                det = -det;
            }
            let piv = a[(c, c)];
            det *= piv;
            for r in (c + 1)..n {
                let f = a[(r, c)] / piv;
                for j in c..n {
                    let v = a[(c, j)];
                    a[(r, j)] -= f * v;
                }
            }
        }
        det
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| (a - b).abs())
            .fold(T::zero(), T::max)
    }
}

impl<T> std::ops::Index<(usize, usize)> for Mat<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Mat<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

/// Solves the square system `a x = b` by partial-pivot Gaussian elimination.
pub fn solve<T: Scalar>(a: &Mat<T>, b: &[T]) -> Result<Vec<T>> {
    let n = a.rows;
    let mut m = a.clone();
    let mut rhs = b.to_vec();
    let scale = m.data.iter().fold(T::zero(), |acc, v| acc.max(v.abs()));
    for c in 0..n {
        let p = (c..n)
            .max_by(|&x, &y| {
                m[(x, c)]
                    .abs()
                    .partial_cmp(&m[(y, c)].abs())
                    .expect("finite entries")
            })
            .expect("non-empty range");
        if m[(p, c)].abs() <= scale * T::epsilon() * lit(16.0) {
            return Err(Error::RankDeficient("singular linear system".into()));
        }
        if p != c {
            for j in 0..n {
                m.data.swap(p * n + j, c * n + j);
            }
            rhs.swap(p, c);
        }
        for r in (c + 1)..n {
            let f = m[(r, c)] / m[(c, c)];
            for j in c..n {
                let v = m[(c, j)];
                m[(r, j)] -= f * v;
            }
            let v = rhs[c];
            rhs[r] -= f * v;
        }
    }
    let mut x = vec![T::zero(); n];
    for i in (0..n).rev() {
        let mut acc = rhs[i];
        for j in (i + 1)..n {
            acc -= m[(i, j)] * x[j];
        }
        x[i] = acc / m[(i, i)];
    }
    Ok(x)
}

/// Least-squares solution of `a x ≈ b` by Householder QR (never the normal
/// equations). Returns the coefficients and the residual 2-norm.
pub fn least_squares<T: Scalar>(a: &Mat<T>, b: &[T]) -> Result<(Vec<T>, T)> {
    let (m, n) = (a.rows, a.cols);
    if m < n {
        return Err(Error::RankDeficient(format!(
            "{m} equations for {n} unknowns"
        )));
    }
    let mut r = a.clone();
    let mut y = b.to_vec();
    let col_scale = (0..n)
        .map(|j| (0..m).map(|i| r[(i, j)].powi(2)).sum::<T>().sqrt())
        .fold(T::zero(), T::max);
    for k in 0..n {
        let alpha_sq: T = (k..m).map(|i| r[(i, k)].powi(2)).sum();
        let alpha = alpha_sq.sqrt();
        if alpha <= col_scale * T::epsilon() * lit(1e3) {
            return Err(Error::RankDeficient(format!(
                "column {k} is numerically dependent on the previous ones"
            )));
        }
        let alpha = if r[(k, k)] > T::zero() { -alpha } else { alpha };
        let mut v: Vec<T> = (k..m).map(|i| r[(i, k)]).collect();
        v[0] -= alpha;
        let vnorm_sq: T = v.iter().map(|&x| x * x).sum();
        if vnorm_sq == T::zero() {
            continue;
        }
        let two = lit::<T>(2.0);
        for j in k..n {
            let proj: T = (k..m).map(|i| v[i - k] * r[(i, j)]).sum();
            let f = two * proj / vnorm_sq;
            for i in k..m {
                r[(i, j)] -= f * v[i - k];
            }
        }
        let proj: T = (k..m).map(|i| v[i - k] * y[i]).sum();
        let f = two * proj / vnorm_sq;
        for i in k..m {
            y[i] -= f * v[i - k];
        }
    }
    let mut x = vec![T::zero(); n];
    for i in (0..n).rev() {
        let mut acc = y[i];
        for j in (i + 1)..n {
            acc -= r[(i, j)] * x[j];
        }
        x[i] = acc / r[(i, i)];
    }
    let resid = y[n..].iter().map(|&v| v * v).sum::<T>().sqrt();
    Ok((x, resid))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn solve_and_determinant() {
        let a = Mat {
            rows: 3,
            cols: 3,
            data: vec![2.0, 1.0, 0.0, 1.0, 3.0, 1.0, 0.0, 1.0, 4.0],
        };
        let x = solve(&a, &[1.0, 2.0, 3.0]).unwrap();
        let back = a.apply(&x);
        for (u, v) in back.iter().zip([1.0, 2.0, 3.0]) {
            assert_abs_diff_eq!(*u, v, epsilon = 1e-14);
        }
        assert_abs_diff_eq!(a.determinant(), 18.0, epsilon = 1e-12);
    }

    #[test]
    fn least_squares_line_fit() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let cols = vec![vec![1.0; 4], xs.to_vec()];
        let a = Mat::from_columns(&cols);
        let (c, res) = least_squares(&a, &[1.0, 3.0, 5.0, 7.0]).unwrap();
        assert_abs_diff_eq!(c[0], 1.0, epsilon = 1e-13);
        assert_abs_diff_eq!(c[1], 2.0, epsilon = 1e-13);
        assert!(res < 1e-12);
    }

    #[test]
    fn dependent_columns_rejected() {
        let cols = vec![vec![1.0, 2.0, 3.0], vec![2.0, 4.0, 6.0]];
        let a = Mat::from_columns(&cols);
        assert!(matches!(
            least_squares(&a, &[1.0, 1.0, 1.0]),
            Err(Error::RankDeficient(_))
        ));
    }
}
