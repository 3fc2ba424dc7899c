use crate::error::{Error, Result};
use crate::real::Real;

use super::Matrix;

/// Lower-triangular factor `L` with `A = L Lᵀ`.
#[derive(Debug, Clone)]
pub struct Cholesky<T> {
    l: Matrix<T>,
}

impl<T: Real> Cholesky<T> {
    pub fn factor(a: &Matrix<T>) -> Result<Self> {
        let n = a.dim();
        let mut l = Matrix::zeros(n);
        for j in 0..n {
            let mut diag = a[(j, j)];
            for k in 0..j {
                diag = diag - l[(j, k)] * l[(j, k)];
            }
            if !(diag > T::zero()) {
                return Err(Error::NotPositiveDefinite { pivot: j });
            }
            let ljj = diag.sqrt();
            l[(j, j)] = ljj;
            for i in j + 1..n {
                let mut s = a[(i, j)];
                for k in 0..j {
                    s = s - l[(i, k)] * l[(j, k)];
                }
                l[(i, j)] = s / ljj;
            }
        }
        Ok(Self { l })
    }

    pub fn lower(&self) -> &Matrix<T> {
        &self.l
    }

    /// Solves `L y = b`.
    pub fn solve_lower(&self, b: &[T]) -> Vec<T> {
        let n = self.l.dim();
        let mut y = b.to_vec();
        for i in 0..n {
            let mut s = y[i];
            for k in 0..i {
                s = s - self.l[(i, k)] * y[k];
            }
            y[i] = s / self.l[(i, i)];
        }
        y
    }

    /// Solves `Lᵀ x = y`.
    pub fn solve_upper(&self, y: &[T]) -> Vec<T> {
        let n = self.l.dim();
        let mut x = y.to_vec();
        for i in (0..n).rev() {
            let mut s = x[i];
            for k in i + 1..n {
                s = s - self.l[(k, i)] * x[k];
            }
            x[i] = s / self.l[(i, i)];
        }
        x
    }

    /// `L⁻¹ H L⁻ᵀ` for symmetric `H`, symmetrized.
    pub fn reduce(&self, h: &Matrix<T>) -> Matrix<T> {
        let n = h.dim();
        // columns of L⁻¹ H
        let cols: Vec<Vec<T>> = (0..n).map(|j| self.solve_lower(&h.column(j))).collect();
        let y = Matrix::from_fn(n, |i, j| cols[j][i]);
        // L⁻¹ (L⁻¹ H)ᵀ
        let cols2: Vec<Vec<T>> = (0..n).map(|j| self.solve_lower(y.row(j))).collect();
        Matrix::from_fn(n, |i, j| cols2[j][i]).symmetrized()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_and_reconstruct() {
        let a = Matrix::from_fn(4, |i, j| if i == j { 4.0 } else { 1.0 / (1 + i + j) as f64 });
        let ch = Cholesky::factor(&a).unwrap();
        let l = ch.lower();
        let back = l.matmul(&l.transpose());
        assert!(back.sub(&a).max_abs() < 1e-14);
        let b = vec![1.0, 2.0, 3.0, 4.0];
        let x = ch.solve_upper(&ch.solve_lower(&b));
        let ax = a.matvec(&x);
        for (u, v) in ax.iter().zip(&b) {
            assert!((u - v).abs() < 1e-13);
        }
    }

    #[test]
    fn rejects_indefinite() {
        let a = Matrix::from_fn(2, |i, j| if i == j { 1.0 } else { 2.0 });
        assert_eq!(Cholesky::factor(&a).unwrap_err(), Error::NotPositiveDefinite { pivot: 1 });
    }

    #[test]
    fn reduce_of_self_is_identity() {
        let a = Matrix::from_fn(3, |i, j| if i == j { 3.0 } else { 0.5 });
        let ch = Cholesky::factor(&a).unwrap();
        let r = ch.reduce(&a);
        assert!(r.sub(&Matrix::identity(3)).max_abs() < 1e-14);
    }
}
