//! Householder tridiagonalization followed by the implicit-shift QL
//! iteration (the EISPACK `tred2`/`tql2` pair).

use crate::error::{Error, Result};
use crate::real::Real;

use super::Matrix;

/// Iteration budget for each eigenvalue in the QL sweep.
pub const MAX_SWEEPS_PER_EIGENVALUE: usize = 50;

/// Symmetric tridiagonal matrix stored by its diagonals.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal<T> {
    pub diag: Vec<T>,
    /// `offdiag[i]` couples rows `i` and `i + 1`.
    pub offdiag: Vec<T>,
}

/// Eigenvalues in ascending order; column `k` of `vectors` belongs to `values[k]`.
#[derive(Debug, Clone)]
pub struct SymmetricEigen<T> {
    pub values: Vec<T>,
    pub vectors: Matrix<T>,
}

impl<T: Real> SymTridiagonal<T> {
    pub fn new(diag: Vec<T>, offdiag: Vec<T>) -> Self {
        assert!(
            diag.len() == offdiag.len() + 1 || (diag.is_empty() && offdiag.is_empty()),
            "off-diagonal must be one shorter than the diagonal"
        );
        Self { diag, offdiag }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn to_dense(&self) -> Matrix<T> {
        let n = self.dim();
        let mut m = Matrix::from_diagonal(&self.diag);
        for i in 0..n.saturating_sub(1) {
            m[(i, i + 1)] = self.offdiag[i];
            m[(i + 1, i)] = self.offdiag[i];
        }
        m
    }

    pub fn max_abs(&self) -> T {
        self.diag.iter().chain(&self.offdiag).fold(T::zero(), |m, &x| m.max(x.abs()))
    }

    /// Full eigendecomposition.
    pub fn eigen(&self) -> Result<SymmetricEigen<T>> {
        let n = self.dim();
        let mut d = self.diag.clone();
        let mut e = vec![T::zero(); n];
        e[..n.saturating_sub(1)].copy_from_slice(&self.offdiag);
        let mut v = Matrix::identity(n);
        tql2(&mut d, &mut e, &mut v)?;
        Ok(sorted(d, v))
    }
}

/// Full eigendecomposition of a dense symmetric matrix (only the lower
/// triangle is read).
pub fn symmetric_eigen<T: Real>(a: &Matrix<T>) -> Result<SymmetricEigen<T>> {
    let n = a.dim();
    if n == 0 {
        return Ok(SymmetricEigen { values: Vec::new(), vectors: Matrix::zeros(0) });
    }
    let mut v = Matrix::from_fn(n, |i, j| if i >= j { a[(i, j)] } else { a[(j, i)] });
    let mut d = vec![T::zero(); n];
    let mut e = vec![T::zero(); n];
    tred2(&mut v, &mut d, &mut e);
    // tred2 leaves the sub-diagonal in e[1..]; tql2 expects it in e[..n-1].
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = T::zero();
    tql2(&mut d, &mut e, &mut v)?;
    Ok(sorted(d, v))
}

fn sorted<T: Real>(d: Vec<T>, v: Matrix<T>) -> SymmetricEigen<T> {
    let n = d.len();
    let mut order: Vec<usize> = (0..n).collect();
    // stable: ties keep their input order
    order.sort_by(|&a, &b| d[a].partial_cmp(&d[b]).unwrap_or(std::cmp::Ordering::Equal));
    let values = order.iter().map(|&k| d[k]).collect();
    let vectors = Matrix::from_fn(n, |i, j| v[(i, order[j])]);
    SymmetricEigen { values, vectors }
}

fn tred2<T: Real>(v: &mut Matrix<T>, d: &mut [T], e: &mut [T]) {
    let n = d.len();
    let zero = T::zero();
    for j in 0..n {
        d[j] = v[(n - 1, j)];
    }
    for i in (1..n).rev() {
        let mut scale = zero;
        let mut h = zero;
        for k in 0..i {
            scale = scale + d[k].abs();
        }
        if scale == zero {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[(i - 1, j)];
                v[(i, j)] = zero;
                v[(j, i)] = zero;
            }
        } else {
            for k in 0..i {
                d[k] = d[k] / scale;
                h = h + d[k] * d[k];
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > zero {
                g = -g;
            }
            e[i] = scale * g;
            h = h - f * g;
            d[i - 1] = f - g;
            for ej in e.iter_mut().take(i) {
                *ej = zero;
            }
            for j in 0..i {
                f = d[j];
                v[(j, i)] = f;
                g = e[j] + v[(j, j)] * f;
                for k in j + 1..i {
                    g = g + v[(k, j)] * d[k];
                    e[k] = e[k] + v[(k, j)] * f;
                }
                e[j] = g;
            }
            f = zero;
            for j in 0..i {
                e[j] = e[j] / h;
                f = f + e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] = e[j] - hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[(k, j)] = v[(k, j)] - (f * e[k] + g * d[k]);
                }
                d[j] = v[(i - 1, j)];
                v[(i, j)] = zero;
            }
        }
        d[i] = h;
    }

    for i in 0..n.saturating_sub(1) {
        v[(n - 1, i)] = v[(i, i)];
        v[(i, i)] = T::one();
        let h = d[i + 1];
        if h != zero {
            for k in 0..=i {
                d[k] = v[(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = zero;
                for k in 0..=i {
                    g = g + v[(k, i + 1)] * v[(k, j)];
                }
                for k in 0..=i {
                    v[(k, j)] = v[(k, j)] - g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[(k, i + 1)] = zero;
        }
    }
    for j in 0..n {
        d[j] = v[(n - 1, j)];
        v[(n - 1, j)] = zero;
    }
    v[(n - 1, n - 1)] = T::one();
    e[0] = zero;
}

/// Implicit QL on the tridiagonal (d, e) with `e[i]` coupling `i, i+1`,
/// accumulating rotations into the columns of `v`.
fn tql2<T: Real>(d: &mut [T], e: &mut [T], v: &mut Matrix<T>) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    let zero = T::zero();
    let one = T::one();
    let two = T::lit(2.0);
    let eps = T::epsilon();
    let mut f = zero;
    let mut tst1 = zero;
    e[n - 1] = zero;

    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        // e[n-1] == 0 guarantees m < n
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > MAX_SWEEPS_PER_EIGENVALUE {
                    return Err(Error::NoConvergence { index: l, iterations: iter - 1 });
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (two * e[l]);
                let mut r = p.hypot_scaled(one);
                if p < zero {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di = *di - h;
                }
                f = f + h;

                p = d[m];
                let mut c = one;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = zero;
                let mut s2 = zero;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot_scaled(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for k in 0..n {
                        h = v[(k, i + 1)];
                        v[(k, i + 1)] = s * v[(k, i)] + c * h;
                        v[(k, i)] = c * v[(k, i)] - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] = d[l] + f;
        e[l] = zero;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::DoubleDouble;

    fn residual<T: Real>(a: &Matrix<T>, eig: &SymmetricEigen<T>) -> f64 {
        let n = a.dim();
        let mut worst = 0.0f64;
        for k in 0..n {
            let col = eig.vectors.column(k);
            let av = a.matvec(&col);
            for i in 0..n {
                worst = worst.max((av[i] - eig.values[k] * col[i]).abs().to_f64_lossy());
            }
        }
        worst
    }

    #[test]
    fn one_by_one() {
        let t = SymTridiagonal::new(vec![3.5f64], vec![]);
        let eig = t.eigen().unwrap();
        assert_eq!(eig.values, vec![3.5]);
        assert_eq!(eig.vectors[(0, 0)], 1.0);
    }

    #[test]
    fn two_by_two_antidiagonal() {
        let t = SymTridiagonal::new(vec![0.0f64, 0.0], vec![-2.0]);
        let eig = t.eigen().unwrap();
        assert!((eig.values[0] + 2.0).abs() < 1e-15);
        assert!((eig.values[1] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn second_difference_matrix_has_known_spectrum() {
        let n = 40;
        let t = SymTridiagonal::new(vec![2.0f64; n], vec![-1.0; n - 1]);
        let eig = t.eigen().unwrap();
        for (k, &lam) in eig.values.iter().enumerate() {
            let exact = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / (n + 1) as f64).cos();
            assert!((lam - exact).abs() < 1e-13, "k={k}: {lam} vs {exact}");
        }
        assert!(residual(&t.to_dense(), &eig) < 1e-13);
    }

    #[test]
    fn dense_matches_tridiagonal_route() {
        let n = 12;
        let a = Matrix::from_fn(n, |i, j| 1.0 / (1.0 + i as f64 + j as f64) + if i == j { i as f64 } else { 0.0 });
        let eig = symmetric_eigen(&a).unwrap();
        assert!(residual(&a, &eig) < 1e-12);
        let q = &eig.vectors;
        let qtq = q.transpose().matmul(q);
        assert!(qtq.sub(&Matrix::identity(n)).max_abs() < 1e-13);
        for w in eig.values.windows(2) {
            assert!(w[0] <= w[1]);
        }
    }

    #[test]
    fn double_double_residual_is_tiny() {
        let n = 10;
        let a = Matrix::from_fn(n, |i, j| DoubleDouble::lit(1.0 / (1.0 + i as f64 + j as f64)));
        let eig = symmetric_eigen(&a).unwrap();
        assert!(residual(&a, &eig) < 1e-28);
    }

    #[test]
    fn empty_matrix() {
        let eig = symmetric_eigen(&Matrix::<f64>::zeros(0)).unwrap();
        assert!(eig.values.is_empty());
    }
}
