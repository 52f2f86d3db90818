use faer::{Mat, Side};
use nalgebra::{ComplexField, DMatrix};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Field the numerical kernels run in: `f64` for real problems, `C64` otherwise.
pub trait Scalar: ComplexField<RealField = f64> + Copy + Send + Sync + 'static {
    /// `None` if `z` has an imaginary part and `Self` is real.
    fn from_c64(z: C64) -> Option<Self>;
    fn to_c64(self) -> C64;

    /// Eigenvalues ascending and matching eigenvectors of a Hermitian matrix.
    fn hermitian_eigen(m: &DMatrix<Self>) -> Result<(Vec<f64>, DMatrix<Self>)>;

    /// Thin SVD of a row-major `rows × cols` matrix: `(U, s, V†)`, both
    /// factors row-major, singular values descending.
    fn thin_svd(a: &[Self], rows: usize, cols: usize) -> Result<(Vec<Self>, Vec<f64>, Vec<Self>)>;
}

macro_rules! faer_svd {
    ($t:ty, $re:expr, $conj:expr) => {
        fn thin_svd(a: &[$t], rows: usize, cols: usize) -> Result<(Vec<$t>, Vec<f64>, Vec<$t>)> {
            let m = Mat::<$t>::from_fn(rows, cols, |i, j| a[i * cols + j]);
            let svd = m.thin_svd().map_err(faer_failure)?;
            let k = rows.min(cols);
            let (u, s, v) = (svd.U(), svd.S().column_vector(), svd.V());
            let u_out = (0..rows * k).map(|x| u[(x / k, x % k)]).collect();
            let s_out = (0..k).map(|i| $re(s[i])).collect();
            let vh = (0..k * cols).map(|x| $conj(v[(x % cols, x / cols)])).collect();
            Ok((u_out, s_out, vh))
        }
    };
}

fn faer_failure<E: std::fmt::Debug>(e: E) -> Error {
    Error::EvolutionFailure(format!("eigensolver failed: {e:?}"))
}

impl Scalar for f64 {
    fn from_c64(z: C64) -> Option<Self> {
        (z.im == 0.0).then_some(z.re)
    }

    fn to_c64(self) -> C64 {
        C64::new(self, 0.0)
    }

    fn hermitian_eigen(m: &DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>)> {
        let a = Mat::<f64>::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)]);
        let e = a.self_adjoint_eigen(Side::Lower).map_err(faer_failure)?;
        let vals = e.S().column_vector().iter().copied().collect();
        let u = e.U();
        Ok((vals, DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| u[(i, j)])))
    }

    faer_svd!(f64, |x: f64| x, |x: f64| x);
}

impl Scalar for C64 {
    fn from_c64(z: C64) -> Option<Self> {
        Some(z)
    }

    fn to_c64(self) -> C64 {
        self
    }

    fn hermitian_eigen(m: &DMatrix<C64>) -> Result<(Vec<f64>, DMatrix<C64>)> {
        let a = Mat::<C64>::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)]);
        let e = a.self_adjoint_eigen(Side::Lower).map_err(faer_failure)?;
        let vals = e.S().column_vector().iter().map(|z| z.re).collect();
        let u = e.U();
        Ok((vals, DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| u[(i, j)])))
    }

    faer_svd!(C64, |x: C64| x.re, |x: C64| x.conj());
}

pub(crate) fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (x, y)| acc + x.conjugate() * *y)
}

pub(crate) fn norm<T: Scalar>(a: &[T]) -> f64 {
    a.iter().map(|x| x.modulus_squared()).sum::<f64>().sqrt()
}

pub(crate) fn axpy<T: Scalar>(alpha: T, x: &[T], y: &mut [T]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * *xi;
    }
}

/// Row-major `m × k` times row-major `k × n`.
pub(crate) fn matmul<T: Scalar>(a: &[T], m: usize, k: usize, b: &[T], n: usize) -> Vec<T> {
    debug_assert_eq!(a.len(), m * k);
    debug_assert_eq!(b.len(), k * n);
    // a row-major buffer read column-major is the transpose
    let at = nalgebra::DMatrixView::from_slice(a, k, m);
    let bt = nalgebra::DMatrixView::from_slice(b, n, k);
    let ct = bt * at;
    ct.as_slice().to_vec()
}

pub(crate) fn scale<T: Scalar>(alpha: T, x: &mut [T]) {
    for xi in x.iter_mut() {
        *xi *= alpha;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigen_residuals_are_tight() {
        let n = 64;
        let m = DMatrix::<f64>::from_fn(n, n, |i, j| ((i * 7 + j * 7) % 11) as f64 - 5.0);
        let (vals, vecs) = f64::hermitian_eigen(&m).unwrap();
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vals));
        assert!((&m * &vecs - &vecs * d).norm() < 1e-11);
        let c = DMatrix::<C64>::from_fn(4, 4, |i, j| C64::new((i + j) as f64, i as f64 - j as f64));
        let (vals, vecs) = C64::hermitian_eigen(&c).unwrap();
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vals.iter().map(|&x| C64::from(x)).collect()));
        assert!((&c * &vecs - &vecs * d).norm() < 1e-12);
    }

    #[test]
    fn svd_and_matmul_round_trip() {
        let (rows, cols) = (5, 3);
        let a: Vec<C64> = (0..rows * cols).map(|x| C64::new(x as f64 * 0.3 - 1.0, (x % 4) as f64)).collect();
        let (u, s, vh) = C64::thin_svd(&a, rows, cols).unwrap();
        assert!(s.windows(2).all(|w| w[0] >= w[1]));
        let us: Vec<C64> = u.iter().enumerate().map(|(x, v)| v * s[x % 3]).collect();
        let back = matmul(&us, rows, 3, &vh, cols);
        for (x, y) in back.iter().zip(&a) {
            assert!((x - y).norm() < 1e-12);
        }
        let ar: Vec<f64> = (0..6).map(|x| x as f64).collect();
        assert_eq!(matmul(&ar, 2, 3, &ar, 2), vec![10.0, 13.0, 28.0, 40.0]);
    }
}
