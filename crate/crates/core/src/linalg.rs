//! Dense complex matrix kernels used on individual Fourier slices.
//!
//! Slices are stored as nalgebra matrices; the heavy lifting (products, QR,
//! SVD) goes through faer, built without its own thread pool so that each
//! kernel is sequential and bit-reproducible. Parallelism comes from running
//! independent slices concurrently.

use faer::Mat;
use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

fn to_faer(a: &CMatrix) -> Mat<Complex64> {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)])
}

fn from_faer(a: faer::MatRef<'_, Complex64>) -> CMatrix {
    DMatrix::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)])
}

/// Complex matrix product.
pub fn matmul(a: &CMatrix, b: &CMatrix) -> CMatrix {
    assert_eq!(a.ncols(), b.nrows(), "inner dimensions differ");
    if a.nrows() * a.ncols() * b.ncols() < 16 * 16 * 16 {
        return a * b;
    }
    from_faer((to_faer(a) * to_faer(b)).as_ref())
}

/// Economy QR: `Q` is `m × min(m, n)`, `R` is `min(m, n) × n`.
pub fn qr_economy(a: &CMatrix) -> (CMatrix, CMatrix) {
    let qr = to_faer(a).qr();
    (from_faer(qr.compute_thin_Q().as_ref()), from_faer(qr.thin_R()))
}

/// Economy SVD with singular values sorted in descending order.
pub struct SliceSvd {
    pub u: CMatrix,
    pub sigma: Vec<f64>,
    pub v: CMatrix,
}

pub fn svd_economy(a: &CMatrix, slice: usize) -> Result<SliceSvd> {
    let (m, n) = a.shape();
    let r = m.min(n);
    if r == 0 {
        return Ok(SliceSvd { u: DMatrix::zeros(m, 0), sigma: Vec::new(), v: DMatrix::zeros(n, 0) });
    }
    let svd = to_faer(a)
        .thin_svd()
        .map_err(|e| Error::Numerical { slice, message: format!("SVD did not converge: {e:?}") })?;
    let s = svd.S().column_vector();
    let sigma: Vec<f64> = (0..r).map(|c| s[c].re).collect();
    if sigma.iter().any(|s| !s.is_finite()) {
        return Err(Error::Numerical { slice, message: "non-finite singular value".into() });
    }
    let mut order: Vec<usize> = (0..r).collect();
    order.sort_by(|&x, &y| sigma[y].total_cmp(&sigma[x]));
    let (fu, fv) = (svd.U(), svd.V());
    let u = DMatrix::from_fn(m, r, |i, c| fu[(i, order[c])]);
    let v = DMatrix::from_fn(n, r, |i, c| fv[(i, order[c])]);
    let sigma = order.iter().map(|&c| sigma[c]).collect();
    Ok(SliceSvd { u, sigma, v })
}

/// Singular values in descending order, without computing vectors.
pub fn singular_values(a: &CMatrix, slice: usize) -> Result<Vec<f64>> {
    if a.is_empty() {
        return Ok(Vec::new());
    }
    let mut s = to_faer(a)
        .singular_values()
        .map_err(|e| Error::Numerical { slice, message: format!("SVD did not converge: {e:?}") })?;
    s.sort_by(|x, y| y.total_cmp(x));
    Ok(s)
}

/// Moore–Penrose inverse via SVD, discarding singular values `<= cutoff`.
pub fn pinv(a: &CMatrix, cutoff: f64, slice: usize) -> Result<CMatrix> {
    let SliceSvd { u, sigma, v } = svd_economy(a, slice)?;
    let scaled = DMatrix::from_fn(v.nrows(), v.ncols(), |i, c| {
        if sigma[c] > cutoff {
            v[(i, c)] / sigma[c]
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    Ok(matmul(&scaled, &u.adjoint()))
}
