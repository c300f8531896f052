//! Brute-force reference paths built on explicit block-circulant matrices.
//!
//! Nothing here touches the FFT; these routines exist so the Fourier-domain
//! code can be checked against the spatial definitions. Size guards keep
//! every dense matrix below `MAX_BCIRC_DIM` rows and columns.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tensor::Tensor3;

pub const MAX_BCIRC_DIM: usize = 2000;

/// Dense block-circulant matrix of a tensor, `(n1·n3) × (n2·n3)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BcircMatrix {
    pub m: DMatrix<f64>,
    pub n1: usize,
    pub n2: usize,
    pub n3: usize,
}

fn guard(rows: usize, cols: usize) -> Result<()> {
    if rows > MAX_BCIRC_DIM || cols > MAX_BCIRC_DIM {
        return Err(Error::Size(format!("{rows}x{cols} exceeds oracle limit {MAX_BCIRC_DIM}")));
    }
    Ok(())
}

/// Block `(r, c)` is frontal slice `(r − c) mod n3`.
pub fn bcirc(x: &Tensor3) -> Result<BcircMatrix> {
    let (n1, n2, n3) = x.shape();
    guard(n1 * n3, n2 * n3)?;
    let m = DMatrix::from_fn(n1 * n3, n2 * n3, |row, col| {
        let (br, i) = (row / n1, row % n1);
        let (bc, j) = (col / n2, col % n2);
        x[(i, j, (br + n3 - bc) % n3)]
    });
    Ok(BcircMatrix { m, n1, n2, n3 })
}

/// Frontal slices stacked vertically.
pub fn unfold(x: &Tensor3) -> DMatrix<f64> {
    let (n1, n2, n3) = x.shape();
    DMatrix::from_fn(n1 * n3, n2, |row, j| x[(row % n1, j, row / n1)])
}

/// Inverse of [`unfold`].
pub fn fold(m: &DMatrix<f64>, n1: usize, n3: usize) -> Result<Tensor3> {
    if n1 == 0 || n3 == 0 || m.nrows() != n1 * n3 {
        return Err(Error::dim(format!("cannot fold {} rows into n1={n1}, n3={n3}", m.nrows())));
    }
    Tensor3::new(
        n1,
        m.ncols(),
        n3,
        (0..n3).flat_map(|k| (0..n1).flat_map(move |i| (0..m.ncols()).map(move |j| m[(k * n1 + i, j)]))).collect(),
    )
}

/// `fold(bcirc(X) · unfold(Y))`.
pub fn reference_tprod(x: &Tensor3, y: &Tensor3) -> Result<Tensor3> {
    if x.n2() != y.n1() || x.n3() != y.n3() {
        return Err(Error::dim(format!("t-product of {:?} and {:?}", x.shape(), y.shape())));
    }
    let b = bcirc(x)?;
    fold(&(b.m * unfold(y)), x.n1(), x.n3())
}

/// Eigenvalues of `bcirc(X)` for a tensor with square frontal slices.
pub fn t_eigenvalues(x: &Tensor3) -> Result<Vec<Complex64>> {
    if x.n1() != x.n2() {
        return Err(Error::dim(format!("T-eigenvalues need square slices, got {:?}", x.shape())));
    }
    let b = bcirc(x)?;
    Ok(b.m.complex_eigenvalues().iter().copied().collect())
}

/// `‖bcirc(X)‖₂` from a dense SVD.
pub fn reference_spectral_norm(x: &Tensor3) -> Result<f64> {
    let b = bcirc(x)?;
    Ok(b.m.singular_values().iter().copied().fold(0.0, f64::max))
}

/// Unnormalized DFT matrix `F_n`, `F[j][k] = exp(−2πi·jk/n)`.
pub fn dft_matrix(n: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(n, n, |j, k| {
        let angle = -2.0 * std::f64::consts::PI * ((j * k) % n) as f64 / n as f64;
        Complex64::from_polar(1.0, angle)
    })
}

/// `(F_{n3} ⊗ I_{n1}) · bcirc(X) · (F*_{n3} ⊗ I_{n2}) / n3`, which should be
/// block diagonal with the Fourier slices on the diagonal.
pub fn block_diagonalize(x: &Tensor3) -> Result<DMatrix<Complex64>> {
    let (n1, n2, n3) = x.shape();
    let b = bcirc(x)?.m.map(|v| Complex64::new(v, 0.0));
    let f = dft_matrix(n3);
    let left = f.kronecker(&DMatrix::<Complex64>::identity(n1, n1));
    let right = f.adjoint().kronecker(&DMatrix::<Complex64>::identity(n2, n2));
    Ok(left * b * right / Complex64::new(n3 as f64, 0.0))
}

/// Naive t-product that multiplies all `n3` Fourier slices, with the DFT
/// applied as a dense matrix along each tube. Used to validate the
/// conjugate-symmetry shortcut.
pub fn full_spectrum_tprod(x: &Tensor3, y: &Tensor3) -> Result<Tensor3> {
    if x.n2() != y.n1() || x.n3() != y.n3() {
        return Err(Error::dim("t-product extents"));
    }
    let n3 = x.n3();
    let xs = dense_dft_slices(x);
    let ys = dense_dft_slices(y);
    let prods: Vec<_> = xs.iter().zip(&ys).map(|(a, b)| a * b).collect();
    let finv = dft_matrix(n3).adjoint() / Complex64::new(n3 as f64, 0.0);
    let (n1, n4) = (x.n1(), y.n2());
    Ok(Tensor3::from_fn(n1, n4, n3, |i, j, k| (0..n3).map(|l| finv[(k, l)] * prods[l][(i, j)]).sum::<Complex64>().re))
}

/// Fourier slices computed with the dense DFT matrix.
pub fn dense_dft_slices(x: &Tensor3) -> Vec<DMatrix<Complex64>> {
    let (n1, n2, n3) = x.shape();
    let f = dft_matrix(n3);
    (0..n3)
        .map(|l| DMatrix::from_fn(n1, n2, |i, j| (0..n3).map(|k| f[(l, k)] * x[(i, j, k)]).sum::<Complex64>()))
        .collect()
}
