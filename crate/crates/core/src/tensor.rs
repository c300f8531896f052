//! Dense real third-order tensors.
//!
//! Entries are stored slice-major: the frontal slice index `k` is outermost,
//! and each frontal slice is stored row-major. Entry `(i, j, k)` lives at
//! `k * n1 * n2 + i * n2 + j`. The binary tensor file format uses the same
//! order, so file round-trips are bit-exact.
//!
//! All indices in this API are zero-based.

use std::ops::Index;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::fourier;

/// Dense `n1 × n2 × n3` tensor of finite `f64` values.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor3 {
    n1: usize,
    n2: usize,
    n3: usize,
    data: Vec<f64>,
}

impl Tensor3 {
    /// Builds a tensor from slice-major, row-major data.
    pub fn new(n1: usize, n2: usize, n3: usize, data: Vec<f64>) -> Result<Self> {
        if n1 == 0 || n2 == 0 || n3 == 0 {
            return Err(Error::dim(format!("extents must be positive, got {n1}x{n2}x{n3}")));
        }
        let expected =
            n1.checked_mul(n2).and_then(|v| v.checked_mul(n3)).ok_or_else(|| Error::dim("extent product overflows"))?;
        if data.len() != expected {
            return Err(Error::dim(format!("{n1}x{n2}x{n3} tensor needs {expected} values, got {}", data.len())));
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::Value(format!("non-finite entry {} at offset {pos}", data[pos])));
        }
        Ok(Self { n1, n2, n3, data })
    }

    /// Internal constructor for data produced by our own kernels.
    pub(crate) fn from_raw(n1: usize, n2: usize, n3: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), n1 * n2 * n3);
        Self { n1, n2, n3, data }
    }

    pub fn zeros(n1: usize, n2: usize, n3: usize) -> Self {
        Self::from_raw(n1, n2, n3, vec![0.0; n1 * n2 * n3])
    }

    /// Tensor whose entry `(i, j, k)` is `f(i, j, k)`.
    pub fn from_fn(n1: usize, n2: usize, n3: usize, mut f: impl FnMut(usize, usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(n1 * n2 * n3);
        for k in 0..n3 {
            for i in 0..n1 {
                for j in 0..n2 {
                    data.push(f(i, j, k));
                }
            }
        }
        Self::from_raw(n1, n2, n3, data)
    }

    /// Stacks real matrices as frontal slices.
    pub fn from_slices(slices: &[DMatrix<f64>]) -> Result<Self> {
        let first = slices.first().ok_or_else(|| Error::dim("no frontal slices"))?;
        let (n1, n2) = first.shape();
        if slices.iter().any(|s| s.shape() != (n1, n2)) {
            return Err(Error::dim("frontal slices differ in shape"));
        }
        let n3 = slices.len();
        Self::new(
            n1,
            n2,
            n3,
            slices.iter().flat_map(|s| (0..n1).flat_map(move |i| (0..n2).map(move |j| s[(i, j)]))).collect(),
        )
    }

    /// The t-product identity: first frontal slice `I_n`, the rest zero.
    pub fn identity(n: usize, n3: usize) -> Self {
        let mut t = Self::zeros(n, n, n3);
        for i in 0..n {
            t.data[i * n + i] = 1.0;
        }
        t
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        (self.n1, self.n2, self.n3)
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn n2(&self) -> usize {
        self.n2
    }

    pub fn n3(&self) -> usize {
        self.n3
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// Raw entries in storage order.
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    fn offset(&self, i: usize, j: usize, k: usize) -> usize {
        k * self.n1 * self.n2 + i * self.n2 + j
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> Option<f64> {
        (i < self.n1 && j < self.n2 && k < self.n3).then(|| self.data[self.offset(i, j, k)])
    }

    /// Row-major view of frontal slice `k`.
    pub fn slice_data(&self, k: usize) -> &[f64] {
        let len = self.n1 * self.n2;
        &self.data[k * len..(k + 1) * len]
    }

    /// Copy of frontal slice `k` (zero-based).
    pub fn frontal_slice(&self, k: usize) -> Result<DMatrix<f64>> {
        if k >= self.n3 {
            return Err(Error::Index { index: k, extent: self.n3 });
        }
        Ok(DMatrix::from_row_slice(self.n1, self.n2, self.slice_data(k)))
    }

    /// Tensor transpose: transpose every frontal slice, then reverse the
    /// order of slices 2 through n3.
    pub fn t_transpose(&self) -> Self {
        let (n1, n2, n3) = self.shape();
        let mut data = vec![0.0; self.data.len()];
        for k in 0..n3 {
            let src = if k == 0 { 0 } else { n3 - k };
            let from = self.slice_data(src);
            let to = &mut data[k * n1 * n2..(k + 1) * n1 * n2];
            for i in 0..n1 {
                for j in 0..n2 {
                    to[j * n1 + i] = from[i * n2 + j];
                }
            }
        }
        Self::from_raw(n2, n1, n3, data)
    }

    /// Concatenates tensors along the second mode, preserving order.
    pub fn concat_lateral(parts: &[&Tensor3]) -> Result<Self> {
        let first = parts.first().ok_or_else(|| Error::dim("nothing to concatenate"))?;
        let (n1, n3) = (first.n1, first.n3);
        if let Some(bad) = parts.iter().find(|p| p.n1 != n1 || p.n3 != n3) {
            return Err(Error::dim(format!(
                "lateral concatenation needs equal n1 and n3: {n1}x_x{n3} vs {}x_x{}",
                bad.n1, bad.n3
            )));
        }
        let n2: usize = parts.iter().map(|p| p.n2).sum();
        let mut data = Vec::with_capacity(n1 * n2 * n3);
        for k in 0..n3 {
            for i in 0..n1 {
                for p in parts {
                    let start = p.offset(i, 0, k);
                    data.extend_from_slice(&p.data[start..start + p.n2]);
                }
            }
        }
        Ok(Self::from_raw(n1, n2, n3, data))
    }

    /// Lateral slices `cols` (half-open) as a new tensor.
    pub fn lateral_range(&self, start: usize, end: usize) -> Result<Self> {
        if start >= end || end > self.n2 {
            return Err(Error::Index { index: end, extent: self.n2 });
        }
        Ok(Self::from_fn(self.n1, end - start, self.n3, |i, j, k| self.data[self.offset(i, start + j, k)]))
    }

    /// Leading `rows × cols` block of every frontal slice.
    pub fn leading_block(&self, rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 || rows > self.n1 || cols > self.n2 {
            return Err(Error::dim(format!("block {rows}x{cols} does not fit {}x{}", self.n1, self.n2)));
        }
        Ok(Self::from_fn(rows, cols, self.n3, |i, j, k| self.data[self.offset(i, j, k)]))
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self::from_raw(self.n1, self.n2, self.n3, self.data.iter().map(|&v| f(v)).collect())
    }

    /// Entrywise combination of two equally shaped tensors.
    pub fn zip_map(&self, other: &Tensor3, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(Error::dim(format!("shapes {:?} and {:?} differ", self.shape(), other.shape())));
        }
        Ok(Self::from_raw(
            self.n1,
            self.n2,
            self.n3,
            self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        ))
    }

    pub fn add(&self, other: &Tensor3) -> Result<Self> {
        self.zip_map(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Tensor3) -> Result<Self> {
        self.zip_map(other, |a, b| a - b)
    }

    pub fn scale(&self, alpha: f64) -> Self {
        self.map(|v| alpha * v)
    }

    /// Largest absolute entrywise difference.
    pub fn max_abs_diff(&self, other: &Tensor3) -> Result<f64> {
        Ok(self.zip_map(other, |a, b| (a - b).abs())?.data.iter().fold(0.0, |m, &v| m.max(v)))
    }

    /// Frobenius norm. Slices are reduced in index order.
    pub fn fro_norm(&self) -> f64 {
        let len = self.n1 * self.n2;
        self.data.chunks(len).map(|s| s.iter().map(|v| v * v).sum::<f64>()).sum::<f64>().sqrt()
    }

    /// Spectral norm `‖bcirc(X)‖₂`, evaluated as the largest singular value
    /// over the Fourier-domain frontal slices.
    pub fn spectral_norm(&self) -> f64 {
        fourier::dft_mode3(self).spectral_norm()
    }

    /// `‖self − other‖_F / ‖self‖_F`, with `self` as the reference.
    pub fn relative_diff(&self, other: &Tensor3) -> Result<f64> {
        let reference = self.fro_norm();
        let diff = self.sub(other)?.fro_norm();
        Ok(if reference == 0.0 { diff } else { diff / reference })
    }
}

impl Index<(usize, usize, usize)> for Tensor3 {
    type Output = f64;

    fn index(&self, (i, j, k): (usize, usize, usize)) -> &f64 {
        assert!(i < self.n1 && j < self.n2 && k < self.n3, "index ({i},{j},{k}) out of bounds");
        &self.data[self.offset(i, j, k)]
    }
}
