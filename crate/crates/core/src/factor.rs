//! T-QR, T-SVD, pseudoinverse and tubal rank.
//!
//! Every factorization runs slice-by-slice in the Fourier domain on the
//! independent slices only, mirrors the rest, and transforms back.
//! Singular vectors carry an arbitrary phase per slice; compare
//! reconstructions or projectors, never raw factor entries.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fourier::{self, dft_mode3, idft_mode3, map_half_spectrum, mirror_spectrum, FourierTensor3};
use crate::linalg::{self, CMatrix, SliceSvd};
use crate::tensor::Tensor3;

/// `X = Q * R` with `Q` having orthonormal lateral slices and every Fourier
/// slice of `R` upper triangular.
#[derive(Clone, Debug)]
pub struct TqrFactors {
    pub q: Tensor3,
    pub r: Tensor3,
}

/// `X ≈ U * S * Vᵀ`.
///
/// `S` is diagonal in every Fourier slice; in the spatial domain its tubes
/// are generally dense. `singular_values[k][m]` is the m-th singular value
/// of Fourier slice `k`, sorted descending within each slice.
#[derive(Clone, Debug)]
pub struct TsvdFactors {
    pub u: Tensor3,
    pub s: Tensor3,
    pub v: Tensor3,
    pub singular_values: Vec<Vec<f64>>,
}

impl TsvdFactors {
    /// Number of retained lateral slices.
    pub fn rank(&self) -> usize {
        self.u.n2()
    }

    /// `U * S * Vᵀ`.
    pub fn reconstruct(&self) -> Result<Tensor3> {
        let us = fourier::tprod(&self.u, &self.s)?;
        fourier::tprod(&us, &self.v.t_transpose())
    }

    /// Largest singular value over all Fourier slices.
    pub fn max_singular_value(&self) -> f64 {
        self.singular_values.iter().flatten().copied().fold(0.0, f64::max)
    }

    /// Tubal rank with the given tolerance, or the default
    /// `max(n1, n2) · ε · σ_max` when `tol` is `None`.
    pub fn tubal_rank(&self, tol: Option<f64>) -> usize {
        let tol = tol.unwrap_or_else(|| self.u.n1().max(self.v.n1()) as f64 * f64::EPSILON * self.max_singular_value());
        (0..self.rank()).filter(|&m| self.singular_values.iter().map(|s| s[m]).fold(0.0, f64::max) > tol).count()
    }
}

fn real_diag(values: &[f64]) -> CMatrix {
    let r = values.len();
    DMatrix::from_fn(r, r, |i, j| if i == j { Complex64::new(values[i], 0.0) } else { Complex64::new(0.0, 0.0) })
}

/// Inverse transform of a half spectrum.
fn assemble(half: Vec<CMatrix>, n3: usize) -> Result<Tensor3> {
    idft_mode3(&FourierTensor3::from_slices(mirror_spectrum(half, n3), true)?)
}

/// Economy T-QR: `Q` is `n1 × min(n1,n2) × n3`, `R` is `min(n1,n2) × n2 × n3`.
pub fn tqr(x: &Tensor3) -> Result<TqrFactors> {
    let n3 = x.n3();
    let (qs, rs): (Vec<_>, Vec<_>) = map_half_spectrum(&dft_mode3(x), |_, s| linalg::qr_economy(s)).into_iter().unzip();
    Ok(TqrFactors { q: assemble(qs, n3)?, r: assemble(rs, n3)? })
}

/// Full (economy-size) T-SVD with `r = min(n1, n2)`.
pub fn tsvd(x: &Tensor3) -> Result<TsvdFactors> {
    let xf = dft_mode3(x);
    let half = map_half_spectrum(&xf, |k, s| linalg::svd_economy(s, k)).into_iter().collect::<Result<Vec<_>>>()?;
    tsvd_from_half(half, x.n3())
}

/// Assembles T-SVD factors from per-slice SVDs of the independent Fourier
/// slices.
pub(crate) fn tsvd_from_half(half: Vec<SliceSvd>, n3: usize) -> Result<TsvdFactors> {
    let mut us = Vec::with_capacity(half.len());
    let mut ss = Vec::with_capacity(half.len());
    let mut vs = Vec::with_capacity(half.len());
    let mut sigma_half = Vec::with_capacity(half.len());
    for svd in half {
        ss.push(real_diag(&svd.sigma));
        us.push(svd.u);
        vs.push(svd.v);
        sigma_half.push(svd.sigma);
    }
    let singular_values = (0..n3).map(|k| sigma_half[if k < sigma_half.len() { k } else { n3 - k }].clone()).collect();
    Ok(TsvdFactors { u: assemble(us, n3)?, s: assemble(ss, n3)?, v: assemble(vs, n3)?, singular_values })
}

/// Keeps the leading `rank` singular triplets.
pub fn truncate_tsvd(f: &TsvdFactors, rank: usize) -> Result<TsvdFactors> {
    if rank == 0 || rank > f.rank() {
        return Err(Error::Rank(format!("truncation rank {rank} outside 1..={}", f.rank())));
    }
    Ok(TsvdFactors {
        u: f.u.lateral_range(0, rank)?,
        s: f.s.leading_block(rank, rank)?,
        v: f.v.lateral_range(0, rank)?,
        singular_values: f.singular_values.iter().map(|s| s[..rank].to_vec()).collect(),
    })
}

/// Moore–Penrose inverse under the t-product (`n2 × n1 × n3`).
///
/// Singular values at or below `max(n1, n2) · ε · σ_max` (taken over all
/// Fourier slices) are treated as zero.
pub fn pinv(x: &Tensor3) -> Result<Tensor3> {
    let (n1, n2, n3) = x.shape();
    let xf = dft_mode3(x);
    let sigma_max = xf.spectral_norm();
    let cutoff = n1.max(n2) as f64 * f64::EPSILON * sigma_max;
    let half = map_half_spectrum(&xf, |k, s| linalg::pinv(s, cutoff, k)).into_iter().collect::<Result<Vec<_>>>()?;
    assemble(half, n3)
}

/// Number of singular tubes whose largest Fourier singular value exceeds
/// `tol` (default `max(n1, n2) · ε · σ_max`).
pub fn tubal_rank(x: &Tensor3, tol: Option<f64>) -> Result<usize> {
    if let Some(t) = tol {
        if t.is_nan() || t < 0.0 {
            return Err(Error::Value(format!("tolerance must be nonnegative, got {t}")));
        }
    }
    let (n1, n2, _) = x.shape();
    let xf = dft_mode3(x);
    let per_slice =
        map_half_spectrum(&xf, |k, s| linalg::singular_values(s, k)).into_iter().collect::<Result<Vec<_>>>()?;
    let r = n1.min(n2);
    let tube_max: Vec<f64> = (0..r).map(|m| per_slice.iter().map(|s| s[m]).fold(0.0, f64::max)).collect();
    let sigma_max = tube_max.first().copied().unwrap_or(0.0);
    let tol = tol.unwrap_or(n1.max(n2) as f64 * f64::EPSILON * sigma_max);
    Ok(tube_max.iter().filter(|&&s| s > tol).count())
}

/// Fourier slices of a tensor, all `n3` of them; handy for checking
/// slice-wise structure such as triangularity.
pub fn fourier_slices(x: &Tensor3) -> Vec<CMatrix> {
    dft_mode3(x).into_slices()
}
