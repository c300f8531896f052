//! DFT along the third mode and the t-product.
//!
//! The forward transform is unnormalized and the inverse carries the `1/n3`
//! factor, matching `fft`/`ifft`. For a real tensor the spectrum satisfies
//! `X̄(k) = conj(X̄(n3 − k))` (zero-based), so slice algorithms only evaluate
//! the first `⌈(n3+1)/2⌉` slices and mirror the rest.

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::par;
use crate::tensor::Tensor3;

/// Imaginary residue, relative to the real result, at which `idft_mode3`
/// reports a conjugate-symmetry violation instead of discarding it.
pub const SYMMETRY_ERROR_TOL: f64 = 1e-6;

/// Number of leading Fourier slices that determine a real tensor's spectrum.
pub fn independent_slices(n3: usize) -> usize {
    n3 / 2 + 1
}

/// Complex tensor after a DFT along mode 3, stored as one matrix per slice.
#[derive(Clone, Debug)]
pub struct FourierTensor3 {
    n1: usize,
    n2: usize,
    slices: Vec<CMatrix>,
    symmetry_valid: bool,
}

impl FourierTensor3 {
    /// Wraps raw spectral slices. `symmetry_valid` records whether the
    /// caller vouches for conjugate symmetry; it is not verified here.
    pub fn from_slices(slices: Vec<CMatrix>, symmetry_valid: bool) -> Result<Self> {
        let first = slices.first().ok_or_else(|| Error::dim("no Fourier slices"))?;
        let (n1, n2) = first.shape();
        if n1 == 0 || n2 == 0 || slices.iter().any(|s| s.shape() != (n1, n2)) {
            return Err(Error::dim("Fourier slices differ in shape"));
        }
        Ok(Self { n1, n2, slices, symmetry_valid })
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        (self.n1, self.n2, self.slices.len())
    }

    pub fn n3(&self) -> usize {
        self.slices.len()
    }

    pub fn slice(&self, k: usize) -> &CMatrix {
        &self.slices[k]
    }

    pub fn slices(&self) -> &[CMatrix] {
        &self.slices
    }

    pub fn into_slices(self) -> Vec<CMatrix> {
        self.slices
    }

    pub fn symmetry_valid(&self) -> bool {
        self.symmetry_valid
    }

    /// Frobenius norm of the block-diagonal matrix `bdiag(X̄)`.
    pub fn fro_norm(&self) -> f64 {
        self.slices.iter().map(|s| s.norm_squared()).sum::<f64>().sqrt()
    }

    /// Largest singular value over all slices (`= ‖bcirc(X)‖₂`). NaN if a
    /// slice SVD fails to converge.
    pub fn spectral_norm(&self) -> f64 {
        let half = if self.symmetry_valid { independent_slices(self.n3()) } else { self.n3() };
        par::map_indexed(half, |k| match linalg::singular_values(&self.slices[k], k) {
            Ok(s) => s.first().copied().unwrap_or(0.0),
            Err(_) => f64::NAN,
        })
        .into_iter()
        .fold(0.0, |acc, s| if acc.is_nan() || s.is_nan() { f64::NAN } else { acc.max(s) })
    }
}

fn plan(n3: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    let mut planner = FftPlanner::new();
    if inverse {
        planner.plan_fft_inverse(n3)
    } else {
        planner.plan_fft_forward(n3)
    }
}

/// Runs `fft` over every tube of an `n1 × n2 × n3` buffer laid out
/// tube-contiguous (`(i*n2 + j)*n3 + k`).
fn transform_tubes(tubes: &mut [Complex64], n3: usize, fft: &Arc<dyn Fft<f64>>) {
    // Batch a few thousand tubes per task so small transforms stay cheap.
    let per_task = (4096 / n3).max(1) * n3;
    par::for_each_chunk_mut(tubes, per_task, |chunk| {
        let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
        fft.process_with_scratch(chunk, &mut scratch);
    });
}

/// Forward DFT of every tube `x(i, j, :)`.
pub fn dft_mode3(x: &Tensor3) -> FourierTensor3 {
    let (n1, n2, n3) = x.shape();
    let fft = plan(n3, false);
    let mut tubes = vec![Complex64::new(0.0, 0.0); n1 * n2 * n3];
    for k in 0..n3 {
        for (p, &v) in x.slice_data(k).iter().enumerate() {
            tubes[p * n3 + k] = Complex64::new(v, 0.0);
        }
    }
    if n3 > 1 {
        transform_tubes(&mut tubes, n3, &fft);
    }
    let slices = (0..n3).map(|k| DMatrix::from_fn(n1, n2, |i, j| tubes[(i * n2 + j) * n3 + k])).collect();
    FourierTensor3 { n1, n2, slices, symmetry_valid: true }
}

/// Inverse DFT along mode 3 with `1/n3` normalization.
///
/// The imaginary part of the result is discarded. If its Frobenius norm is
/// `SYMMETRY_ERROR_TOL` or more relative to the real part, the spectrum was
/// not conjugate-symmetric and an error is returned.
pub fn idft_mode3(xf: &FourierTensor3) -> Result<Tensor3> {
    idft_mode3_with_residue(xf).map(|(x, _)| x)
}

/// [`idft_mode3`] that also returns the discarded imaginary residue
/// `‖Im‖_F`.
pub fn idft_mode3_with_residue(xf: &FourierTensor3) -> Result<(Tensor3, f64)> {
    let (n1, n2, n3) = xf.shape();
    let mut tubes = vec![Complex64::new(0.0, 0.0); n1 * n2 * n3];
    for (k, s) in xf.slices.iter().enumerate() {
        for i in 0..n1 {
            for j in 0..n2 {
                tubes[(i * n2 + j) * n3 + k] = s[(i, j)];
            }
        }
    }
    if n3 > 1 {
        transform_tubes(&mut tubes, n3, &plan(n3, true));
    }
    let scale = 1.0 / n3 as f64;
    let mut data = vec![0.0; n1 * n2 * n3];
    let (mut re2, mut im2) = (0.0, 0.0);
    for k in 0..n3 {
        for p in 0..n1 * n2 {
            let z = tubes[p * n3 + k] * scale;
            data[k * n1 * n2 + p] = z.re;
            re2 += z.re * z.re;
            im2 += z.im * z.im;
        }
    }
    let (norm, residue) = (re2.sqrt(), im2.sqrt());
    if !norm.is_finite() || !residue.is_finite() {
        return Err(Error::Numerical { slice: 0, message: "non-finite inverse DFT".into() });
    }
    if residue > SYMMETRY_ERROR_TOL * norm && residue > f64::MIN_POSITIVE {
        return Err(Error::Symmetry { residue, norm });
    }
    Ok((Tensor3::from_raw(n1, n2, n3, data), residue))
}

/// Slices equal to their own mirror (`k = 0`, and `k = n3/2` for even
/// `n3`) are exactly real in the spectrum of a real tensor.
pub fn is_self_conjugate(k: usize, n3: usize) -> bool {
    k == 0 || 2 * k == n3
}

pub(crate) fn real_part(s: &CMatrix) -> CMatrix {
    s.map(|z| Complex64::new(z.re, 0.0))
}

/// Evaluates `f` on the independent slices `0..⌈(n3+1)/2⌉`, in parallel,
/// returning the results by slice position.
///
/// Self-conjugate slices are handed to `f` with their rounding-level
/// imaginary parts removed. Otherwise factorizations of those slices can
/// pick up arbitrary complex phases in near-null directions, and the
/// inverse transform would no longer be real.
pub fn map_half_spectrum<T, F>(xf: &FourierTensor3, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize, &CMatrix) -> T + Sync + Send,
{
    let n3 = xf.n3();
    par::map_indexed(independent_slices(n3), |k| {
        if is_self_conjugate(k, n3) {
            f(k, &real_part(&xf.slices[k]))
        } else {
            f(k, &xf.slices[k])
        }
    })
}

/// Completes a half spectrum to all `n3` slices with the conjugate rule.
/// Self-conjugate slices are made exactly real.
pub fn mirror_spectrum(mut half: Vec<CMatrix>, n3: usize) -> Vec<CMatrix> {
    debug_assert_eq!(half.len(), independent_slices(n3));
    for (k, s) in half.iter_mut().enumerate() {
        if is_self_conjugate(k, n3) {
            *s = real_part(s);
        }
    }
    for k in half.len()..n3 {
        let mirrored = half[n3 - k].map(|z| z.conj());
        half.push(mirrored);
    }
    half
}

/// Applies a conjugation-preserving slice function to the independent
/// slices and fills the remainder by conjugate symmetry.
pub fn map_fourier_slices<F>(xf: &FourierTensor3, f: F) -> Result<FourierTensor3>
where
    F: Fn(&CMatrix) -> CMatrix + Sync + Send,
{
    let half = map_half_spectrum(xf, |_, s| f(s));
    let shape = half[0].shape();
    if half.iter().any(|s| s.shape() != shape) {
        return Err(Error::dim("slice function returned inconsistent extents"));
    }
    FourierTensor3::from_slices(mirror_spectrum(half, xf.n3()), true)
}

/// Slice-wise product of two spectra using the conjugate-symmetry shortcut.
pub fn spectral_product(xf: &FourierTensor3, yf: &FourierTensor3) -> Result<FourierTensor3> {
    let (n1, n2, n3) = xf.shape();
    let (m2, n4, m3) = yf.shape();
    if n2 != m2 || n3 != m3 {
        return Err(Error::dim(format!("t-product of {n1}x{n2}x{n3} and {m2}x{n4}x{m3}")));
    }
    let half = map_half_spectrum(xf, |k, a| linalg::matmul(a, &yf.slices[k]));
    FourierTensor3::from_slices(mirror_spectrum(half, n3), true)
}

/// The t-product `X * Y` of an `n1 × n2 × n3` and an `n2 × n4 × n3` tensor.
pub fn tprod(x: &Tensor3, y: &Tensor3) -> Result<Tensor3> {
    if x.n2() != y.n1() || x.n3() != y.n3() {
        return Err(Error::dim(format!("t-product of {:?} and {:?}", x.shape(), y.shape())));
    }
    idft_mode3(&spectral_product(&dft_mode3(x), &dft_mode3(y))?)
}
