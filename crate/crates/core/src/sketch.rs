//! Randomized truncated T-SVD: the classical power-iteration sketch and the
//! block Krylov variant.
//!
//! Both methods draw an `n2 × (R+P) × n3` Gaussian test tensor `B`, build a
//! range basis `Q` for `X`, project `C = Qᵀ * X`, and lift the T-SVD of the
//! small tensor back with `Û = Q * U_C`.
//!
//! * Power iteration orthonormalizes only the last iterate `(X Xᵀ)^q X B`.
//! * Block Krylov orthonormalizes all iterates `[XB, (XXᵀ)XB, …, (XXᵀ)^q XB]`
//!   at once, so its basis contains the power-iteration basis for the same
//!   `B`.
//!
//! No re-orthonormalization happens between Krylov blocks; for strongly
//! decaying spectra keep `q ≤ 4`.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::factor::{tqr, tsvd_from_half, TsvdFactors};
use crate::fourier::{dft_mode3, is_self_conjugate, map_half_spectrum, real_part, tprod};
use crate::linalg::{self, CMatrix, SliceSvd};
use crate::oracle;
use crate::tensor::Tensor3;

/// Which part of the orthonormalized Krylov basis feeds the projection.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BasisTruncation {
    /// All `(q+1)(R+P)` basis slices, capped at `min(n1, n2)`.
    #[default]
    Full,
    /// Only the first `R+P` lateral slices of `Q`.
    ///
    /// Orthonormalization preserves column order, so these span exactly
    /// `X * B`; this mode therefore matches a `q = 0` sketch in accuracy.
    TruncatedToRPlusP,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SketchParams {
    /// Target tubal rank `R`.
    pub rank: usize,
    /// Oversampling `P`.
    pub oversample: usize,
    /// Power-iteration or Krylov depth `q`.
    pub power: usize,
    pub seed: u64,
    pub basis_truncation: BasisTruncation,
}

impl SketchParams {
    pub fn new(rank: usize, oversample: usize, power: usize, seed: u64) -> Self {
        Self { rank, oversample, power, seed, basis_truncation: BasisTruncation::default() }
    }

    pub fn with_basis_truncation(mut self, t: BasisTruncation) -> Self {
        self.basis_truncation = t;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Number of sketch columns, `R + P`.
    pub fn sketch_width(&self) -> usize {
        self.rank + self.oversample
    }

    pub fn validate(&self, x: &Tensor3) -> Result<()> {
        let limit = x.n1().min(x.n2());
        if self.rank == 0 {
            return Err(Error::Rank("target rank must be at least 1".into()));
        }
        if self.sketch_width() > limit {
            return Err(Error::Rank(format!("R + P = {} exceeds min(n1, n2) = {limit}", self.sketch_width())));
        }
        Ok(())
    }
}

/// Records that the Krylov basis was narrower than `(q+1)(R+P)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BasisCap {
    pub requested: usize,
    pub applied: usize,
}

/// Rank-`R` factors plus how the range basis was formed.
#[derive(Clone, Debug)]
pub struct RandomizedTsvd {
    pub factors: TsvdFactors,
    /// Lateral extent of the basis `Q` used for the projection.
    pub basis_width: usize,
    pub basis_cap: Option<BasisCap>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algorithm {
    Power,
    BlockKrylov,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Power => "power",
            Algorithm::BlockKrylov => "block_krylov",
        }
    }

    pub fn run(self, x: &Tensor3, params: &SketchParams) -> Result<RandomizedTsvd> {
        match self {
            Algorithm::Power => randomized_tsvd_power(x, params),
            Algorithm::BlockKrylov => randomized_tsvd_block_krylov(x, params),
        }
    }
}

/// Standard normal tensor from a seeded ChaCha20 stream.
///
/// Entries are drawn sequentially in storage order before any parallel work,
/// so the result depends only on `seed`.
pub fn gaussian_tensor(n1: usize, n2: usize, n3: usize, seed: u64) -> Tensor3 {
    gaussian_tensor_stream(n1, n2, n3, seed, 0)
}

/// Like [`gaussian_tensor`] but on an independent ChaCha stream, used to
/// derive per-iteration or per-trial sketches from one master seed.
pub fn gaussian_tensor_stream(n1: usize, n2: usize, n3: usize, seed: u64, stream: u64) -> Tensor3 {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let data = (0..n1 * n2 * n3).map(|_| StandardNormal.sample(&mut rng)).collect();
    Tensor3::from_raw(n1, n2, n3, data)
}

/// Runs `basis` on every independent Fourier slice `(X̄_k, B̄_k)`, then
/// projects, factors and lifts slice-wise: `C_k = Q_kᴴ X̄_k`,
/// `C_k = U_C Σ V_kᴴ`, `Û_k = Q_k U_C`, keeping the leading `rank` triplets.
///
/// Every step of both algorithms acts on Fourier slices independently, so
/// `X` is transformed once and only the final factors are transformed back.
fn sketch_and_factor<F>(x: &Tensor3, params: &SketchParams, basis: F) -> Result<TsvdFactors>
where
    F: Fn(&CMatrix, &CMatrix) -> CMatrix + Sync + Send,
{
    let (_, n2, n3) = x.shape();
    let bf = dft_mode3(&gaussian_tensor(n2, params.sketch_width(), n3, params.seed));
    let rank = params.rank;
    let half = map_half_spectrum(&dft_mode3(x), |k, xk| {
        let bk = if is_self_conjugate(k, n3) { real_part(bf.slice(k)) } else { bf.slice(k).clone() };
        let q = basis(xk, &bk);
        let c = linalg::matmul(&q.adjoint(), xk);
        let svd = linalg::svd_economy(&c, k)?;
        Ok(SliceSvd {
            u: linalg::matmul(&q, &svd.u.columns(0, rank).into_owned()),
            sigma: svd.sigma[..rank].to_vec(),
            v: svd.v.columns(0, rank).into_owned(),
        })
    });
    tsvd_from_half(half.into_iter().collect::<Result<Vec<_>>>()?, n3)
}

/// `X̄ (X̄ᴴ Y)`.
fn apply_gram(xk: &CMatrix, y: &CMatrix) -> CMatrix {
    linalg::matmul(xk, &linalg::matmul(&xk.adjoint(), y))
}

/// Classical randomized subspace iteration.
pub fn randomized_tsvd_power(x: &Tensor3, params: &SketchParams) -> Result<RandomizedTsvd> {
    params.validate(x)?;
    let factors = sketch_and_factor(x, params, |xk, bk| {
        let mut y = linalg::matmul(xk, bk);
        for _ in 0..params.power {
            y = apply_gram(xk, &y);
        }
        linalg::qr_economy(&y).0
    })?;
    Ok(RandomizedTsvd { factors, basis_width: params.sketch_width(), basis_cap: None })
}

/// `K = [K₀, …, K_q]` with `K₀ = X * B`, `K_i = X * Xᵀ * K_{i−1}`, and an
/// orthonormal basis `Q` of `K` from T-QR.
#[derive(Clone, Debug)]
pub struct KrylovBasis {
    pub k: Tensor3,
    pub q: Tensor3,
}

pub fn build_krylov_basis(x: &Tensor3, b: &Tensor3, depth: usize) -> Result<KrylovBasis> {
    if b.n1() != x.n2() || b.n3() != x.n3() {
        return Err(Error::dim(format!("sketch tensor {:?} incompatible with {:?}", b.shape(), x.shape())));
    }
    let xt = x.t_transpose();
    let mut blocks = Vec::with_capacity(depth + 1);
    blocks.push(tprod(x, b)?);
    for i in 1..=depth {
        let xtk = tprod(&xt, &blocks[i - 1])?;
        blocks.push(tprod(x, &xtk)?);
    }
    let refs: Vec<&Tensor3> = blocks.iter().collect();
    let k = Tensor3::concat_lateral(&refs)?;
    let q = tqr(&k)?.q;
    Ok(KrylovBasis { k, q })
}

/// Width of the basis actually used for projection, after truncation or
/// capping, for a Krylov space of `requested` lateral slices.
fn effective_width(x: &Tensor3, requested: usize, params: &SketchParams) -> (usize, Option<BasisCap>) {
    let width = match params.basis_truncation {
        BasisTruncation::TruncatedToRPlusP => params.sketch_width(),
        BasisTruncation::Full => requested.min(x.n1()).min(x.n2()),
    };
    let cap = (params.basis_truncation == BasisTruncation::Full && width < requested)
        .then_some(BasisCap { requested, applied: width });
    (width, cap)
}

/// Randomized block Krylov truncated T-SVD.
pub fn randomized_tsvd_block_krylov(x: &Tensor3, params: &SketchParams) -> Result<RandomizedTsvd> {
    params.validate(x)?;
    let requested = (params.power + 1) * params.sketch_width();
    let (width, basis_cap) = effective_width(x, requested, params);
    let factors = sketch_and_factor(x, params, |xk, bk| {
        let block = bk.ncols();
        let mut k = CMatrix::zeros(xk.nrows(), requested);
        let mut current = linalg::matmul(xk, bk);
        k.columns_mut(0, block).copy_from(&current);
        for i in 1..=params.power {
            current = apply_gram(xk, &current);
            k.columns_mut(i * block, block).copy_from(&current);
        }
        let q = linalg::qr_economy(&k).0;
        if q.ncols() == width {
            q
        } else {
            q.columns(0, width).into_owned()
        }
    })?;
    Ok(RandomizedTsvd { factors, basis_width: width, basis_cap })
}

/// Both sides of the spectral residual bound for the block Krylov basis.
#[derive(Clone, Copy, Debug)]
pub struct BoundCheck {
    /// `‖X − Q * Qᵀ * X‖₂`.
    pub lhs: f64,
    /// `σ_max(S̃)^{1/(2q+1)}`, with `S̃` the middle factor of the T-SVD of
    /// `Z = [X, (XXᵀ)X, …, (XXᵀ)^q X]`.
    pub rhs: f64,
    /// `‖(I − Q * Qᵀ) * Z‖₂^{1/(2q+1)}`, the sharper intermediate bound.
    pub rhs_projected: f64,
}

impl BoundCheck {
    pub fn holds(&self, slack: f64) -> bool {
        self.lhs <= self.rhs + slack && self.lhs <= self.rhs_projected + slack
    }
}

/// Largest `n1 · n3` accepted by [`projector_residual_bound_check`].
pub const BOUND_CHECK_MAX_ROWS: usize = 200;

/// Evaluates the residual bound with dense block-circulant spectral norms.
pub fn projector_residual_bound_check(x: &Tensor3, params: &SketchParams) -> Result<BoundCheck> {
    let (n1, n2, n3) = x.shape();
    if n1 * n3 > BOUND_CHECK_MAX_ROWS {
        return Err(Error::Size(format!("n1·n3 = {} exceeds {BOUND_CHECK_MAX_ROWS}", n1 * n3)));
    }
    params.validate(x)?;
    let b = gaussian_tensor(n2, params.sketch_width(), n3, params.seed);
    let basis = build_krylov_basis(x, &b, params.power)?;
    let (width, _) = effective_width(x, basis.k.n2(), params);
    let q = if width == basis.q.n2() { basis.q } else { basis.q.lateral_range(0, width)? };

    let xt = x.t_transpose();
    let mut blocks = vec![x.clone()];
    for i in 1..=params.power {
        let xtb = tprod(&xt, &blocks[i - 1])?;
        blocks.push(tprod(x, &xtb)?);
    }
    let refs: Vec<&Tensor3> = blocks.iter().collect();
    let z = Tensor3::concat_lateral(&refs)?;

    let qt = q.t_transpose();
    let project_out = |t: &Tensor3| -> Result<Tensor3> { t.sub(&tprod(&q, &tprod(&qt, t)?)?) };
    let exponent = 1.0 / (2 * params.power + 1) as f64;
    let lhs = oracle::reference_spectral_norm(&project_out(x)?)?;
    let rhs = oracle::reference_spectral_norm(&z)?.powf(exponent);
    let rhs_projected = oracle::reference_spectral_norm(&project_out(&z)?)?.powf(exponent);
    Ok(BoundCheck { lhs, rhs, rhs_projected })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_tensor() {
        let a = gaussian_tensor(4, 5, 3, 42);
        let b = gaussian_tensor(4, 5, 3, 42);
        assert_eq!(a.data(), b.data());
    }

    #[test]
    fn different_seeds_differ_almost_everywhere() {
        let a = gaussian_tensor(10, 10, 10, 1);
        let b = gaussian_tensor(10, 10, 10, 2);
        let same = a.data().iter().zip(b.data()).filter(|(x, y)| x == y).count();
        assert!(same * 100 < a.len());
        let c = gaussian_tensor_stream(10, 10, 10, 1, 7);
        assert_ne!(a.data(), c.data());
    }

    #[test]
    fn gaussian_moments() {
        let g = gaussian_tensor(100, 10, 10, 2024);
        let n = g.len() as f64;
        let mean = g.data().iter().sum::<f64>() / n;
        let var = g.data().iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
        assert!(mean.abs() < 4.0 / n.sqrt(), "mean {mean}");
        assert!((var - 1.0).abs() < 0.1, "variance {var}");
    }

    #[test]
    fn params_validation() {
        let x = Tensor3::zeros(6, 5, 2);
        assert!(SketchParams::new(3, 2, 1, 0).validate(&x).is_ok());
        assert!(matches!(SketchParams::new(4, 2, 1, 0).validate(&x), Err(Error::Rank(_))));
        assert!(matches!(SketchParams::new(0, 2, 1, 0).validate(&x), Err(Error::Rank(_))));
        assert!(matches!(randomized_tsvd_power(&x, &SketchParams::new(4, 2, 1, 0)), Err(Error::Rank(_))));
    }

    #[test]
    fn krylov_extents() {
        let x = gaussian_tensor(30, 25, 3, 5);
        let b = gaussian_tensor(25, 7, 3, 6);
        let k0 = build_krylov_basis(&x, &b, 0).unwrap();
        assert_eq!(k0.k.shape(), (30, 7, 3));
        assert_eq!(k0.q.shape(), (30, 7, 3));
        assert_eq!(k0.k, tprod(&x, &b).unwrap());
        let k2 = build_krylov_basis(&x, &b, 2).unwrap();
        assert_eq!(k2.k.n2(), 21);
        let bad = gaussian_tensor(24, 7, 3, 6);
        assert!(matches!(build_krylov_basis(&x, &bad, 1), Err(Error::Dimension(_))));
    }

    #[test]
    fn basis_cap_is_reported() {
        let x = gaussian_tensor(12, 10, 2, 3);
        let params = SketchParams::new(3, 2, 2, 9);
        let out = randomized_tsvd_block_krylov(&x, &params).unwrap();
        assert_eq!(out.basis_cap, Some(BasisCap { requested: 15, applied: 10 }));
        assert_eq!(out.basis_width, 10);
        let trunc = randomized_tsvd_block_krylov(&x, &params.with_basis_truncation(BasisTruncation::TruncatedToRPlusP))
            .unwrap();
        assert_eq!(trunc.basis_cap, None);
        assert_eq!(trunc.basis_width, 5);
    }

    #[test]
    fn bound_check_size_guard() {
        let x = Tensor3::zeros(70, 5, 3);
        assert!(matches!(projector_residual_bound_check(&x, &SketchParams::new(1, 0, 0, 0)), Err(Error::Size(_))));
    }
}
