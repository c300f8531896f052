//! Third-order tensor algebra under the t-product, with randomized
//! truncated T-SVD (power iteration and block Krylov), low-rank completion,
//! and brute-force block-circulant reference routines.
//!
//! The t-product is evaluated in the Fourier domain: a DFT along the third
//! mode turns it into independent matrix products on frontal slices. With
//! the default `parallel` feature those slice operations run on the rayon
//! pool; without it they run sequentially with identical results.

pub mod completion;
pub mod error;
pub mod factor;
pub mod fourier;
pub mod io;
pub mod linalg;
pub mod metrics;
pub mod oracle;
mod par;
pub mod sketch;
pub mod tensor;

pub use completion::{apply_mask, complete, generate_mask, Completion, CompletionConfig, FillInit, Mask, MaskPattern};
pub use error::{Error, Result};
pub use factor::{pinv, tqr, truncate_tsvd, tsvd, tubal_rank, TqrFactors, TsvdFactors};
pub use fourier::{dft_mode3, idft_mode3, map_fourier_slices, tprod, FourierTensor3};
pub use metrics::{psnr, relative_error, synthetic_case, RunReport, SyntheticCase};
pub use par::is_parallel;
pub use sketch::{
    build_krylov_basis, gaussian_tensor, projector_residual_bound_check, randomized_tsvd_block_krylov,
    randomized_tsvd_power, Algorithm, BasisTruncation, RandomizedTsvd, SketchParams,
};
pub use tensor::Tensor3;
