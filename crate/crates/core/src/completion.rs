//! Low-rank tensor completion by alternating projection.
//!
//! Each round replaces the current fill `C` by a randomized rank-`R`
//! approximation `X = L(C)` and then re-imposes the observed entries:
//! `C ← T ⊙ M + (1 − T) ⊙ X`.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::metrics::RunReport;
use crate::sketch::{Algorithm, SketchParams};
use crate::tensor::Tensor3;

/// Binary observation tensor: 1 = observed, 0 = missing.
#[derive(Clone, Debug, PartialEq)]
pub struct Mask {
    indicator: Tensor3,
    observed: usize,
}

impl Mask {
    pub fn from_tensor(indicator: Tensor3) -> Result<Self> {
        if let Some(v) = indicator.data().iter().find(|&&v| v != 0.0 && v != 1.0) {
            return Err(Error::Value(format!("mask entries must be 0 or 1, found {v}")));
        }
        let observed = indicator.data().iter().filter(|&&v| v == 1.0).count();
        Ok(Self { indicator, observed })
    }

    pub fn all_observed(n1: usize, n2: usize, n3: usize) -> Self {
        Self { indicator: Tensor3::from_fn(n1, n2, n3, |_, _, _| 1.0), observed: n1 * n2 * n3 }
    }

    /// Mask from per-pixel flags (row-major, `true` = observed) shared by
    /// all `n3` channels.
    pub fn from_pixels(n1: usize, n2: usize, n3: usize, observed: &[bool]) -> Result<Self> {
        if observed.len() != n1 * n2 {
            return Err(Error::dim(format!("{} pixel flags for a {n1}x{n2} image", observed.len())));
        }
        let t = Tensor3::from_fn(n1, n2, n3, |i, j, _| if observed[i * n2 + j] { 1.0 } else { 0.0 });
        Self::from_tensor(t)
    }

    /// Mask image: zero pixels are missing, anything else observed.
    pub fn from_gray_image(img: &image::GrayImage, n3: usize) -> Result<Self> {
        let (w, h) = img.dimensions();
        let flags: Vec<bool> =
            (0..h).flat_map(|i| (0..w).map(move |j| (i, j))).map(|(i, j)| img.get_pixel(j, i)[0] != 0).collect();
        Self::from_pixels(h as usize, w as usize, n3, &flags)
    }

    pub fn indicator(&self) -> &Tensor3 {
        &self.indicator
    }

    pub fn observed_count(&self) -> usize {
        self.observed
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        self.indicator.shape()
    }

    pub fn is_observed(&self, i: usize, j: usize, k: usize) -> bool {
        self.indicator[(i, j, k)] == 1.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MaskPattern {
    /// Uniformly random pixels.
    Random,
    /// Whole rows, evenly spaced.
    Rows,
    /// Whole columns, evenly spaced.
    Columns,
}

/// `x ⊙ t`.
pub fn apply_mask(x: &Tensor3, t: &Mask) -> Result<Tensor3> {
    x.zip_map(&t.indicator, |v, m| v * m)
}

/// `count` indices in `0..n`, evenly spread.
fn evenly_spaced(n: usize, count: usize) -> Vec<usize> {
    (0..count).map(|c| ((2 * c + 1) * n) / (2 * count)).collect()
}

/// Generates a pixel mask removing `missing_ratio` of the `n1 × n2` pixels
/// (jointly across channels). Random masks remove exactly
/// `round(ratio · n1 · n2)` pixels; line masks remove
/// `round(ratio · n1)` rows or `round(ratio · n2)` columns.
pub fn generate_mask(
    n1: usize,
    n2: usize,
    n3: usize,
    pattern: MaskPattern,
    missing_ratio: f64,
    seed: u64,
) -> Result<Mask> {
    if !(0.0..1.0).contains(&missing_ratio) {
        return Err(Error::Value(format!("missing ratio must be in [0, 1), got {missing_ratio}")));
    }
    let mut observed = vec![true; n1 * n2];
    match pattern {
        MaskPattern::Random => {
            let missing = (missing_ratio * (n1 * n2) as f64).round() as usize;
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            for p in sample(&mut rng, n1 * n2, missing) {
                observed[p] = false;
            }
        }
        MaskPattern::Rows => {
            let rows = (missing_ratio * n1 as f64).round() as usize;
            for i in evenly_spaced(n1, rows) {
                observed[i * n2..(i + 1) * n2].fill(false);
            }
        }
        MaskPattern::Columns => {
            let cols = (missing_ratio * n2 as f64).round() as usize;
            for j in evenly_spaced(n2, cols) {
                for i in 0..n1 {
                    observed[i * n2 + j] = false;
                }
            }
        }
    }
    Mask::from_pixels(n1, n2, n3, &observed)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum FillInit {
    /// Missing entries start at 0.
    #[default]
    ZeroFill,
    /// Missing entries start at the mean of the observed entries.
    MeanFill,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CompletionConfig {
    pub sketch: SketchParams,
    pub iters: usize,
    pub algorithm: Algorithm,
    pub init: FillInit,
}

impl CompletionConfig {
    pub fn new(sketch: SketchParams, iters: usize, algorithm: Algorithm) -> Self {
        Self { sketch, iters, algorithm, init: FillInit::default() }
    }

    fn validate(&self, x: &Tensor3) -> Result<()> {
        if self.iters == 0 {
            return Err(Error::Config("completion needs at least one iteration".into()));
        }
        self.sketch.validate(x).map_err(|e| Error::Config(e.to_string()))
    }
}

/// Step-by-step completion state.
pub struct CompletionRun<'a> {
    observed: &'a Tensor3,
    mask: &'a Mask,
    cfg: CompletionConfig,
    fill: Tensor3,
    estimate: Option<Tensor3>,
    iteration: usize,
    observed_norm: f64,
    started: Instant,
}

impl<'a> CompletionRun<'a> {
    pub fn new(observed: &'a Tensor3, mask: &'a Mask, cfg: CompletionConfig) -> Result<Self> {
        if observed.shape() != mask.shape() {
            return Err(Error::dim(format!("data {:?} and mask {:?} differ", observed.shape(), mask.shape())));
        }
        cfg.validate(observed)?;
        let fill = match cfg.init {
            FillInit::ZeroFill => apply_mask(observed, mask)?,
            FillInit::MeanFill => {
                let masked = apply_mask(observed, mask)?;
                let mean =
                    if mask.observed == 0 { 0.0 } else { masked.data().iter().sum::<f64>() / mask.observed as f64 };
                masked.zip_map(&mask.indicator, |v, m| if m == 1.0 { v } else { mean })?
            }
        };
        let observed_norm = apply_mask(observed, mask)?.fro_norm();
        Ok(Self { observed, mask, cfg, fill, estimate: None, iteration: 0, observed_norm, started: Instant::now() })
    }

    /// Current fill `C`, which agrees with the data on observed entries.
    pub fn fill(&self) -> &Tensor3 {
        &self.fill
    }

    /// Latest low-rank estimate `X`.
    pub fn estimate(&self) -> Option<&Tensor3> {
        self.estimate.as_ref()
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    /// One low-rank projection followed by re-imposing the observations.
    /// Every iteration draws its sketch from its own stream of the seed.
    pub fn step(&mut self) -> Result<RunReport> {
        let params = self.cfg.sketch.with_seed(iteration_seed(self.cfg.sketch.seed, self.iteration));
        let approx = self.cfg.algorithm.run(&self.fill, &params)?;
        let x = approx.factors.reconstruct()?;

        let mask = &self.mask.indicator;
        let fill_data: Vec<f64> = self
            .observed
            .data()
            .iter()
            .zip(x.data())
            .zip(mask.data())
            .map(|((&m, &v), &t)| if t == 1.0 { m } else { v })
            .collect();
        let (n1, n2, n3) = x.shape();
        self.fill = Tensor3::from_raw(n1, n2, n3, fill_data);

        let residual = apply_mask(&x, self.mask)?.sub(&apply_mask(self.observed, self.mask)?)?.fro_norm();
        let relative = if self.observed_norm > 0.0 { residual / self.observed_norm } else { residual };
        self.estimate = Some(x);
        self.iteration += 1;

        let mut extra = BTreeMap::new();
        extra.insert("iteration".to_string(), self.iteration.to_string());
        Ok(RunReport {
            algorithm: self.cfg.algorithm.name().to_string(),
            rank: self.cfg.sketch.rank,
            oversample: self.cfg.sketch.oversample,
            power: self.cfg.sketch.power,
            seed: self.cfg.sketch.seed,
            relative_error: relative,
            psnr_db: None,
            runtime_ms: self.started.elapsed().as_millis() as u64,
            extra,
        })
    }
}

/// Seed for completion round `iteration`, derived from the master seed.
fn iteration_seed(master: u64, iteration: usize) -> u64 {
    // splitmix64 finalizer: distinct, well-mixed seeds per round.
    let mut z = master ^ (iteration as u64).wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Result of [`complete`]: the final low-rank estimate and one report per
/// iteration whose `relative_error` is the observed-entry residual
/// `‖P_T(X) − P_T(M)‖_F / ‖P_T(M)‖_F`.
#[derive(Clone, Debug)]
pub struct Completion {
    pub recovered: Tensor3,
    pub trace: Vec<RunReport>,
}

/// Runs `cfg.iters` rounds of completion on `observed` under `mask`.
pub fn complete(observed: &Tensor3, mask: &Mask, cfg: &CompletionConfig) -> Result<Completion> {
    let mut run = CompletionRun::new(observed, mask, *cfg)?;
    let trace = (0..cfg.iters).map(|_| run.step()).collect::<Result<Vec<_>>>()?;
    let recovered = run.estimate.take().expect("at least one iteration ran");
    Ok(Completion { recovered, trace })
}
