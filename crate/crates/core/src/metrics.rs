//! Error metrics, run reports and the synthetic test spectra.

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::factor::tqr;
use crate::fourier::tprod;
use crate::sketch::gaussian_tensor_stream;
use crate::tensor::Tensor3;

/// `‖x − xhat‖_F / ‖x‖_F`.
pub fn relative_error(x: &Tensor3, xhat: &Tensor3) -> Result<f64> {
    let reference = x.fro_norm();
    if reference == 0.0 {
        return Err(Error::Value("relative error against a zero reference".into()));
    }
    Ok(x.sub(xhat)?.fro_norm() / reference)
}

/// Peak signal-to-noise ratio on the 0–255 scale, in dB.
/// Identical inputs give `f64::INFINITY`.
pub fn psnr(x: &Tensor3, y: &Tensor3) -> Result<f64> {
    let diff = x.sub(y)?.fro_norm();
    let mse = diff * diff / x.len() as f64;
    if mse == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (255.0 * 255.0 / mse).log10())
}

/// Singular-value profiles for the synthetic benchmark tensors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SyntheticCase {
    /// `σ_m = 1/m⁵`
    InversePower5,
    /// `σ_m = 1/m⁶`
    InversePower6,
    /// `σ_m = 0.5^m`
    Geometric,
}

impl SyntheticCase {
    pub fn from_number(case: u8) -> Result<Self> {
        match case {
            1 => Ok(Self::InversePower5),
            2 => Ok(Self::InversePower6),
            3 => Ok(Self::Geometric),
            other => Err(Error::Config(format!("synthetic case must be 1, 2 or 3, got {other}"))),
        }
    }

    pub fn number(self) -> u8 {
        match self {
            Self::InversePower5 => 1,
            Self::InversePower6 => 2,
            Self::Geometric => 3,
        }
    }

    /// `σ_m` for `m = 1..=n`.
    pub fn spectrum(self, n: usize) -> Vec<f64> {
        (1..=n)
            .map(|m| {
                let m = m as f64;
                match self {
                    Self::InversePower5 => m.powi(-5),
                    Self::InversePower6 => m.powi(-6),
                    Self::Geometric => 0.5f64.powf(m),
                }
            })
            .collect()
    }
}

/// `n × n × n` tensor `U₀ * S₀ * V₀ᵀ` whose Fourier slices all share the
/// singular values of `case`. `U₀`, `V₀` come from T-QR of seeded Gaussian
/// tensors; `S₀` is the diagonal spectrum placed in the first frontal slice.
pub fn synthetic_case(n: usize, case: SyntheticCase, seed: u64) -> Result<Tensor3> {
    if n == 0 {
        return Err(Error::Value("synthetic tensor size must be positive".into()));
    }
    let u0 = tqr(&gaussian_tensor_stream(n, n, n, seed, 1))?.q;
    let v0 = tqr(&gaussian_tensor_stream(n, n, n, seed, 2))?.q;
    let sigma = case.spectrum(n);
    let s0 = Tensor3::from_fn(n, n, n, |i, j, k| if k == 0 && i == j { sigma[i] } else { 0.0 });
    tprod(&tprod(&u0, &s0)?, &v0.t_transpose())
}

/// One measurement record. Serialized with stable field order; a PSNR of
/// `+∞` is written as the string `"inf"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub algorithm: String,
    pub rank: usize,
    pub oversample: usize,
    pub power: usize,
    pub seed: u64,
    pub relative_error: f64,
    #[serde(serialize_with = "ser_psnr", deserialize_with = "de_psnr")]
    pub psnr_db: Option<f64>,
    pub runtime_ms: u64,
    pub extra: BTreeMap<String, String>,
}

fn ser_psnr<S: Serializer>(v: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        None => s.serialize_none(),
        Some(x) if x.is_infinite() && *x > 0.0 => s.serialize_str("inf"),
        Some(x) => s.serialize_f64(*x),
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PsnrRepr {
    Number(f64),
    Text(String),
}

fn de_psnr<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<f64>, D::Error> {
    match Option::<PsnrRepr>::deserialize(d)? {
        None => Ok(None),
        Some(PsnrRepr::Number(x)) => Ok(Some(x)),
        Some(PsnrRepr::Text(t)) if t == "inf" => Ok(Some(f64::INFINITY)),
        Some(PsnrRepr::Text(t)) => Err(serde::de::Error::custom(format!("bad psnr value {t:?}"))),
    }
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
