//! Image and binary tensor files.
//!
//! Tensor file layout: the magic bytes `T3F1`, three little-endian `u64`
//! extents `n1, n2, n3`, then `n1·n2·n3` little-endian `f64` values in
//! slice-major, row-major order.

use std::fs;
use std::path::Path;

use image::{GrayImage, RgbImage};

use crate::error::{Error, Result};
use crate::tensor::Tensor3;

pub const TENSOR_MAGIC: &[u8; 4] = b"T3F1";
const HEADER_LEN: usize = 4 + 3 * 8;

/// Loads an 8-bit image as `height × width × 3` with values in 0..=255.
/// Grayscale input is replicated into three channels.
pub fn load_image(path: impl AsRef<Path>) -> Result<Tensor3> {
    let rgb = image::open(path.as_ref())?.to_rgb8();
    Ok(rgb_to_tensor(&rgb))
}

pub fn rgb_to_tensor(img: &RgbImage) -> Tensor3 {
    let (w, h) = img.dimensions();
    Tensor3::from_fn(h as usize, w as usize, 3, |i, j, k| f64::from(img.get_pixel(j as u32, i as u32)[k]))
}

/// Clamps to [0, 255], rounds, and writes an RGB image. The format follows
/// the file extension (PNG or PNM). Tensors must have three frontal slices.
pub fn save_image(x: &Tensor3, path: impl AsRef<Path>) -> Result<()> {
    tensor_to_rgb(x)?.save(path.as_ref())?;
    Ok(())
}

pub fn tensor_to_rgb(x: &Tensor3) -> Result<RgbImage> {
    let (h, w, c) = x.shape();
    if c != 3 {
        return Err(Error::dim(format!("RGB image needs 3 channels, tensor has {c}")));
    }
    let to_u8 = |v: f64| v.clamp(0.0, 255.0).round() as u8;
    Ok(RgbImage::from_fn(w as u32, h as u32, |j, i| {
        let (i, j) = (i as usize, j as usize);
        image::Rgb([to_u8(x[(i, j, 0)]), to_u8(x[(i, j, 1)]), to_u8(x[(i, j, 2)])])
    }))
}

/// Loads a single-channel image; used for mask files.
pub fn load_gray(path: impl AsRef<Path>) -> Result<GrayImage> {
    Ok(image::open(path.as_ref())?.to_luma8())
}

pub fn encode_tensor(x: &Tensor3) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + 8 * x.len());
    out.extend_from_slice(TENSOR_MAGIC);
    let (n1, n2, n3) = x.shape();
    for n in [n1, n2, n3] {
        out.extend_from_slice(&(n as u64).to_le_bytes());
    }
    for v in x.data() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn decode_tensor(bytes: &[u8]) -> Result<Tensor3> {
    if bytes.len() < HEADER_LEN {
        return Err(Error::Format(format!("header needs {HEADER_LEN} bytes, got {}", bytes.len())));
    }
    if &bytes[..4] != TENSOR_MAGIC {
        return Err(Error::Format(format!("bad magic {:?}", &bytes[..4])));
    }
    let extent = |i: usize| {
        let raw = u64::from_le_bytes(bytes[4 + 8 * i..12 + 8 * i].try_into().unwrap());
        usize::try_from(raw).map_err(|_| Error::Format(format!("extent {raw} overflows")))
    };
    let (n1, n2, n3) = (extent(0)?, extent(1)?, extent(2)?);
    let count = n1
        .checked_mul(n2)
        .and_then(|v| v.checked_mul(n3))
        .filter(|&c| c > 0)
        .ok_or_else(|| Error::Format(format!("invalid extents {n1}x{n2}x{n3}")))?;
    let payload = &bytes[HEADER_LEN..];
    if count.checked_mul(8) != Some(payload.len()) {
        return Err(Error::Format(format!(
            "payload has {} bytes, {n1}x{n2}x{n3} needs {}",
            payload.len(),
            count.saturating_mul(8)
        )));
    }
    let data = payload.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect();
    Tensor3::new(n1, n2, n3, data).map_err(|e| Error::Format(e.to_string()))
}

pub fn write_tensor(x: &Tensor3, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, encode_tensor(x))?;
    Ok(())
}

pub fn read_tensor(path: impl AsRef<Path>) -> Result<Tensor3> {
    decode_tensor(&fs::read(path)?)
}
