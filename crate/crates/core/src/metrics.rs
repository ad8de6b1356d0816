//! PSNR, cPSNR and SSIM over shaved images.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::{Plane, RgbImage};

/// Side of the SSIM Gaussian window.
pub const SSIM_WINDOW: usize = 11;
pub const SSIM_SIGMA: f64 = 1.5;
const SSIM_K1: f64 = 0.01;
const SSIM_K2: f64 = 0.03;

/// How per-channel SSIM values are reduced to one number.
pub const SSIM_CONVENTION: &str = "mean of R, G, B single-scale SSIM";

/// Quality of one reconstruction against its ground truth.
///
/// PSNR fields are `f64::INFINITY` for identical inputs and serialize as
/// `"inf"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    #[serde(with = "db")]
    pub psnr_r: f64,
    #[serde(with = "db")]
    pub psnr_g: f64,
    #[serde(with = "db")]
    pub psnr_b: f64,
    #[serde(with = "db")]
    pub cpsnr: f64,
    pub ssim: f64,
    pub shave: usize,
    /// Size of the compared region after shaving.
    pub region_width: usize,
    pub region_height: usize,
    /// Reserved; never computed.
    pub s_cielab: Option<f64>,
}

/// Serde helpers that write non-finite decibel values as strings.
pub mod db {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &f64, s: S) -> Result<S::Ok, S::Error> {
        if value.is_finite() {
            s.serialize_f64(*value)
        } else if value.is_nan() {
            s.serialize_str("nan")
        } else if *value > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Text(t) => t
                .parse::<f64>()
                .map_err(|_| serde::de::Error::custom(format!("not a decibel value: {t}"))),
        }
    }
}

/// Removes `width` pixels from every side.
pub fn shave(image: &RgbImage, width: usize) -> Result<RgbImage> {
    let min_dim = image.width().min(image.height());
    if 2 * width >= min_dim {
        return Err(Error::TooSmall {
            width: image.width(),
            height: image.height(),
            min: 2 * width + 1,
        });
    }
    Ok(image.crop(
        width,
        width,
        image.width() - 2 * width,
        image.height() - 2 * width,
    ))
}

fn squared_error(reference: &Plane, test: &Plane) -> Result<f64> {
    if !reference.same_dims(test) {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} vs {}x{}",
            reference.width(),
            reference.height(),
            test.width(),
            test.height()
        )));
    }
    Ok(reference
        .data()
        .iter()
        .zip(test.data())
        .map(|(a, b)| (a - b) * (a - b))
        .sum())
}

fn psnr_from_mse(mse: f64, full_scale: f64) -> f64 {
    if mse == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (full_scale * full_scale / mse).log10()
    }
}

/// `10 log10(full_scale^2 / MSE)`; infinite when the planes are identical.
pub fn psnr(reference: &Plane, test: &Plane, full_scale: f64) -> Result<f64> {
    let sse = squared_error(reference, test)?;
    Ok(psnr_from_mse(sse / reference.data().len() as f64, full_scale))
}

/// PSNR with the MSE pooled over all pixels of all three channels.
pub fn cpsnr(reference: &RgbImage, test: &RgbImage) -> Result<f64> {
    let mut sse = 0.0;
    for (a, b) in reference.planes().into_iter().zip(test.planes()) {
        sse += squared_error(a, b)?;
    }
    let n = 3 * reference.width() * reference.height();
    Ok(psnr_from_mse(sse / n as f64, reference.full_scale))
}

fn gaussian_kernel() -> [f64; SSIM_WINDOW] {
    let mut k = [0.0; SSIM_WINDOW];
    let c = (SSIM_WINDOW / 2) as f64;
    for (t, v) in k.iter_mut().enumerate() {
        let x = t as f64 - c;
        *v = (-(x * x) / (2.0 * SSIM_SIGMA * SSIM_SIGMA)).exp();
    }
    let sum: f64 = k.iter().sum();
    k.iter_mut().for_each(|v| *v /= sum);
    k
}

/// Separable "valid" Gaussian filtering of `f(x, y)` per pixel pair.
fn filter_valid(x: &[f64], y: &[f64], w: usize, h: usize, f: impl Fn(f64, f64) -> f64) -> Vec<f64> {
    let k = gaussian_kernel();
    let ow = w - SSIM_WINDOW + 1;
    let oh = h - SSIM_WINDOW + 1;
    let src: Vec<f64> = x.iter().zip(y).map(|(&a, &b)| f(a, b)).collect();
    let mut horiz = vec![0.0; h * ow];
    for i in 0..h {
        let row = &src[i * w..(i + 1) * w];
        for j in 0..ow {
            horiz[i * ow + j] = k.iter().zip(&row[j..j + SSIM_WINDOW]).map(|(a, b)| a * b).sum();
        }
    }
    let mut out = vec![0.0; oh * ow];
    for i in 0..oh {
        for j in 0..ow {
            out[i * ow + j] = k
                .iter()
                .enumerate()
                .map(|(t, kv)| kv * horiz[(i + t) * ow + j])
                .sum();
        }
    }
    out
}

/// Single-scale SSIM of one plane pair, averaged over all valid window
/// positions.
pub fn ssim_plane(reference: &Plane, test: &Plane, full_scale: f64) -> Result<f64> {
    if !reference.same_dims(test) {
        return Err(Error::DimensionMismatch("SSIM planes differ in size".into()));
    }
    let (w, h) = (reference.width(), reference.height());
    if w < SSIM_WINDOW || h < SSIM_WINDOW {
        return Err(Error::TooSmall {
            width: w,
            height: h,
            min: SSIM_WINDOW,
        });
    }
    let (x, y) = (reference.data(), test.data());
    let mu_x = filter_valid(x, y, w, h, |a, _| a);
    let mu_y = filter_valid(x, y, w, h, |_, b| b);
    let xx = filter_valid(x, y, w, h, |a, _| a * a);
    let yy = filter_valid(x, y, w, h, |_, b| b * b);
    let xy = filter_valid(x, y, w, h, |a, b| a * b);

    let c1 = (SSIM_K1 * full_scale).powi(2);
    let c2 = (SSIM_K2 * full_scale).powi(2);
    let n = mu_x.len();
    let total: f64 = (0..n)
        .map(|t| {
            let (mx, my) = (mu_x[t], mu_y[t]);
            let var_x = xx[t] - mx * mx;
            let var_y = yy[t] - my * my;
            let cov = xy[t] - mx * my;
            ((2.0 * mx * my + c1) * (2.0 * cov + c2))
                / ((mx * mx + my * my + c1) * (var_x + var_y + c2))
        })
        .sum();
    Ok(total / n as f64)
}

/// Channel-averaged SSIM (see [`SSIM_CONVENTION`]).
pub fn ssim(reference: &RgbImage, test: &RgbImage) -> Result<f64> {
    let mut sum = 0.0;
    for (a, b) in reference.planes().into_iter().zip(test.planes()) {
        sum += ssim_plane(a, b, reference.full_scale)?;
    }
    Ok(sum / 3.0)
}

/// All metrics of `test` against `reference` after shaving `shave_width`.
pub fn evaluate(reference: &RgbImage, test: &RgbImage, shave_width: usize) -> Result<MetricReport> {
    if !reference.same_dims(test) {
        return Err(Error::DimensionMismatch(
            "reference and reconstruction differ in size".into(),
        ));
    }
    let a = shave(reference, shave_width)?;
    let b = shave(test, shave_width)?;
    let fs = reference.full_scale;
    Ok(MetricReport {
        psnr_r: psnr(&a.r, &b.r, fs)?,
        psnr_g: psnr(&a.g, &b.g, fs)?,
        psnr_b: psnr(&a.b, &b.b, fs)?,
        cpsnr: cpsnr(&a, &b)?,
        ssim: ssim(&a, &b)?,
        shave: shave_width,
        region_width: a.width(),
        region_height: a.height(),
        s_cielab: None,
    })
}
