//! Raster ingestion/output and the packed mosaic format.
//!
//! Packed mosaic layout (little-endian):
//!
//! ```text
//! offset  size  field
//! 0       4     magic "LEDM"
//! 4       4     u32 width
//! 8       4     u32 height
//! 12      1     u8 phase code (0 rggb, 1 bggr, 2 grbg, 3 gbrg)
//! 13      8     f64 full_scale
//! 21      4*n   f32 samples, row-major
//! ```

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use image::{DynamicImage, ImageBuffer, Luma, Rgb};

use crate::cfa::{BayerMosaic, CfaLayout, CfaPhase};
use crate::error::{Error, Result};
use crate::image::{Plane, RgbImage};

pub const LEDM_MAGIC: &[u8; 4] = b"LEDM";
const HEADER_LEN: usize = 21;

/// A decoded raster file.
#[derive(Clone, Debug)]
pub enum Raster {
    Rgb(RgbImage),
    Gray { plane: Plane, full_scale: f64 },
}

fn is_16_bit(img: &DynamicImage) -> bool {
    matches!(
        img,
        DynamicImage::ImageLuma16(_)
            | DynamicImage::ImageLumaA16(_)
            | DynamicImage::ImageRgb16(_)
            | DynamicImage::ImageRgba16(_)
    )
}

fn is_gray(img: &DynamicImage) -> bool {
    matches!(
        img,
        DynamicImage::ImageLuma8(_)
            | DynamicImage::ImageLumaA8(_)
            | DynamicImage::ImageLuma16(_)
            | DynamicImage::ImageLumaA16(_)
    )
}

/// Reads a PNG or PNM file. 8-bit data gets `full_scale` 255, 16-bit 65535.
pub fn read_raster(path: impl AsRef<Path>) -> Result<Raster> {
    let img = image::open(path.as_ref())?;
    let (w, h) = (img.width() as usize, img.height() as usize);
    let wide = is_16_bit(&img);
    let full_scale = if wide { 65535.0 } else { 255.0 };
    if is_gray(&img) {
        let data: Vec<f64> = if wide {
            img.to_luma16().into_raw().into_iter().map(f64::from).collect()
        } else {
            img.to_luma8().into_raw().into_iter().map(f64::from).collect()
        };
        return Ok(Raster::Gray {
            plane: Plane::new(w, h, data)?,
            full_scale,
        });
    }
    let interleaved: Vec<f64> = if wide {
        img.to_rgb16().into_raw().into_iter().map(f64::from).collect()
    } else {
        img.to_rgb8().into_raw().into_iter().map(f64::from).collect()
    };
    let channel = |c: usize| Plane::new(w, h, interleaved.iter().skip(c).step_by(3).copied().collect());
    Ok(Raster::Rgb(RgbImage::new(channel(0)?, channel(1)?, channel(2)?, full_scale)?))
}

/// Reads an RGB raster; grayscale files are replicated into three channels.
pub fn read_rgb(path: impl AsRef<Path>) -> Result<RgbImage> {
    match read_raster(path)? {
        Raster::Rgb(img) => Ok(img),
        Raster::Gray { plane, full_scale } => RgbImage::new(plane.clone(), plane.clone(), plane, full_scale),
    }
}

fn quantize(v: f64, max: f64) -> f64 {
    v.round().clamp(0.0, max)
}

/// Writes `img` as PNG or PNM (by extension), 8-bit when `full_scale <= 255`
/// and 16-bit otherwise. Values are rounded and clamped.
pub fn write_rgb(path: impl AsRef<Path>, img: &RgbImage) -> Result<()> {
    let (w, h) = (img.width() as u32, img.height() as u32);
    let planes = img.planes();
    let interleaved = (0..img.width() * img.height()).flat_map(|k| planes.map(|p| p.data()[k]));
    if img.full_scale <= 255.0 {
        let raw: Vec<u8> = interleaved.map(|v| quantize(v, 255.0) as u8).collect();
        let buf: ImageBuffer<Rgb<u8>, _> = ImageBuffer::from_raw(w, h, raw).expect("buffer size");
        buf.save(path)?;
    } else {
        let raw: Vec<u16> = interleaved.map(|v| quantize(v, 65535.0) as u16).collect();
        let buf: ImageBuffer<Rgb<u16>, _> = ImageBuffer::from_raw(w, h, raw).expect("buffer size");
        buf.save(path)?;
    }
    Ok(())
}

/// Writes the mosaic as a single-plane raster.
pub fn write_mosaic_raster(path: impl AsRef<Path>, m: &BayerMosaic) -> Result<()> {
    let (w, h) = (m.width() as u32, m.height() as u32);
    if m.full_scale() <= 255.0 {
        let raw: Vec<u8> = m.data().iter().map(|&v| quantize(v, 255.0) as u8).collect();
        let buf: ImageBuffer<Luma<u8>, _> = ImageBuffer::from_raw(w, h, raw).expect("buffer size");
        buf.save(path)?;
    } else {
        let raw: Vec<u16> = m.data().iter().map(|&v| quantize(v, 65535.0) as u16).collect();
        let buf: ImageBuffer<Luma<u16>, _> = ImageBuffer::from_raw(w, h, raw).expect("buffer size");
        buf.save(path)?;
    }
    Ok(())
}

pub fn encode_ledm<W: Write>(mut out: W, m: &BayerMosaic) -> Result<()> {
    out.write_all(LEDM_MAGIC)?;
    out.write_all(&(m.width() as u32).to_le_bytes())?;
    out.write_all(&(m.height() as u32).to_le_bytes())?;
    out.write_all(&[m.layout().phase.code()])?;
    out.write_all(&m.full_scale().to_le_bytes())?;
    for &v in m.data() {
        out.write_all(&(v as f32).to_le_bytes())?;
    }
    out.flush()?;
    Ok(())
}

/// Samples are stored as `f32`, so values that are not exactly representable
/// come back rounded.
pub fn decode_ledm<R: Read>(mut input: R) -> Result<BayerMosaic> {
    let mut header = [0u8; HEADER_LEN];
    input
        .read_exact(&mut header)
        .map_err(|_| Error::Format("truncated LEDM header".into()))?;
    if &header[0..4] != LEDM_MAGIC {
        return Err(Error::Format("missing LEDM magic".into()));
    }
    let word = |o: usize| u32::from_le_bytes(header[o..o + 4].try_into().unwrap()) as usize;
    let (w, h) = (word(4), word(8));
    let phase = CfaPhase::from_code(header[12])
        .ok_or_else(|| Error::Format(format!("unknown phase code {}", header[12])))?;
    let full_scale = f64::from_le_bytes(header[13..21].try_into().unwrap());
    let n = w
        .checked_mul(h)
        .ok_or_else(|| Error::Format("dimensions overflow".into()))?;
    let mut raw = Vec::new();
    input.read_to_end(&mut raw)?;
    if raw.len() != 4 * n {
        return Err(Error::Format(format!(
            "expected {} sample bytes for {w}x{h}, found {}",
            4 * n,
            raw.len()
        )));
    }
    let data = raw
        .chunks_exact(4)
        .map(|c| f64::from(f32::from_le_bytes(c.try_into().unwrap())))
        .collect();
    BayerMosaic::new(Plane::new(w, h, data)?, CfaLayout::new(phase), full_scale)
}

pub fn write_ledm(path: impl AsRef<Path>, m: &BayerMosaic) -> Result<()> {
    encode_ledm(BufWriter::new(File::create(path)?), m)
}

pub fn read_ledm(path: impl AsRef<Path>) -> Result<BayerMosaic> {
    decode_ledm(BufReader::new(File::open(path)?))
}

/// True for extensions [`read_raster`] understands.
pub fn is_raster_path(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .map(|e| matches!(e.to_ascii_lowercase().as_str(), "png" | "ppm" | "pgm" | "pnm"))
        .unwrap_or(false)
}

pub fn is_ledm_path(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("ledm"))
}
