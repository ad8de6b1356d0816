//! Floating-point image containers.

use crate::error::{Error, Result};

/// A single row-major plane of floating samples.
#[derive(Clone, Debug, PartialEq)]
pub struct Plane {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl Plane {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != width * height {
            return Err(Error::DimensionMismatch(format!(
                "{} samples for a {width}x{height} plane",
                data.len()
            )));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn filled(width: usize, height: usize, value: f64) -> Self {
        Self {
            width,
            height,
            data: vec![value; width * height],
        }
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(width * height);
        for i in 0..height {
            for j in 0..width {
                data.push(f(i, j));
            }
        }
        Self {
            width,
            height,
            data,
        }
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    /// Sample at row `i`, column `j`. Panics when out of range.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.width + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.width + j] = value;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.width..(i + 1) * self.width]
    }

    pub fn same_dims(&self, other: &Plane) -> bool {
        self.width == other.width && self.height == other.height
    }

    /// Copy of the `[top, top + height) x [left, left + width)` window.
    pub fn crop(&self, top: usize, left: usize, width: usize, height: usize) -> Plane {
        let mut data = Vec::with_capacity(width * height);
        for i in top..top + height {
            data.extend_from_slice(&self.row(i)[left..left + width]);
        }
        Plane {
            width,
            height,
            data,
        }
    }

    pub fn min_max(&self) -> (f64, f64) {
        self.data
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            })
    }
}

/// Three-channel image in planar layout, e.g. ground truth or a demosaicked result.
#[derive(Clone, Debug, PartialEq)]
pub struct RgbImage {
    pub r: Plane,
    pub g: Plane,
    pub b: Plane,
    pub full_scale: f64,
}

impl RgbImage {
    pub fn new(r: Plane, g: Plane, b: Plane, full_scale: f64) -> Result<Self> {
        if !r.same_dims(&g) || !r.same_dims(&b) {
            return Err(Error::DimensionMismatch(
                "red, green and blue planes differ in size".into(),
            ));
        }
        if !(full_scale.is_finite() && full_scale > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "full_scale must be positive, got {full_scale}"
            )));
        }
        Ok(Self { r, g, b, full_scale })
    }

    /// Image whose channels are the constants `(r, g, b)`.
    pub fn constant(width: usize, height: usize, rgb: [f64; 3], full_scale: f64) -> Self {
        Self {
            r: Plane::filled(width, height, rgb[0]),
            g: Plane::filled(width, height, rgb[1]),
            b: Plane::filled(width, height, rgb[2]),
            full_scale,
        }
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.r.width()
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.r.height()
    }

    pub fn planes(&self) -> [&Plane; 3] {
        [&self.r, &self.g, &self.b]
    }

    pub fn planes_mut(&mut self) -> [&mut Plane; 3] {
        [&mut self.r, &mut self.g, &mut self.b]
    }

    pub fn same_dims(&self, other: &RgbImage) -> bool {
        self.r.same_dims(&other.r)
    }

    /// Checks that every value is finite and within `[0, full_scale]`.
    pub fn validate_range(&self) -> Result<()> {
        for plane in self.planes() {
            for (index, &value) in plane.data().iter().enumerate() {
                if !value.is_finite() {
                    return Err(Error::NonFinite(format!("sample {index} is {value}")));
                }
                if value < 0.0 || value > self.full_scale {
                    return Err(Error::InvalidSample {
                        value,
                        index,
                        full_scale: self.full_scale,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn crop(&self, top: usize, left: usize, width: usize, height: usize) -> RgbImage {
        RgbImage {
            r: self.r.crop(top, left, width, height),
            g: self.g.crop(top, left, width, height),
            b: self.b.crop(top, left, width, height),
            full_scale: self.full_scale,
        }
    }
}
