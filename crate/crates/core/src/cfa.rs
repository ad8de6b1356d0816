//! Bayer sampling geometry and forward mosaicking.
//!
//! All indices are 0-based `(row, col)`. Every phase is expressed as a parity
//! offset into one reference layout, so code that walks a mosaic only ever asks
//! [`CfaLayout::site`] and never branches on the phase itself.
//!
//! ```text
//! RGGB:  R G    BGGR:  B G    GRBG:  G R    GBRG:  G B
//!        G B           G R           B G           R G
//! ```

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::{Plane, RgbImage};

/// Smallest width/height accepted for a mosaic.
pub const MIN_MOSAIC_DIM: usize = 8;

/// Primary color sampled at a photosite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Channel {
    Red,
    Green,
    Blue,
}

impl Channel {
    /// Plane index in `[r, g, b]` order.
    #[inline]
    pub fn index(self) -> usize {
        match self {
            Channel::Red => 0,
            Channel::Green => 1,
            Channel::Blue => 2,
        }
    }

    /// Red for blue and blue for red. Green maps to itself.
    #[inline]
    pub fn opposite(self) -> Channel {
        match self {
            Channel::Red => Channel::Blue,
            Channel::Green => Channel::Green,
            Channel::Blue => Channel::Red,
        }
    }
}

/// Color assignment of the top-left 2x2 tile.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CfaPhase {
    Rggb,
    Bggr,
    Grbg,
    /// Green on even `row + col`, red on odd rows, blue on even rows.
    #[default]
    Gbrg,
}

impl CfaPhase {
    pub const ALL: [CfaPhase; 4] = [CfaPhase::Rggb, CfaPhase::Bggr, CfaPhase::Grbg, CfaPhase::Gbrg];

    /// Parity shift `(rows, cols)` that maps this phase onto [`CfaPhase::Gbrg`].
    #[inline]
    fn offset(self) -> (usize, usize) {
        match self {
            CfaPhase::Gbrg => (0, 0),
            CfaPhase::Rggb => (1, 0),
            CfaPhase::Bggr => (0, 1),
            CfaPhase::Grbg => (1, 1),
        }
    }

    fn from_offset(rows: usize, cols: usize) -> CfaPhase {
        match (rows & 1, cols & 1) {
            (0, 0) => CfaPhase::Gbrg,
            (1, 0) => CfaPhase::Rggb,
            (0, 1) => CfaPhase::Bggr,
            _ => CfaPhase::Grbg,
        }
    }

    /// Phase seen after swapping the two tile rows (a one-row translation).
    pub fn row_swapped(self) -> CfaPhase {
        let (dy, dx) = self.offset();
        CfaPhase::from_offset(dy + 1, dx)
    }

    /// Phase seen after swapping the two tile columns.
    pub fn col_swapped(self) -> CfaPhase {
        let (dy, dx) = self.offset();
        CfaPhase::from_offset(dy, dx + 1)
    }

    /// Code stored in the packed mosaic header.
    pub fn code(self) -> u8 {
        match self {
            CfaPhase::Rggb => 0,
            CfaPhase::Bggr => 1,
            CfaPhase::Grbg => 2,
            CfaPhase::Gbrg => 3,
        }
    }

    pub fn from_code(code: u8) -> Option<CfaPhase> {
        match code {
            0 => Some(CfaPhase::Rggb),
            1 => Some(CfaPhase::Bggr),
            2 => Some(CfaPhase::Grbg),
            3 => Some(CfaPhase::Gbrg),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CfaPhase::Rggb => "rggb",
            CfaPhase::Bggr => "bggr",
            CfaPhase::Grbg => "grbg",
            CfaPhase::Gbrg => "gbrg",
        }
    }
}

impl fmt::Display for CfaPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CfaPhase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rggb" => Ok(CfaPhase::Rggb),
            "bggr" => Ok(CfaPhase::Bggr),
            "grbg" => Ok(CfaPhase::Grbg),
            "gbrg" | "canonical" => Ok(CfaPhase::Gbrg),
            other => Err(Error::InvalidParameter(format!(
                "unknown CFA phase '{other}' (expected rggb, bggr, grbg or gbrg)"
            ))),
        }
    }
}

/// Which primary each pixel of the (infinite) Bayer lattice carries.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CfaLayout {
    pub phase: CfaPhase,
}

impl CfaLayout {
    /// Green where the 1-based `i + j` is even, red on even 1-based rows,
    /// blue on odd 1-based rows. In 0-based indices this is GBRG.
    pub const CANONICAL: CfaLayout = CfaLayout {
        phase: CfaPhase::Gbrg,
    };

    pub const fn new(phase: CfaPhase) -> Self {
        Self { phase }
    }

    /// Channel sampled at `(i, j)`. Defined for every lattice point.
    #[inline]
    pub fn site(&self, i: usize, j: usize) -> Channel {
        let (dy, dx) = self.phase.offset();
        let (ii, jj) = (i + dy, j + dx);
        if (ii + jj) & 1 == 0 {
            Channel::Green
        } else if ii & 1 == 1 {
            Channel::Red
        } else {
            Channel::Blue
        }
    }

    /// Bounds-checked [`site`](Self::site) for a `width x height` image.
    pub fn classify_site(&self, i: usize, j: usize, width: usize, height: usize) -> Result<Channel> {
        if i >= height || j >= width {
            return Err(Error::OutOfBounds {
                row: i,
                col: j,
                width,
                height,
            });
        }
        Ok(self.site(i, j))
    }

    #[inline]
    pub fn is_green(&self, i: usize, j: usize) -> bool {
        self.site(i, j) == Channel::Green
    }
}

/// Single-plane CFA image with its layout and peak representable value.
#[derive(Clone, Debug, PartialEq)]
pub struct BayerMosaic {
    plane: Plane,
    layout: CfaLayout,
    full_scale: f64,
}

impl BayerMosaic {
    pub fn new(plane: Plane, layout: CfaLayout, full_scale: f64) -> Result<Self> {
        if plane.width() < MIN_MOSAIC_DIM || plane.height() < MIN_MOSAIC_DIM {
            return Err(Error::TooSmall {
                width: plane.width(),
                height: plane.height(),
                min: MIN_MOSAIC_DIM,
            });
        }
        if !(full_scale.is_finite() && full_scale > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "full_scale must be positive, got {full_scale}"
            )));
        }
        for (index, &value) in plane.data().iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFinite(format!("mosaic sample {index} is {value}")));
            }
            if value < 0.0 || value > full_scale {
                return Err(Error::InvalidSample {
                    value,
                    index,
                    full_scale,
                });
            }
        }
        Ok(Self {
            plane,
            layout,
            full_scale,
        })
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.plane.width()
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.plane.height()
    }

    #[inline]
    pub fn layout(&self) -> CfaLayout {
        self.layout
    }

    #[inline]
    pub fn full_scale(&self) -> f64 {
        self.full_scale
    }

    #[inline]
    pub fn plane(&self) -> &Plane {
        &self.plane
    }

    #[inline]
    pub fn data(&self) -> &[f64] {
        self.plane.data()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.plane.get(i, j)
    }

    #[inline]
    pub fn site(&self, i: usize, j: usize) -> Channel {
        self.layout.site(i, j)
    }

    pub fn classify_site(&self, i: usize, j: usize) -> Result<Channel> {
        self.layout.classify_site(i, j, self.width(), self.height())
    }

    /// `(min, max)` over the samples of `channel`.
    pub fn sample_range(&self, channel: Channel) -> (f64, f64) {
        self.sample_ranges()[channel.index()]
    }

    /// `(min, max)` of the red, green and blue samples, in that order.
    pub fn sample_ranges(&self) -> [(f64, f64); 3] {
        let mut ranges = [(f64::INFINITY, f64::NEG_INFINITY); 3];
        for i in 0..self.height() {
            for (j, &v) in self.plane.row(i).iter().enumerate() {
                let r = &mut ranges[self.layout.site(i, j).index()];
                r.0 = r.0.min(v);
                r.1 = r.1.max(v);
            }
        }
        ranges
    }
}

/// Samples `image` through the color filter array `layout`.
pub fn mosaic(image: &RgbImage, layout: CfaLayout) -> Result<BayerMosaic> {
    let planes = image.planes();
    let plane = Plane::from_fn(image.width(), image.height(), |i, j| {
        planes[layout.site(i, j).index()].get(i, j)
    });
    BayerMosaic::new(plane, layout, image.full_scale)
}
