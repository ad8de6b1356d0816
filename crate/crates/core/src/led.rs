//! Logistic edge-sensing demosaicking.
//!
//! Each missing sample is a blend of two directional estimates. The blend
//! weight is the logistic function of the difference between the two
//! directional variations, so the estimate slides smoothly from one direction
//! to the other instead of switching on a hard comparison.
//!
//! The pipeline runs three passes, each reading only planes completed by an
//! earlier pass:
//!
//! 1. green at red and blue sites (horizontal vs vertical);
//! 2. green-minus-red at blue sites and green-minus-blue at red sites
//!    (diagonal vs anti-diagonal);
//! 3. both color-difference planes at green sites (horizontal vs vertical).
//!
//! Pixels closer than [`LedParams::boundary_margin`] to the border are filled
//! by [`fallback_boundary`] before the passes start.

use serde::{Deserialize, Serialize};

use crate::baselines::{diagonal_stats, estimate_green, hv_stats, in_strip, neighbour_average};
use crate::cfa::{BayerMosaic, Channel};
use crate::error::{Error, Result};
use crate::image::{Plane, RgbImage};
use crate::parallel;

/// Logistic steepness that maximises mean cPSNR on natural images.
pub const DEFAULT_K: f64 = 0.05;
/// Deepest stencil reach (3) plus one guard pixel.
pub const DEFAULT_BOUNDARY_MARGIN: usize = 4;
pub const MIN_BOUNDARY_MARGIN: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LedParams {
    /// Steepness of the logistic weight; must be positive.
    pub k: f64,
    /// Width of the border strip routed to [`fallback_boundary`].
    pub boundary_margin: usize,
}

impl Default for LedParams {
    fn default() -> Self {
        Self {
            k: DEFAULT_K,
            boundary_margin: DEFAULT_BOUNDARY_MARGIN,
        }
    }
}

impl LedParams {
    pub fn new(k: f64, boundary_margin: usize) -> Result<Self> {
        let params = Self { k, boundary_margin };
        params.validate()?;
        Ok(params)
    }

    pub fn with_k(k: f64) -> Result<Self> {
        Self::new(k, DEFAULT_BOUNDARY_MARGIN)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.k.is_finite() && self.k > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "k must be a positive finite number, got {}",
                self.k
            )));
        }
        if self.boundary_margin < MIN_BOUNDARY_MARGIN {
            return Err(Error::InvalidParameter(format!(
                "boundary_margin must be at least {MIN_BOUNDARY_MARGIN}, got {}",
                self.boundary_margin
            )));
        }
        Ok(())
    }

    /// Smallest width/height [`led_demosaic`] accepts.
    pub fn min_dim(&self) -> usize {
        2 * self.boundary_margin + 2
    }
}

/// `1 / (1 + e^(k * delta))`, evaluated without overflow.
#[inline(always)]
pub(crate) fn logistic(delta: f64, k: f64) -> f64 {
    let x = k * delta;
    if x >= 0.0 {
        let e = (-x).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + x.exp())
    }
}

/// Weight given to direction `a` when `delta = v_a - v_b`.
///
/// Strictly decreasing in `delta`, `0.5` at zero, and
/// `logistic_weight(d, k) + logistic_weight(-d, k) == 1` up to rounding.
pub fn logistic_weight(delta: f64, k: f64) -> Result<f64> {
    if !delta.is_finite() {
        return Err(Error::NonFinite(format!("variation difference {delta}")));
    }
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::InvalidParameter(format!("k must be positive, got {k}")));
    }
    Ok(logistic(delta, k))
}

/// A green-minus-red or green-minus-blue plane.
///
/// Entries at the channel's own sample sites are `g_hat - sample` and are
/// flagged in `known`. Other entries are filled by the passes below; until
/// then they hold `NaN`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChromaPlane {
    pub channel: Channel,
    pub values: Plane,
    pub known: Vec<bool>,
}

impl ChromaPlane {
    /// Seeds the plane at the sample sites of `channel`.
    pub fn from_samples(m: &BayerMosaic, g_hat: &Plane, channel: Channel) -> Result<Self> {
        if channel == Channel::Green {
            return Err(Error::InvalidParameter(
                "color-difference planes exist for red and blue only".into(),
            ));
        }
        check_dims(m, g_hat)?;
        let layout = m.layout();
        let mut known = Vec::with_capacity(m.width() * m.height());
        let values = Plane::from_fn(m.width(), m.height(), |i, j| {
            let own = layout.site(i, j) == channel;
            known.push(own);
            if own {
                g_hat.get(i, j) - m.get(i, j)
            } else {
                f64::NAN
            }
        });
        Ok(Self {
            channel,
            values,
            known,
        })
    }

    /// Sets `g_hat - estimate` at every unknown entry of the border strip.
    pub fn fill_border(&mut self, g_hat: &Plane, estimate: &Plane, margin: usize) {
        let (w, h) = (self.values.width(), self.values.height());
        for_each_strip_pixel(w, h, margin, |i, j| {
            if !self.known[i * w + j] {
                self.values.set(i, j, g_hat.get(i, j) - estimate.get(i, j));
            }
        });
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values.get(i, j)
    }

    #[inline]
    pub fn is_known(&self, i: usize, j: usize) -> bool {
        self.known[i * self.values.width() + j]
    }
}

fn check_dims(m: &BayerMosaic, plane: &Plane) -> Result<()> {
    if plane.width() != m.width() || plane.height() != m.height() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} plane for a {}x{} mosaic",
            plane.width(),
            plane.height(),
            m.width(),
            m.height()
        )));
    }
    Ok(())
}

/// Weight of the horizontal estimate at `idx`.
#[inline(always)]
fn hv_weight(data: &[f64], w: usize, idx: usize, k: f64) -> f64 {
    let s = hv_stats(data, w, idx);
    logistic(s.v_a - s.v_b, k)
}

#[inline(always)]
fn green_estimate(data: &[f64], w: usize, idx: usize, k: f64) -> f64 {
    let s = hv_stats(data, w, idx);
    let weight = logistic(s.v_a - s.v_b, k);
    let along_h = (data[idx + 1] + data[idx - 1]) / 2.0 - s.d2_a;
    let along_v = (data[idx + w] + data[idx - w]) / 2.0 - s.d2_b;
    weight * along_h + (1.0 - weight) * along_v
}

/// Color difference at an opposite-chroma site from the diagonal means of
/// `own` and the diagonal curvature of `other`.
#[inline(always)]
fn opposite_estimate(data: &[f64], own: &[f64], other: &[f64], w: usize, idx: usize, k: f64) -> f64 {
    let s = diagonal_stats(data, w, idx);
    let weight = logistic(s.v_a - s.v_b, k);
    let mean_d = (own[idx + w + 1] + own[idx - w - 1]) / 2.0;
    let mean_a = (own[idx - w + 1] + own[idx + w - 1]) / 2.0;
    let center2 = 2.0 * other[idx];
    let curv_d = (other[idx + 2 * w + 2] + other[idx - 2 * w - 2] - center2) / 8.0;
    let curv_a = (other[idx + 2 * w - 2] + other[idx - 2 * w + 2] - center2) / 8.0;
    weight * (mean_d - curv_d) + (1.0 - weight) * (mean_a - curv_a)
}

/// Color difference at a green site. Each curvature is the central
/// difference of two wide slopes, `(c[j+3] - c[j-1]) / 4` and
/// `(c[j+1] - c[j-3]) / 4`, so only non-green sites are read.
#[inline(always)]
fn green_site_estimate(c: &[f64], w: usize, idx: usize, weight: f64) -> f64 {
    let mean_h = (c[idx + 1] + c[idx - 1]) / 2.0;
    let mean_v = (c[idx + w] + c[idx - w]) / 2.0;
    let slope_left = (c[idx + 1] - c[idx - 3]) / 4.0;
    let slope_right = (c[idx + 3] - c[idx - 1]) / 4.0;
    let curv_h = (slope_right - slope_left) / 2.0;
    let slope_up = (c[idx + w] - c[idx - 3 * w]) / 4.0;
    let slope_down = (c[idx + 3 * w] - c[idx - w]) / 4.0;
    let curv_v = (slope_down - slope_up) / 2.0;
    weight * (mean_h - curv_h) + (1.0 - weight) * (mean_v - curv_v)
}

/// Green at every pixel: logistic blend of the horizontal and vertical
/// gradient-corrected estimates, clipped to the green sample range.
pub fn led_green(m: &BayerMosaic, p: &LedParams) -> Result<Plane> {
    p.validate()?;
    Ok(green_plane(m, p, m.sample_range(Channel::Green)))
}

fn green_plane(m: &BayerMosaic, p: &LedParams, range: (f64, f64)) -> Plane {
    let k = p.k;
    estimate_green(m, p.boundary_margin, range, |data, w, idx| green_estimate(data, w, idx, k))
}

/// Fills `own` at the interior sample sites of the opposite chroma.
///
/// The diagonal and anti-diagonal means of `own` are corrected by the
/// curvature of `other` along the same direction and blended with the
/// logistic weight of the mosaic's diagonal variations.
pub fn chroma_at_opposite_sites(
    m: &BayerMosaic,
    g_hat: &Plane,
    own: &ChromaPlane,
    other: &ChromaPlane,
    p: &LedParams,
) -> Result<ChromaPlane> {
    p.validate()?;
    check_dims(m, g_hat)?;
    check_dims(m, &own.values)?;
    check_dims(m, &other.values)?;
    if own.channel == Channel::Green || other.channel != own.channel.opposite() {
        return Err(Error::InvalidParameter(format!(
            "expected a red/blue plane pair, got {:?}/{:?}",
            own.channel, other.channel
        )));
    }
    let mut out = own.clone();
    opposite_pass(m, p, other.channel, own.values.data(), other.values.data(), out.values.data_mut());
    Ok(out)
}

/// Writes [`opposite_estimate`] into `out` at the interior sites of `target`.
fn opposite_pass(m: &BayerMosaic, p: &LedParams, target: Channel, own: &[f64], other: &[f64], out: &mut [f64]) {
    let (w, h) = (m.width(), m.height());
    let (k, margin) = (p.k, p.boundary_margin);
    let layout = m.layout();
    let data = m.data();
    parallel::for_each_row(out, w, |i, row| {
        if i < margin || i + margin >= h {
            return;
        }
        for (j, v) in row.iter_mut().enumerate().take(w - margin).skip(margin) {
            if layout.site(i, j) == target {
                *v = opposite_estimate(data, own, other, w, i * w + j, k);
            }
        }
    });
}

/// Fills `chroma` at the interior green sites, blending the horizontal and
/// vertical estimates with the mosaic's variation weight at each site.
pub fn chroma_at_green_sites(m: &BayerMosaic, chroma: &ChromaPlane, p: &LedParams) -> Result<ChromaPlane> {
    p.validate()?;
    check_dims(m, &chroma.values)?;
    let (w, h) = (m.width(), m.height());
    let layout = m.layout();
    for i in 0..h {
        for j in 0..w {
            if !layout.is_green(i, j) && !chroma.get(i, j).is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "color-difference plane has no value at non-green site ({i}, {j})"
                )));
            }
        }
    }

    let (k, margin) = (p.k, p.boundary_margin);
    let data = m.data();
    let c = chroma.values.data();
    let mut out = chroma.clone();
    parallel::for_each_row(out.values.data_mut(), w, |i, row| {
        if i < margin || i + margin >= h {
            return;
        }
        for (j, v) in row.iter_mut().enumerate().take(w - margin).skip(margin) {
            if layout.is_green(i, j) {
                let idx = i * w + j;
                *v = green_site_estimate(c, w, idx, hv_weight(data, w, idx, k));
            }
        }
    });
    Ok(out)
}

/// Visits the pixels of the `margin`-wide border strip.
fn for_each_strip_pixel(w: usize, h: usize, margin: usize, mut f: impl FnMut(usize, usize)) {
    for i in 0..h {
        if i < margin || i + margin >= h {
            (0..w).for_each(|j| f(i, j));
        } else {
            (0..margin.min(w)).chain(w.saturating_sub(margin).max(margin)..w).for_each(|j| f(i, j));
        }
    }
}

/// Fills every missing value inside the `margin`-wide border strip from
/// same-channel samples (see [`neighbour_average`]). Pixels outside the strip
/// and original samples are returned unchanged.
pub fn fallback_boundary(m: &BayerMosaic, partial: &RgbImage, margin: usize) -> Result<RgbImage> {
    if partial.width() != m.width() || partial.height() != m.height() {
        return Err(Error::DimensionMismatch(
            "partial reconstruction and mosaic differ in size".into(),
        ));
    }
    let layout = m.layout();
    let mut out = partial.clone();
    for (plane, channel) in out
        .planes_mut()
        .into_iter()
        .zip([Channel::Red, Channel::Green, Channel::Blue])
    {
        for_each_strip_pixel(m.width(), m.height(), margin, |i, j| {
            if layout.site(i, j) != channel {
                plane.set(i, j, neighbour_average(m, channel, i, j));
            }
        });
    }
    Ok(out)
}

/// Full logistic edge-sensing reconstruction.
///
/// Runs the same per-pixel arithmetic as [`led_green`],
/// [`chroma_at_opposite_sites`] and [`chroma_at_green_sites`], with the
/// green-site pass fused into the final red/blue recovery so the shared
/// weight is computed once per site.
pub fn led_demosaic(m: &BayerMosaic, p: &LedParams) -> Result<RgbImage> {
    p.validate()?;
    let min = p.min_dim();
    if m.width() < min || m.height() < min {
        return Err(Error::TooSmall {
            width: m.width(),
            height: m.height(),
            min,
        });
    }
    let (w, h) = (m.width(), m.height());
    let (k, margin) = (p.k, p.boundary_margin);
    let layout = m.layout();
    let data = m.data();
    let ranges = m.sample_ranges();

    let green = green_plane(m, p, ranges[Channel::Green.index()]);
    let g = green.data();

    // Color differences at their own sample sites and, from the border
    // fallback, everywhere in the strip.
    let mut seed_r = vec![f64::NAN; w * h];
    let mut seed_b = vec![f64::NAN; w * h];
    for (idx, (cr, cb)) in seed_r.iter_mut().zip(seed_b.iter_mut()).enumerate() {
        let (i, j) = (idx / w, idx % w);
        match layout.site(i, j) {
            Channel::Red => *cr = g[idx] - data[idx],
            Channel::Blue => *cb = g[idx] - data[idx],
            Channel::Green => {}
        }
    }
    for_each_strip_pixel(w, h, margin, |i, j| {
        let idx = i * w + j;
        match layout.site(i, j) {
            Channel::Red => seed_b[idx] = g[idx] - neighbour_average(m, Channel::Blue, i, j),
            Channel::Blue => seed_r[idx] = g[idx] - neighbour_average(m, Channel::Red, i, j),
            Channel::Green => {
                seed_r[idx] = g[idx] - neighbour_average(m, Channel::Red, i, j);
                seed_b[idx] = g[idx] - neighbour_average(m, Channel::Blue, i, j);
            }
        }
    });

    let mut diff_r = seed_r.clone();
    opposite_pass(m, p, Channel::Blue, &seed_r, &seed_b, &mut diff_r);
    let mut diff_b = seed_b.clone();
    opposite_pass(m, p, Channel::Red, &seed_b, &seed_r, &mut diff_b);
    drop((seed_r, seed_b));

    let (r_lo, r_hi) = ranges[Channel::Red.index()];
    let (b_lo, b_hi) = ranges[Channel::Blue.index()];
    let mut red = vec![0.0; w * h];
    let mut blue = vec![0.0; w * h];
    {
        use rayon::prelude::*;
        red.par_chunks_mut(w)
            .zip(blue.par_chunks_mut(w))
            .enumerate()
            .for_each(|(i, (row_r, row_b))| {
                for j in 0..w {
                    let idx = i * w + j;
                    let site = layout.site(i, j);
                    if in_strip(i, j, w, h, margin) {
                        row_r[j] = neighbour_average(m, Channel::Red, i, j);
                        row_b[j] = neighbour_average(m, Channel::Blue, i, j);
                        continue;
                    }
                    match site {
                        Channel::Red => {
                            row_r[j] = data[idx];
                            row_b[j] = (g[idx] - diff_b[idx]).min(b_hi).max(b_lo);
                        }
                        Channel::Blue => {
                            row_r[j] = (g[idx] - diff_r[idx]).min(r_hi).max(r_lo);
                            row_b[j] = data[idx];
                        }
                        Channel::Green => {
                            let weight = hv_weight(data, w, idx, k);
                            let est_r = green_site_estimate(&diff_r, w, idx, weight);
                            let est_b = green_site_estimate(&diff_b, w, idx, weight);
                            row_r[j] = (g[idx] - est_r).min(r_hi).max(r_lo);
                            row_b[j] = (g[idx] - est_b).min(b_hi).max(b_lo);
                        }
                    }
                }
            });
    }

    Ok(RgbImage {
        r: Plane::new(w, h, red)?,
        g: green,
        b: Plane::new(w, h, blue)?,
        full_scale: m.full_scale(),
    })
}
