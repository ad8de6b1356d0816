//! Hamilton-Adams and bilinear demosaicking.
//!
//! Both run on the same border convention as the logistic method: pixels within
//! the boundary margin get the clipped-stencil neighbour average of
//! [`neighbour_average`], and every interior estimate is clipped to the range
//! of its channel's original samples.

use std::f64::consts::SQRT_2;

use crate::cfa::{BayerMosaic, Channel};
use crate::error::{Error, Result};
use crate::image::{Plane, RgbImage};
use crate::led::DEFAULT_BOUNDARY_MARGIN;
use crate::parallel;

/// Curvature weight in the horizontal/vertical variation.
pub const HV_CURVATURE_WEIGHT: f64 = 2.0;
/// Curvature weight in the diagonal/anti-diagonal variation.
pub const DIAGONAL_CURVATURE_WEIGHT: f64 = 2.0 * SQRT_2;

/// First and second derivatives of the mosaic along a pair of directions, and
/// the resulting variations `v = |d1| + |c * d2|`.
///
/// For the horizontal/vertical pair, `a` is horizontal and `b` vertical. For
/// the diagonal pair, `a` is the diagonal (down-right) and `b` the
/// anti-diagonal (up-right).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DirectionalStats {
    pub d1_a: f64,
    pub d2_a: f64,
    pub d1_b: f64,
    pub d2_b: f64,
    pub v_a: f64,
    pub v_b: f64,
}

#[inline(always)]
pub(crate) fn hv_stats(m: &[f64], w: usize, idx: usize) -> DirectionalStats {
    let center2 = 2.0 * m[idx];
    let d1_a = (m[idx + 1] - m[idx - 1]) / 2.0;
    let d2_a = (m[idx + 2] + m[idx - 2] - center2) / 4.0;
    let d1_b = (m[idx + w] - m[idx - w]) / 2.0;
    let d2_b = (m[idx + 2 * w] + m[idx - 2 * w] - center2) / 4.0;
    DirectionalStats {
        d1_a,
        d2_a,
        d1_b,
        d2_b,
        v_a: d1_a.abs() + (HV_CURVATURE_WEIGHT * d2_a).abs(),
        v_b: d1_b.abs() + (HV_CURVATURE_WEIGHT * d2_b).abs(),
    }
}

#[inline(always)]
pub(crate) fn diagonal_stats(m: &[f64], w: usize, idx: usize) -> DirectionalStats {
    let center2 = 2.0 * m[idx];
    let d1_a = (m[idx + w + 1] - m[idx - w - 1]) / DIAGONAL_CURVATURE_WEIGHT;
    let d2_a = (m[idx + 2 * w + 2] + m[idx - 2 * w - 2] - center2) / 8.0;
    let d1_b = (m[idx - w + 1] - m[idx + w - 1]) / DIAGONAL_CURVATURE_WEIGHT;
    let d2_b = (m[idx - 2 * w + 2] + m[idx + 2 * w - 2] - center2) / 8.0;
    DirectionalStats {
        d1_a,
        d2_a,
        d1_b,
        d2_b,
        v_a: d1_a.abs() + (DIAGONAL_CURVATURE_WEIGHT * d2_a).abs(),
        v_b: d1_b.abs() + (DIAGONAL_CURVATURE_WEIGHT * d2_b).abs(),
    }
}

fn check_reach(m: &BayerMosaic, i: usize, j: usize, reach: usize) -> Result<usize> {
    if i >= m.height() || j >= m.width() {
        return Err(Error::OutOfBounds {
            row: i,
            col: j,
            width: m.width(),
            height: m.height(),
        });
    }
    if i < reach || j < reach || i + reach >= m.height() || j + reach >= m.width() {
        return Err(Error::Boundary { row: i, col: j });
    }
    Ok(i * m.width() + j)
}

/// Horizontal (`a`) and vertical (`b`) derivatives of the mosaic at `(i, j)`.
pub fn hv_derivatives(m: &BayerMosaic, i: usize, j: usize) -> Result<DirectionalStats> {
    let idx = check_reach(m, i, j, 2)?;
    Ok(hv_stats(m.data(), m.width(), idx))
}

/// Diagonal (`a`) and anti-diagonal (`b`) derivatives of the mosaic at `(i, j)`.
pub fn diagonal_derivatives(m: &BayerMosaic, i: usize, j: usize) -> Result<DirectionalStats> {
    let idx = check_reach(m, i, j, 2)?;
    Ok(diagonal_stats(m.data(), m.width(), idx))
}

#[inline]
pub(crate) fn in_strip(i: usize, j: usize, width: usize, height: usize, margin: usize) -> bool {
    i < margin || j < margin || i + margin >= height || j + margin >= width
}

const AXIAL: [(isize, isize); 4] = [(-1, 0), (0, -1), (0, 1), (1, 0)];
const DIAGONAL: [(isize, isize); 4] = [(-1, -1), (-1, 1), (1, -1), (1, 1)];

/// Estimate of `channel` at `(i, j)` from same-channel samples only.
///
/// Samples pass through. Otherwise the in-bounds axial samples are averaged,
/// then the in-bounds diagonal samples, and failing both the nearest sample
/// in scan order is copied.
pub fn neighbour_average(m: &BayerMosaic, channel: Channel, i: usize, j: usize) -> f64 {
    let layout = m.layout();
    if layout.site(i, j) == channel {
        return m.get(i, j);
    }
    let (h, w) = (m.height() as isize, m.width() as isize);
    let (ii, jj) = (i as isize, j as isize);
    for ring in [&AXIAL, &DIAGONAL] {
        let mut sum = 0.0;
        let mut count = 0u32;
        for &(di, dj) in ring {
            let (y, x) = (ii + di, jj + dj);
            if y >= 0 && x >= 0 && y < h && x < w && layout.site(y as usize, x as usize) == channel {
                sum += m.get(y as usize, x as usize);
                count += 1;
            }
        }
        if count > 0 {
            return sum / f64::from(count);
        }
    }
    // Unreachable for Bayer mosaics of at least 2x2, kept for completeness.
    for radius in 2..h.max(w) {
        for y in (ii - radius).max(0)..=(ii + radius).min(h - 1) {
            for x in (jj - radius).max(0)..=(jj + radius).min(w - 1) {
                if layout.site(y as usize, x as usize) == channel {
                    return m.get(y as usize, x as usize);
                }
            }
        }
    }
    m.get(i, j)
}

/// Per-channel neighbour averaging over the whole image.
pub fn bilinear_demosaic(m: &BayerMosaic) -> RgbImage {
    let (w, h) = (m.width(), m.height());
    let channel_plane = |channel: Channel| {
        let mut out = vec![0.0; w * h];
        parallel::for_each_row(&mut out, w, |i, row| {
            for (j, v) in row.iter_mut().enumerate() {
                *v = neighbour_average(m, channel, i, j);
            }
        });
        Plane::new(w, h, out).expect("dimensions preserved")
    };
    RgbImage {
        r: channel_plane(Channel::Red),
        g: channel_plane(Channel::Green),
        b: channel_plane(Channel::Blue),
        full_scale: m.full_scale(),
    }
}

/// Green plane with samples passed through, the border strip from
/// [`neighbour_average`], and `interior(data, width, idx)` clipped to the
/// green sample range everywhere else.
pub(crate) fn estimate_green<F>(m: &BayerMosaic, margin: usize, (lo, hi): (f64, f64), interior: F) -> Plane
where
    F: Fn(&[f64], usize, usize) -> f64 + Sync + Send,
{
    let (w, h) = (m.width(), m.height());
    let layout = m.layout();
    let data = m.data();
    let mut out = vec![0.0; w * h];
    parallel::for_each_row(&mut out, w, |i, row| {
        for (j, v) in row.iter_mut().enumerate() {
            let idx = i * w + j;
            *v = if layout.site(i, j) == Channel::Green {
                data[idx]
            } else if in_strip(i, j, w, h, margin) {
                neighbour_average(m, Channel::Green, i, j)
            } else {
                interior(data, w, idx).min(hi).max(lo)
            };
        }
    });
    Plane::new(w, h, out).expect("dimensions preserved")
}

/// Green by selecting the direction of smaller variation, averaging both
/// candidates on an exact tie.
pub fn ha_green(m: &BayerMosaic) -> Plane {
    let range = m.sample_range(Channel::Green);
    estimate_green(m, DEFAULT_BOUNDARY_MARGIN, range, |data, w, idx| {
        let s = hv_stats(data, w, idx);
        let along_h = (data[idx + 1] + data[idx - 1]) / 2.0 - s.d2_a;
        let along_v = (data[idx + w] + data[idx - w]) / 2.0 - s.d2_b;
        if s.v_a < s.v_b {
            along_h
        } else if s.v_a > s.v_b {
            along_v
        } else {
            (along_h + along_v) / 2.0
        }
    })
}

fn ha_channel(m: &BayerMosaic, g_hat: &Plane, channel: Channel, (lo, hi): (f64, f64), margin: usize) -> Plane {
    let (w, h) = (m.width(), m.height());
    let layout = m.layout();
    let data = m.data();
    let gh = g_hat.data();
    let diff = |k: usize| gh[k] - data[k];
    let mut out = vec![0.0; w * h];
    parallel::for_each_row(&mut out, w, |i, row| {
        for (j, v) in row.iter_mut().enumerate() {
            let idx = i * w + j;
            let site = layout.site(i, j);
            *v = if site == channel {
                data[idx]
            } else if in_strip(i, j, w, h, margin) {
                neighbour_average(m, channel, i, j)
            } else {
                let estimate = if site == Channel::Green {
                    if layout.site(i, j - 1) == channel {
                        (diff(idx - 1) + diff(idx + 1)) / 2.0
                    } else {
                        (diff(idx - w) + diff(idx + w)) / 2.0
                    }
                } else {
                    (diff(idx - w - 1) + diff(idx - w + 1) + diff(idx + w - 1) + diff(idx + w + 1))
                        / 4.0
                };
                (gh[idx] - estimate).min(hi).max(lo)
            };
        }
    });
    Plane::new(w, h, out).expect("dimensions preserved")
}

/// Red and blue from bilinear interpolation of the green-minus-chroma planes.
pub fn ha_chroma(m: &BayerMosaic, g_hat: &Plane) -> Result<(Plane, Plane)> {
    if g_hat.width() != m.width() || g_hat.height() != m.height() {
        return Err(Error::DimensionMismatch(
            "green estimate and mosaic differ in size".into(),
        ));
    }
    let ranges = m.sample_ranges();
    Ok((
        ha_channel(m, g_hat, Channel::Red, ranges[0], DEFAULT_BOUNDARY_MARGIN),
        ha_channel(m, g_hat, Channel::Blue, ranges[2], DEFAULT_BOUNDARY_MARGIN),
    ))
}

/// Full Hamilton-Adams reconstruction.
pub fn ha_demosaic(m: &BayerMosaic) -> RgbImage {
    let g = ha_green(m);
    let (r, b) = ha_chroma(m, &g).expect("green plane matches mosaic");
    RgbImage {
        r,
        g,
        b,
        full_scale: m.full_scale(),
    }
}
