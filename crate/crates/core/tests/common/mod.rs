//! Unoptimized reference transcription of the demosaicking formulas, shared by
//! the integration tests. Nothing here calls into the library's algorithms;
//! only the image containers are reused.

#![allow(dead_code, clippy::needless_range_loop)]

use led_demosaic::{BayerMosaic, CfaLayout, CfaPhase, Channel, Plane, RgbImage};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform continuous values in `[0, 255]`.
pub fn random_image(rng: &mut ChaCha8Rng, w: usize, h: usize) -> RgbImage {
    let mut plane = || Plane::from_fn(w, h, |_, _| rng.gen_range(0.0..=255.0));
    let (r, g, b) = (plane(), plane(), plane());
    RgbImage::new(r, g, b, 255.0).unwrap()
}

/// Uniform integer values in `[0, 255]`.
pub fn random_integer_image(rng: &mut ChaCha8Rng, w: usize, h: usize) -> RgbImage {
    let mut plane = || Plane::from_fn(w, h, |_, _| f64::from(rng.gen_range(0u8..=255)));
    let (r, g, b) = (plane(), plane(), plane());
    RgbImage::new(r, g, b, 255.0).unwrap()
}

/// Smooth image with edges: a blend of gradients and a few step edges, so the
/// directional weights take a wide range of values.
pub fn structured_image(rng: &mut ChaCha8Rng, w: usize, h: usize) -> RgbImage {
    let a: f64 = rng.gen_range(0.5..3.0);
    let b: f64 = rng.gen_range(0.5..3.0);
    let cut = rng.gen_range(0..w.max(1));
    let noise = rng.gen_range(0.0..10.0);
    let mut plane = |offset: f64| {
        Plane::from_fn(w, h, |i, j| {
            let base = 60.0 + offset + a * i as f64 + b * j as f64 + if j > cut + i / 2 { 70.0 } else { 0.0 };
            (base + rng.gen_range(-noise..=noise)).clamp(0.0, 255.0)
        })
    };
    let (r, g, b) = (plane(10.0), plane(0.0), plane(-20.0));
    RgbImage::new(r, g, b, 255.0).unwrap()
}

/// Reference site rule: the 2x2 tile of each phase, read left to right and
/// top to bottom, repeated over the image.
pub fn site(phase: CfaPhase, i: isize, j: isize) -> Channel {
    let tile = match phase {
        CfaPhase::Rggb => ['R', 'G', 'G', 'B'],
        CfaPhase::Bggr => ['B', 'G', 'G', 'R'],
        CfaPhase::Grbg => ['G', 'R', 'B', 'G'],
        CfaPhase::Gbrg => ['G', 'B', 'R', 'G'],
    };
    let t = (i.rem_euclid(2) * 2 + j.rem_euclid(2)) as usize;
    match tile[t] {
        'R' => Channel::Red,
        'G' => Channel::Green,
        _ => Channel::Blue,
    }
}

/// 0-based grid with signed indexing.
#[derive(Clone)]
pub struct Grid {
    pub w: isize,
    pub h: isize,
    pub v: Vec<Vec<f64>>,
}

impl Grid {
    pub fn new(w: usize, h: usize, fill: f64) -> Self {
        Grid {
            w: w as isize,
            h: h as isize,
            v: vec![vec![fill; w]; h],
        }
    }
    pub fn from_plane(p: &Plane) -> Self {
        Grid {
            w: p.width() as isize,
            h: p.height() as isize,
            v: (0..p.height()).map(|i| p.row(i).to_vec()).collect(),
        }
    }
    pub fn at(&self, i: isize, j: isize) -> f64 {
        self.v[i as usize][j as usize]
    }
    pub fn put(&mut self, i: isize, j: isize, x: f64) {
        self.v[i as usize][j as usize] = x;
    }
    pub fn to_plane(&self) -> Plane {
        Plane::from_fn(self.w as usize, self.h as usize, |i, j| self.v[i][j])
    }
}

pub struct Reference {
    pub m: Grid,
    pub phase: CfaPhase,
    pub margin: isize,
}

pub fn logistic(x: f64, k: f64) -> f64 {
    1.0 / (1.0 + (k * x).exp())
}

fn clip(x: f64, lo: f64, hi: f64) -> f64 {
    x.min(hi).max(lo)
}

impl Reference {
    pub fn new(m: &BayerMosaic, margin: usize) -> Self {
        Reference {
            m: Grid::from_plane(m.plane()),
            phase: m.layout().phase,
            margin: margin as isize,
        }
    }

    pub fn site(&self, i: isize, j: isize) -> Channel {
        site(self.phase, i, j)
    }

    pub fn in_strip(&self, i: isize, j: isize) -> bool {
        let (w, h, b) = (self.m.w, self.m.h, self.margin);
        i < b || j < b || i >= h - b || j >= w - b
    }

    pub fn range(&self, c: Channel) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..self.m.h {
            for j in 0..self.m.w {
                if self.site(i, j) == c {
                    lo = lo.min(self.m.at(i, j));
                    hi = hi.max(self.m.at(i, j));
                }
            }
        }
        (lo, hi)
    }

    /// Same-channel average over the clipped axial stencil, else the clipped
    /// diagonal stencil.
    pub fn fallback(&self, c: Channel, i: isize, j: isize) -> f64 {
        if self.site(i, j) == c {
            return self.m.at(i, j);
        }
        let rings: [[(isize, isize); 4]; 2] = [
            [(-1, 0), (0, -1), (0, 1), (1, 0)],
            [(-1, -1), (-1, 1), (1, -1), (1, 1)],
        ];
        for ring in rings {
            let mut sum = 0.0;
            let mut n = 0.0;
            for (di, dj) in ring {
                let (y, x) = (i + di, j + dj);
                if y >= 0 && x >= 0 && y < self.m.h && x < self.m.w && self.site(y, x) == c {
                    sum += self.m.at(y, x);
                    n += 1.0;
                }
            }
            if n > 0.0 {
                return sum / n;
            }
        }
        panic!("no neighbour of channel {c:?} at ({i}, {j})");
    }

    /// Horizontal/vertical derivatives and variations at `(i, j)`.
    pub fn hv(&self, i: isize, j: isize) -> [f64; 6] {
        let m = |a, b| self.m.at(a, b);
        let dh = (m(i, j + 1) - m(i, j - 1)) / 2.0;
        let d2h = (m(i, j + 2) + m(i, j - 2) - 2.0 * m(i, j)) / 4.0;
        let dv = (m(i + 1, j) - m(i - 1, j)) / 2.0;
        let d2v = (m(i + 2, j) + m(i - 2, j) - 2.0 * m(i, j)) / 4.0;
        let vh = dh.abs() + (2.0 * d2h).abs();
        let vv = dv.abs() + (2.0 * d2v).abs();
        [dh, d2h, dv, d2v, vh, vv]
    }

    /// Diagonal/anti-diagonal derivatives and variations at `(i, j)`.
    pub fn diag(&self, i: isize, j: isize) -> [f64; 6] {
        let m = |a, b| self.m.at(a, b);
        let s = 2.0 * 2f64.sqrt();
        let dd = (m(i + 1, j + 1) - m(i - 1, j - 1)) / s;
        let d2d = (m(i + 2, j + 2) + m(i - 2, j - 2) - 2.0 * m(i, j)) / 8.0;
        let da = (m(i - 1, j + 1) - m(i + 1, j - 1)) / s;
        let d2a = (m(i - 2, j + 2) + m(i + 2, j - 2) - 2.0 * m(i, j)) / 8.0;
        let vd = dd.abs() + (s * d2d).abs();
        let va = da.abs() + (s * d2a).abs();
        [dd, d2d, da, d2a, vd, va]
    }

    fn green_with(&self, pick: impl Fn(f64, f64, f64, f64) -> f64) -> Grid {
        let (lo, hi) = self.range(Channel::Green);
        let mut g = Grid::new(self.m.w as usize, self.m.h as usize, 0.0);
        for i in 0..self.m.h {
            for j in 0..self.m.w {
                let value = if self.site(i, j) == Channel::Green {
                    self.m.at(i, j)
                } else if self.in_strip(i, j) {
                    self.fallback(Channel::Green, i, j)
                } else {
                    let [_, d2h, _, d2v, vh, vv] = self.hv(i, j);
                    let gbar_h = (self.m.at(i, j + 1) + self.m.at(i, j - 1)) / 2.0;
                    let gbar_v = (self.m.at(i + 1, j) + self.m.at(i - 1, j)) / 2.0;
                    clip(pick(gbar_h - d2h, gbar_v - d2v, vh, vv), lo, hi)
                };
                g.put(i, j, value);
            }
        }
        g
    }

    pub fn ha_green(&self) -> Grid {
        self.green_with(|h, v, vh, vv| {
            if vh < vv {
                h
            } else if vh > vv {
                v
            } else {
                (h + v) / 2.0
            }
        })
    }

    pub fn led_green(&self, k: f64) -> Grid {
        self.green_with(|h, v, vh, vv| {
            let w = logistic(vh - vv, k);
            w * h + (1.0 - w) * v
        })
    }

    /// Hamilton-Adams chroma: bilinear interpolation of `g_hat - c`.
    pub fn ha_chroma(&self, g: &Grid, c: Channel) -> Grid {
        let (lo, hi) = self.range(c);
        let d = |a: isize, b: isize| g.at(a, b) - self.m.at(a, b);
        let mut out = Grid::new(self.m.w as usize, self.m.h as usize, 0.0);
        for i in 0..self.m.h {
            for j in 0..self.m.w {
                let s = self.site(i, j);
                let value = if s == c {
                    self.m.at(i, j)
                } else if self.in_strip(i, j) {
                    self.fallback(c, i, j)
                } else if s == Channel::Green {
                    let est = if self.site(i, j - 1) == c {
                        (d(i, j - 1) + d(i, j + 1)) / 2.0
                    } else {
                        (d(i - 1, j) + d(i + 1, j)) / 2.0
                    };
                    clip(g.at(i, j) - est, lo, hi)
                } else {
                    let est = (d(i - 1, j - 1) + d(i - 1, j + 1) + d(i + 1, j - 1) + d(i + 1, j + 1)) / 4.0;
                    clip(g.at(i, j) - est, lo, hi)
                };
                out.put(i, j, value);
            }
        }
        out
    }

    pub fn bilinear(&self) -> [Grid; 3] {
        [Channel::Red, Channel::Green, Channel::Blue].map(|c| {
            let mut out = Grid::new(self.m.w as usize, self.m.h as usize, 0.0);
            for i in 0..self.m.h {
                for j in 0..self.m.w {
                    out.put(i, j, self.fallback(c, i, j));
                }
            }
            out
        })
    }

    /// `g_hat - c` at the sample sites of `c`, and `g_hat - fallback` in the
    /// border strip. `NaN` elsewhere.
    pub fn seed_difference(&self, g: &Grid, c: Channel) -> Grid {
        let mut d = Grid::new(self.m.w as usize, self.m.h as usize, f64::NAN);
        for i in 0..self.m.h {
            for j in 0..self.m.w {
                if self.site(i, j) == c {
                    d.put(i, j, g.at(i, j) - self.m.at(i, j));
                } else if self.in_strip(i, j) {
                    d.put(i, j, g.at(i, j) - self.fallback(c, i, j));
                }
            }
        }
        d
    }

    /// Color difference of `own` at the interior sites of `other`'s channel,
    /// from the diagonal means of `own` and the diagonal curvature of `other`.
    pub fn difference_at_opposite(&self, own: &Grid, other: &Grid, target: Channel, k: f64) -> Grid {
        let mut out = own.clone();
        for i in self.margin..self.m.h - self.margin {
            for j in self.margin..self.m.w - self.margin {
                if self.site(i, j) != target {
                    continue;
                }
                let [_, _, _, _, vd, va] = self.diag(i, j);
                let wd = logistic(vd - va, k);
                let mean_d = (own.at(i + 1, j + 1) + own.at(i - 1, j - 1)) / 2.0;
                let mean_a = (own.at(i - 1, j + 1) + own.at(i + 1, j - 1)) / 2.0;
                let curv_d = (other.at(i + 2, j + 2) + other.at(i - 2, j - 2) - 2.0 * other.at(i, j)) / 8.0;
                let curv_a = (other.at(i + 2, j - 2) + other.at(i - 2, j + 2) - 2.0 * other.at(i, j)) / 8.0;
                out.put(i, j, wd * (mean_d - curv_d) + (1.0 - wd) * (mean_a - curv_a));
            }
        }
        out
    }

    /// Color difference at the interior green sites.
    pub fn difference_at_green(&self, d: &Grid, k: f64) -> Grid {
        let mut out = d.clone();
        for i in self.margin..self.m.h - self.margin {
            for j in self.margin..self.m.w - self.margin {
                if self.site(i, j) != Channel::Green {
                    continue;
                }
                let mean_h = (d.at(i, j + 1) + d.at(i, j - 1)) / 2.0;
                let mean_v = (d.at(i + 1, j) + d.at(i - 1, j)) / 2.0;
                // First derivatives one pixel either side, over a span of four.
                let dh_left = (d.at(i, j + 1) - d.at(i, j - 3)) / 4.0;
                let dh_right = (d.at(i, j + 3) - d.at(i, j - 1)) / 4.0;
                let dv_up = (d.at(i + 1, j) - d.at(i - 3, j)) / 4.0;
                let dv_down = (d.at(i + 3, j) - d.at(i - 1, j)) / 4.0;
                let d2h = (dh_right - dh_left) / 2.0;
                let d2v = (dv_down - dv_up) / 2.0;
                let [_, _, _, _, vh, vv] = self.hv(i, j);
                let wh = logistic(vh - vv, k);
                out.put(i, j, wh * (mean_h - d2h) + (1.0 - wh) * (mean_v - d2v));
            }
        }
        out
    }

    /// Complete logistic edge-sensing reconstruction.
    pub fn led(&self, k: f64) -> [Grid; 3] {
        let g = self.led_green(k);
        let seed_r = self.seed_difference(&g, Channel::Red);
        let seed_b = self.seed_difference(&g, Channel::Blue);
        let dr = self.difference_at_opposite(&seed_r, &seed_b, Channel::Blue, k);
        let db = self.difference_at_opposite(&seed_b, &seed_r, Channel::Red, k);
        let dr = self.difference_at_green(&dr, k);
        let db = self.difference_at_green(&db, k);
        let recover = |c: Channel, d: &Grid| {
            let (lo, hi) = self.range(c);
            let mut out = Grid::new(self.m.w as usize, self.m.h as usize, 0.0);
            for i in 0..self.m.h {
                for j in 0..self.m.w {
                    let value = if self.in_strip(i, j) {
                        self.fallback(c, i, j)
                    } else if self.site(i, j) == c {
                        self.m.at(i, j)
                    } else {
                        clip(g.at(i, j) - d.at(i, j), lo, hi)
                    };
                    out.put(i, j, value);
                }
            }
            out
        };
        [recover(Channel::Red, &dr), g.clone(), recover(Channel::Blue, &db)]
    }
}

pub fn max_abs_diff(a: &Plane, b: &Plane) -> f64 {
    assert!(a.same_dims(b));
    a.data()
        .iter()
        .zip(b.data())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

pub fn max_abs_diff_rgb(a: &RgbImage, b: &RgbImage) -> f64 {
    a.planes()
        .into_iter()
        .zip(b.planes())
        .map(|(x, y)| max_abs_diff(x, y))
        .fold(0.0, f64::max)
}

pub fn grids_to_rgb(g: &[Grid; 3], full_scale: f64) -> RgbImage {
    RgbImage::new(g[0].to_plane(), g[1].to_plane(), g[2].to_plane(), full_scale).unwrap()
}

pub fn layout(phase: CfaPhase) -> CfaLayout {
    CfaLayout::new(phase)
}

/// Reference SSIM: explicit 11x11 Gaussian window sums at every valid
/// position, per channel, averaged.
pub fn reference_ssim(a: &RgbImage, b: &RgbImage) -> f64 {
    let mut win = [[0.0f64; 11]; 11];
    let mut total = 0.0;
    for (y, row) in win.iter_mut().enumerate() {
        for (x, v) in row.iter_mut().enumerate() {
            let (dy, dx) = (y as f64 - 5.0, x as f64 - 5.0);
            *v = (-(dx * dx + dy * dy) / (2.0 * 1.5 * 1.5)).exp();
            total += *v;
        }
    }
    win.iter_mut().flatten().for_each(|v| *v /= total);
    let l = a.full_scale;
    let (c1, c2) = ((0.01 * l).powi(2), (0.03 * l).powi(2));
    let mut acc = 0.0;
    for (p, q) in a.planes().into_iter().zip(b.planes()) {
        let (w, h) = (p.width(), p.height());
        let mut sum = 0.0;
        let mut n = 0.0;
        for i in 0..=h - 11 {
            for j in 0..=w - 11 {
                let (mut mx, mut my) = (0.0, 0.0);
                for y in 0..11 {
                    for x in 0..11 {
                        mx += win[y][x] * p.get(i + y, j + x);
                        my += win[y][x] * q.get(i + y, j + x);
                    }
                }
                let (mut vx, mut vy, mut cxy) = (0.0, 0.0, 0.0);
                for y in 0..11 {
                    for x in 0..11 {
                        let (u, v) = (p.get(i + y, j + x) - mx, q.get(i + y, j + x) - my);
                        vx += win[y][x] * u * u;
                        vy += win[y][x] * v * v;
                        cxy += win[y][x] * u * v;
                    }
                }
                sum += ((2.0 * mx * my + c1) * (2.0 * cxy + c2)) / ((mx * mx + my * my + c1) * (vx + vy + c2));
                n += 1.0;
            }
        }
        acc += sum / n;
    }
    acc / 3.0
}
