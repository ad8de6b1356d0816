//! Shared helpers for the examples: a synthetic test scene and a dataset
//! directory built from it when no real images are given.

#![allow(dead_code)]

use led_demosaic::{io, Plane, Result, RgbImage};
use std::path::{Path, PathBuf};

/// 8-bit scene built like a natural image: a shared luminance pattern (soft
/// disc, oblique waves, a low-frequency zone plate) under a slowly varying
/// tint. `seed` moves the disc and the wave phase.
pub fn scene(width: usize, height: usize, seed: usize) -> RgbImage {
    let s = seed as f64;
    let (w, h) = (width as f64, height as f64);
    let (cx, cy) = (w * (0.35 + 0.07 * (s % 5.0)), h * 0.5);
    let radius = w.min(h) * 0.22;
    let luminance = |y: f64, x: f64| {
        let r = ((x - cx).powi(2) + (y - cy).powi(2)).sqrt();
        let disc = 0.3 / (1.0 + ((r - radius) / 0.6).exp());
        let waves = 0.12 * ((x + 0.6 * y) / 2.2 + s).sin();
        let (zx, zy) = (x - w * 0.8, y - h * 0.2);
        let zone = 0.08 * ((zx * zx + zy * zy) / (0.8 * w)).cos();
        0.35 + disc + waves + zone
    };
    let channel = |tint: fn(f64, f64) -> f64| {
        Plane::from_fn(width, height, |i, j| {
            let (y, x) = (i as f64, j as f64);
            (255.0 * luminance(y, x) * tint(x / w, y / h)).clamp(0.0, 255.0).round()
        })
    };
    RgbImage::new(
        channel(|u, v| 1.1 - 0.3 * u + 0.1 * v),
        channel(|_, _| 1.0),
        channel(|u, v| 0.7 + 0.3 * u - 0.1 * v),
        255.0,
    )
    .expect("planes share dimensions")
}

/// First command-line argument as an RGB image, or the synthetic scene.
pub fn image_from_args(width: usize, height: usize) -> Result<(String, RgbImage)> {
    match std::env::args().nth(1) {
        Some(path) => Ok((path.clone(), io::read_rgb(path)?)),
        None => Ok(("synthetic scene".into(), scene(width, height, 0))),
    }
}

/// First command-line argument as a dataset directory, or a fresh directory
/// of `count` synthetic scenes under the system temp dir.
pub fn dataset_from_args(count: usize) -> Result<PathBuf> {
    if let Some(dir) = std::env::args().nth(1) {
        return Ok(PathBuf::from(dir));
    }
    let dir = std::env::temp_dir().join(format!("led-demosaic-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    for n in 0..count {
        io::write_rgb(dir.join(format!("scene{n:02}.png")), &scene(96, 64, n))?;
    }
    Ok(dir)
}

pub fn remove_if_temp(dir: &Path) {
    if dir.starts_with(std::env::temp_dir()) && std::env::args().nth(1).is_none() {
        let _ = std::fs::remove_dir_all(dir);
    }
}
