//! Runs the logistic method one pass at a time: green, color differences at
//! the opposite chroma sites, color differences at green sites, red/blue
//! recovery and the border fallback. The staged result matches the fused
//! `led_demosaic` call.
//!
//! cargo run --example staged_passes [image.png]

mod common;

use led_demosaic::baselines::bilinear_demosaic;
use led_demosaic::led::{chroma_at_green_sites, chroma_at_opposite_sites, fallback_boundary, led_green, ChromaPlane};
use led_demosaic::metrics::cpsnr;
use led_demosaic::{led_demosaic, mosaic, CfaLayout, Channel, LedParams, Plane, Result, RgbImage};

fn main() -> Result<()> {
    let (name, truth) = common::image_from_args(96, 64)?;
    let m = mosaic(&truth, CfaLayout::CANONICAL)?;
    let p = LedParams::default();
    let margin = p.boundary_margin;

    let g = led_green(&m, &p)?;
    println!("{name}: {}x{}, green plane ready", m.width(), m.height());

    // Seed each color-difference plane at its samples and in the border strip.
    let border = bilinear_demosaic(&m);
    let mut r = ChromaPlane::from_samples(&m, &g, Channel::Red)?;
    let mut b = ChromaPlane::from_samples(&m, &g, Channel::Blue)?;
    r.fill_border(&g, &border.r, margin);
    b.fill_border(&g, &border.b, margin);

    let r2 = chroma_at_opposite_sites(&m, &g, &r, &b, &p)?;
    let b2 = chroma_at_opposite_sites(&m, &g, &b, &r, &p)?;
    let r3 = chroma_at_green_sites(&m, &r2, &p)?;
    let b3 = chroma_at_green_sites(&m, &b2, &p)?;

    let recover = |c: &ChromaPlane, channel: Channel| {
        let (lo, hi) = m.sample_range(channel);
        Plane::from_fn(m.width(), m.height(), |i, j| {
            if m.site(i, j) == channel {
                m.get(i, j)
            } else {
                (g.get(i, j) - c.get(i, j)).clamp(lo, hi)
            }
        })
    };
    let partial = RgbImage::new(recover(&r3, Channel::Red), g.clone(), recover(&b3, Channel::Blue), m.full_scale())?;
    let staged = fallback_boundary(&m, &partial, margin)?;

    let fused = led_demosaic(&m, &p)?;
    let diff = staged
        .planes()
        .into_iter()
        .zip(fused.planes())
        .flat_map(|(a, b)| a.data().iter().zip(b.data()).map(|(x, y)| (x - y).abs()).collect::<Vec<_>>())
        .fold(0.0, f64::max);
    println!("staged vs fused max abs diff: {diff:.3e}");
    println!("cPSNR vs truth (full frame): {:.2} dB", cpsnr(&truth, &fused)?);
    Ok(())
}
