//! Reconstructs one image with the bilinear, Hamilton-Adams and logistic
//! methods and prints per-channel PSNR, cPSNR, SSIM and wall time.
//!
//! cargo run --release --example compare_methods [image.png] [out_dir]

mod common;

use led_demosaic::harness::Method;
use led_demosaic::metrics::evaluate;
use led_demosaic::{io, mosaic, CfaLayout, LedParams, Result};
use std::time::Instant;

fn main() -> Result<()> {
    let (name, truth) = common::image_from_args(256, 192)?;
    let out_dir = std::env::args().nth(2);
    let m = mosaic(&truth, CfaLayout::CANONICAL)?;
    let params = LedParams::default();
    println!("{name}: {}x{}, shave 4", truth.width(), truth.height());
    println!("{:<9} {:>8} {:>8} {:>8} {:>8} {:>7} {:>9}", "method", "R", "G", "B", "cPSNR", "SSIM", "time");
    for method in Method::ALL {
        let start = Instant::now();
        let rgb = method.demosaic(&m, &params)?;
        let secs = start.elapsed().as_secs_f64();
        let r = evaluate(&truth, &rgb, 4)?;
        println!(
            "{:<9} {:>8.2} {:>8.2} {:>8.2} {:>8.2} {:>7.4} {:>8.4}s",
            method.name(),
            r.psnr_r,
            r.psnr_g,
            r.psnr_b,
            r.cpsnr,
            r.ssim,
            secs
        );
        if let Some(dir) = &out_dir {
            io::write_rgb(std::path::Path::new(dir).join(format!("{}.png", method.name())), &rgb)?;
        }
    }
    Ok(())
}
