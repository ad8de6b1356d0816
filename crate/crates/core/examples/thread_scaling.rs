//! Times the logistic method with different worker counts and confirms the
//! output does not change.
//!
//! cargo run --release --example thread_scaling [image.png]

mod common;

use led_demosaic::parallel::with_threads;
use led_demosaic::{led_demosaic, mosaic, CfaLayout, LedParams, Result, RgbImage};
use std::time::Instant;

fn main() -> Result<()> {
    let (name, truth) = common::image_from_args(1024, 768)?;
    let m = mosaic(&truth, CfaLayout::CANONICAL)?;
    println!("{name}: {}x{}", m.width(), m.height());
    let mut first: Option<RgbImage> = None;
    for threads in [1, 2, 4, 8] {
        let (secs, rgb) = with_threads(threads, || {
            let mut best = f64::INFINITY;
            let mut out = None;
            for _ in 0..5 {
                let t = Instant::now();
                out = Some(led_demosaic(&m, &LedParams::default()));
                best = best.min(t.elapsed().as_secs_f64());
            }
            (best, out.expect("at least one run"))
        });
        let rgb = rgb?;
        let same = first.get_or_insert_with(|| rgb.clone()) == &rgb;
        println!("{threads} threads: {secs:.4} s, identical to 1 thread: {same}");
    }
    Ok(())
}
