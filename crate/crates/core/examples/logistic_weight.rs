//! Shows how the steepness `k` turns the soft directional blend into the
//! hard Hamilton-Adams selection, first for the weight itself and then for
//! the reconstructed green plane.
//!
//! cargo run --example logistic_weight

mod common;

use led_demosaic::baselines::ha_green;
use led_demosaic::led::{led_green, logistic_weight};
use led_demosaic::{mosaic, CfaLayout, LedParams, Result};

fn main() -> Result<()> {
    let deltas = [-100.0, -20.0, -5.0, 0.0, 5.0, 20.0, 100.0];
    print!("{:>8}", "k \\ dv");
    deltas.iter().for_each(|d| print!("{d:>9}"));
    println!();
    for k in [0.01, 0.05, 0.2, 1.0, 10.0] {
        print!("{k:>8}");
        for &d in &deltas {
            print!("{:>9.4}", logistic_weight(d, k)?);
        }
        println!();
    }

    let truth = common::scene(128, 96, 1);
    let m = mosaic(&truth, CfaLayout::CANONICAL)?;
    let hard = ha_green(&m);
    println!("\nmax |green(LED, k) - green(HA)| on a synthetic scene:");
    for k in [0.01, 0.05, 0.5, 5.0, 1e3, 1e6] {
        let soft = led_green(&m, &LedParams::with_k(k)?)?;
        let diff = soft
            .data()
            .iter()
            .zip(hard.data())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        println!("  k = {k:<8} {diff:.6}");
    }
    Ok(())
}
