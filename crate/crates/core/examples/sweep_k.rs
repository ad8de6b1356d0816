//! Sweeps the logistic steepness over a dataset and reports the best `k`.
//!
//! cargo run --release --example sweep_k [dataset_dir]

mod common;

use led_demosaic::harness::{sweep_k, ExperimentConfig};
use led_demosaic::Result;

fn main() -> Result<()> {
    let dir = common::dataset_from_args(4)?;
    let table = sweep_k(&ExperimentConfig::new(&dir), 0.01, 0.30, 0.01)?;
    for row in &table.rows {
        let bar = "#".repeat(((row.mean_cpsnr - table.best_cpsnr + 1.0).max(0.0) * 40.0) as usize);
        println!("k {:>5.2}  {:>7.3} dB  {bar}", row.k, row.mean_cpsnr);
    }
    println!(
        "best k = {} ({:.3} dB over {} images){}",
        table.best_k,
        table.best_cpsnr,
        table.images,
        if table.interior_max { "" } else { ", at the edge of the grid" }
    );
    common::remove_if_temp(&dir);
    Ok(())
}
