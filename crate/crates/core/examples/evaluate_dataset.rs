//! Evaluates bilinear, Hamilton-Adams and the logistic method over a
//! directory of ground-truth images and writes CSV and JSON reports.
//!
//! cargo run --release --example evaluate_dataset [dataset_dir]

mod common;

use led_demosaic::harness::{run_experiment, ExperimentConfig, Method};
use led_demosaic::Result;

fn main() -> Result<()> {
    let dir = common::dataset_from_args(6)?;
    let mut cfg = ExperimentConfig::new(&dir);
    cfg.methods = Method::ALL.to_vec();
    let report = run_experiment(&cfg)?;
    for row in &report.rows {
        if let Some(m) = &row.metrics {
            println!("{:<20} {:<9} cPSNR {:>7.2} dB  SSIM {:.4}", row.name, row.method.name(), m.cpsnr, m.ssim);
        }
    }
    print!("{}", report.table());

    let csv = std::env::temp_dir().join("led-demosaic-report.csv");
    let json = std::env::temp_dir().join("led-demosaic-report.json");
    report.write_csv_file(&csv)?;
    report.write_json(&json)?;
    println!("reports: {} {}", csv.display(), json.display());
    common::remove_if_temp(&dir);
    Ok(())
}
