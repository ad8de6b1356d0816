//! Command-line front end: mosaic simulation, demosaicking, dataset
//! evaluation and k sweeps.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 usage error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use led_demosaic::harness::{self, ExperimentConfig, Method};
use led_demosaic::io::{self, Raster};
use led_demosaic::led::{LedParams, DEFAULT_BOUNDARY_MARGIN, DEFAULT_K};
use led_demosaic::{metrics, mosaic, parallel, BayerMosaic, CfaLayout, CfaPhase, Error};

#[derive(Parser, Debug)]
#[command(name = "led-demosaic", version, about = "Bayer demosaicking with logistic edge sensing")]
struct Cli {
    /// Worker threads (overrides LED_DEMOSAIC_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample an RGB image through a Bayer CFA.
    Mosaic(MosaicArgs),
    /// Reconstruct RGB from a mosaic (or from an RGB image, round trip).
    Demosaic(DemosaicArgs),
    /// Evaluate methods over a directory of ground-truth images.
    Eval(EvalArgs),
    /// Sweep the logistic steepness k over a dataset.
    SweepK(SweepArgs),
}

#[derive(Args, Debug)]
struct MosaicArgs {
    input: PathBuf,
    #[arg(long, default_value = "gbrg", value_parser = parse_phase)]
    phase: CfaPhase,
    /// `.ledm` for the packed format, `.png`/`.pgm` for a single-plane raster.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct DemosaicArgs {
    /// `.ledm` mosaic, single-plane raster mosaic, or RGB raster (round trip).
    input: PathBuf,
    #[arg(long, default_value = "led", value_parser = parse_method)]
    method: Method,
    #[arg(long, default_value_t = DEFAULT_K)]
    k: f64,
    /// Phase for raster inputs; `.ledm` files carry their own.
    #[arg(long, default_value = "gbrg", value_parser = parse_phase)]
    phase: CfaPhase,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct DatasetArgs {
    #[arg(long)]
    dataset: PathBuf,
    #[arg(long, default_value = "gbrg", value_parser = parse_phase)]
    phase: CfaPhase,
    #[arg(long, default_value_t = DEFAULT_K)]
    k: f64,
    #[arg(long, default_value_t = 4)]
    shave: usize,
    #[arg(long, default_value_t = DEFAULT_BOUNDARY_MARGIN)]
    margin: usize,
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[command(flatten)]
    data: DatasetArgs,
    /// Comma-separated list of bilinear, ha, led.
    #[arg(long, default_value = "ha,led", value_delimiter = ',', value_parser = parse_method)]
    methods: Vec<Method>,
    #[arg(long, default_value_t = 1)]
    repeats: usize,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    data: DatasetArgs,
    #[arg(long, default_value_t = 0.01)]
    k_min: f64,
    #[arg(long, default_value_t = 1.0)]
    k_max: f64,
    #[arg(long, default_value_t = 0.01)]
    k_step: f64,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    json: Option<PathBuf>,
}

fn parse_phase(s: &str) -> Result<CfaPhase, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

type CliResult = Result<ExitCode, Error>;

fn run_mosaic(args: &MosaicArgs) -> CliResult {
    println!("mosaic: input={} phase={} out={}", args.input.display(), args.phase, args.out.display());
    let rgb = io::read_rgb(&args.input)?;
    let m = mosaic(&rgb, CfaLayout::new(args.phase))?;
    write_mosaic(&args.out, &m)?;
    println!("wrote {}x{} mosaic to {}", m.width(), m.height(), args.out.display());
    Ok(ExitCode::SUCCESS)
}

fn write_mosaic(path: &Path, m: &BayerMosaic) -> Result<(), Error> {
    if io::is_raster_path(path) {
        io::write_mosaic_raster(path, m)
    } else {
        io::write_ledm(path, m)
    }
}

fn run_demosaic(args: &DemosaicArgs) -> CliResult {
    let params = LedParams::with_k(args.k)?;
    println!(
        "demosaic: input={} method={} k={} margin={} phase={} out={}",
        args.input.display(),
        args.method,
        params.k,
        params.boundary_margin,
        args.phase,
        args.out.display()
    );
    let layout = CfaLayout::new(args.phase);
    let (m, truth) = if io::is_ledm_path(&args.input) {
        (io::read_ledm(&args.input)?, None)
    } else {
        match io::read_raster(&args.input)? {
            Raster::Gray { plane, full_scale } => (BayerMosaic::new(plane, layout, full_scale)?, None),
            Raster::Rgb(rgb) => (mosaic(&rgb, layout)?, Some(rgb)),
        }
    };
    let start = Instant::now();
    let rgb = args.method.demosaic(&m, &params)?;
    println!("demosaic time: {:.6} s", start.elapsed().as_secs_f64());
    if let Some(truth) = truth {
        let cpsnr = metrics::cpsnr(&truth, &rgb)?;
        println!("round-trip cPSNR (full frame): {cpsnr:.4} dB");
    }
    io::write_rgb(&args.out, &rgb)?;
    Ok(ExitCode::SUCCESS)
}

fn experiment_config(data: &DatasetArgs, methods: Vec<Method>, repeats: usize) -> Result<ExperimentConfig, Error> {
    Ok(ExperimentConfig {
        dataset_dir: data.dataset.clone(),
        layout: CfaLayout::new(data.phase),
        methods,
        led_params: LedParams::new(data.k, data.margin)?,
        shave: data.shave,
        timing_repeats: repeats,
        output: None,
    })
}

fn run_eval(args: &EvalArgs) -> CliResult {
    let mut cfg = experiment_config(&args.data, args.methods.clone(), args.repeats)?;
    cfg.output = args.json.clone().or_else(|| args.csv.clone());
    println!("eval: {}", serde_json::to_string(&cfg)?);
    let report = harness::run_experiment(&cfg)?;
    for row in &report.rows {
        match (&row.metrics, &row.error) {
            (Some(m), _) => println!(
                "{:>3} {:<24} {:<8} cPSNR {:>9} SSIM {:.4} region {}x{} time {:.4}s",
                row.index,
                row.name,
                row.method.name(),
                format!("{:.4}", m.cpsnr),
                m.ssim,
                m.region_width,
                m.region_height,
                row.seconds.unwrap_or(f64::NAN)
            ),
            (None, Some(e)) => println!("{:>3} {:<24} {:<8} ERROR {e}", row.index, row.name, row.method.name()),
            (None, None) => {}
        }
    }
    print!("{}", report.table());
    if let Some(path) = &args.csv {
        report.write_csv_file(path)?;
    }
    if let Some(path) = &args.json {
        report.write_json(path)?;
    }
    Ok(if report.has_failures() {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn run_sweep(args: &SweepArgs) -> CliResult {
    let cfg = experiment_config(&args.data, vec![Method::Led], 1)?;
    println!(
        "sweep-k: k_min={} k_max={} k_step={} {}",
        args.k_min,
        args.k_max,
        args.k_step,
        serde_json::to_string(&cfg)?
    );
    let table = harness::sweep_k(&cfg, args.k_min, args.k_max, args.k_step)?;
    println!("{:>8} {:>12}", "k", "mean cPSNR");
    for row in &table.rows {
        println!("{:>8} {:>12.4}", row.k, row.mean_cpsnr);
    }
    println!(
        "best k = {} ({:.4} dB){}",
        table.best_k,
        table.best_cpsnr,
        if table.interior_max { "" } else { " [maximum at grid edge]" }
    );
    if let Some(path) = &args.csv {
        table.write_csv_file(path)?;
    }
    if let Some(path) = &args.json {
        table.write_json(path)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let threads = cli.threads.or_else(parallel::threads_from_env);
    let run = || match &cli.command {
        Command::Mosaic(a) => run_mosaic(a),
        Command::Demosaic(a) => run_demosaic(a),
        Command::Eval(a) => run_eval(a),
        Command::SweepK(a) => run_sweep(a),
    };
    let result = match threads {
        Some(n) => parallel::with_threads(n, run),
        None => run(),
    };
    match result {
        Ok(code) => code,
        Err(Error::InvalidParameter(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
