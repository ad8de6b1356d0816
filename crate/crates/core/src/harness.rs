//! Dataset-scale evaluation: mosaic each ground-truth image, reconstruct it
//! with each method, and report accuracy and demosaicking time.
//!
//! Images are taken from a directory in lexicographic file-name order. The
//! first image is treated as warm-up and left out of the median time.

use std::fmt::{self, Write as _};
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::baselines::{bilinear_demosaic, ha_demosaic};
use crate::cfa::{mosaic, BayerMosaic, CfaLayout};
use crate::error::{Error, Result};
use crate::image::RgbImage;
use crate::led::{led_demosaic, LedParams};
use crate::metrics::{self, db, MetricReport, SSIM_CONVENTION};
use crate::{io, parallel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Bilinear,
    Ha,
    Led,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Bilinear, Method::Ha, Method::Led];

    pub fn name(self) -> &'static str {
        match self {
            Method::Bilinear => "bilinear",
            Method::Ha => "ha",
            Method::Led => "led",
        }
    }

    /// Reconstructs `m`; `params` is only consulted by [`Method::Led`].
    pub fn demosaic(self, m: &BayerMosaic, params: &LedParams) -> Result<RgbImage> {
        match self {
            Method::Bilinear => Ok(bilinear_demosaic(m)),
            Method::Ha => Ok(ha_demosaic(m)),
            Method::Led => led_demosaic(m, params),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "bilinear" => Ok(Method::Bilinear),
            "ha" | "hamilton-adams" => Ok(Method::Ha),
            "led" => Ok(Method::Led),
            other => Err(Error::InvalidParameter(format!(
                "unknown method '{other}' (expected bilinear, ha or led)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub dataset_dir: PathBuf,
    pub layout: CfaLayout,
    pub methods: Vec<Method>,
    pub led_params: LedParams,
    /// Border width excluded from the metrics.
    pub shave: usize,
    /// Timed runs per image and method; the median is reported.
    pub timing_repeats: usize,
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    /// Canonical layout, HA and LED, default parameters, shave 4.
    pub fn new(dataset_dir: impl Into<PathBuf>) -> Self {
        Self {
            dataset_dir: dataset_dir.into(),
            layout: CfaLayout::CANONICAL,
            methods: vec![Method::Ha, Method::Led],
            led_params: LedParams::default(),
            shave: 4,
            timing_repeats: 1,
            output: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.led_params.validate()?;
        if self.methods.is_empty() {
            return Err(Error::InvalidParameter("no methods selected".into()));
        }
        if self.timing_repeats == 0 {
            return Err(Error::InvalidParameter("timing_repeats must be at least 1".into()));
        }
        if self.shave < self.led_params.boundary_margin {
            log::warn!(
                "shave width {} is narrower than the boundary margin {}; border fallback pixels enter the metrics",
                self.shave,
                self.led_params.boundary_margin
            );
        }
        Ok(())
    }
}

/// One image reconstructed by one method.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ImageRow {
    /// Position in the sorted dataset listing, starting at 0.
    pub index: usize,
    pub name: String,
    pub method: Method,
    pub metrics: Option<MetricReport>,
    /// Median demosaicking wall time over the timed repeats.
    pub seconds: Option<f64>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MethodSummary {
    pub method: Method,
    pub succeeded: usize,
    pub failed: usize,
    /// Rows with finite cPSNR; only these enter `mean_cpsnr`.
    pub finite_rows: usize,
    pub infinite_rows: usize,
    /// `NaN` when no row has a finite cPSNR.
    #[serde(with = "db")]
    pub mean_cpsnr: f64,
    #[serde(with = "db")]
    pub mean_ssim: f64,
    /// Median over all images but the first.
    pub median_seconds: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub threads: usize,
    pub build: String,
}

impl Environment {
    pub fn current() -> Self {
        let profile = if cfg!(debug_assertions) { "debug" } else { "release" };
        Self {
            threads: parallel::current_threads(),
            build: format!("{} {} ({profile})", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub config: ExperimentConfig,
    pub ssim_convention: String,
    pub rows: Vec<ImageRow>,
    pub summaries: Vec<MethodSummary>,
    pub environment: Environment,
}

fn median(values: &mut [f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_by(f64::total_cmp);
    let mid = values.len() / 2;
    Some(if values.len() % 2 == 1 {
        values[mid]
    } else {
        (values[mid - 1] + values[mid]) / 2.0
    })
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    if n == 0 {
        f64::NAN
    } else {
        sum / n as f64
    }
}

/// Aggregates `rows` per method, in the order of `methods`.
pub fn summarize(rows: &[ImageRow], methods: &[Method]) -> Vec<MethodSummary> {
    methods
        .iter()
        .map(|&method| {
            let ok: Vec<(&ImageRow, &MetricReport)> = rows
                .iter()
                .filter(|r| r.method == method)
                .filter_map(|r| r.metrics.as_ref().map(|m| (r, m)))
                .collect();
            let failed = rows
                .iter()
                .filter(|r| r.method == method && r.metrics.is_none())
                .count();
            let finite: Vec<f64> = ok
                .iter()
                .map(|(_, m)| m.cpsnr)
                .filter(|v| v.is_finite())
                .collect();
            let mut times: Vec<f64> = ok
                .iter()
                .filter(|(r, _)| r.index > 0)
                .filter_map(|(r, _)| r.seconds)
                .collect();
            MethodSummary {
                method,
                succeeded: ok.len(),
                failed,
                finite_rows: finite.len(),
                infinite_rows: ok.iter().filter(|(_, m)| m.cpsnr == f64::INFINITY).count(),
                mean_cpsnr: mean(finite.iter().copied()),
                mean_ssim: mean(ok.iter().map(|(_, m)| m.ssim)),
                median_seconds: median(&mut times),
            }
        })
        .collect()
}

/// Raster files in `dir`, sorted by file name.
pub fn list_images(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && io::is_raster_path(p))
        .collect();
    files.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    if files.is_empty() {
        return Err(Error::EmptyDataset(dir.to_path_buf()));
    }
    Ok(files)
}

fn display_name(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn timed(method: Method, m: &BayerMosaic, params: &LedParams, repeats: usize) -> Result<(RgbImage, f64)> {
    let mut times = Vec::with_capacity(repeats);
    let mut output = None;
    for _ in 0..repeats {
        let start = Instant::now();
        let rgb = method.demosaic(m, params)?;
        times.push(start.elapsed().as_secs_f64());
        output = Some(rgb);
    }
    let seconds = median(&mut times).expect("at least one repeat");
    Ok((output.expect("at least one repeat"), seconds))
}

fn evaluate_image(
    truth: &RgbImage,
    m: &BayerMosaic,
    method: Method,
    cfg: &ExperimentConfig,
) -> Result<(MetricReport, f64)> {
    let (rgb, seconds) = timed(method, m, &cfg.led_params, cfg.timing_repeats)?;
    Ok((metrics::evaluate(truth, &rgb, cfg.shave)?, seconds))
}

/// Runs every configured method on every image of the dataset.
///
/// Images are processed one at a time so that timed runs never overlap.
/// Failures are recorded per row; only an empty dataset or an invalid config
/// is fatal.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<EvaluationReport> {
    cfg.validate()?;
    let files = list_images(&cfg.dataset_dir)?;
    let mut rows = Vec::with_capacity(files.len() * cfg.methods.len());
    for (index, path) in files.iter().enumerate() {
        let name = display_name(path);
        let prepared = io::read_rgb(path).and_then(|truth| {
            let m = mosaic(&truth, cfg.layout)?;
            Ok((truth, m))
        });
        for &method in &cfg.methods {
            let outcome = prepared
                .as_ref()
                .map_err(|e| e.to_string())
                .and_then(|(truth, m)| evaluate_image(truth, m, method, cfg).map_err(|e| e.to_string()));
            let row = match outcome {
                Ok((report, seconds)) => ImageRow {
                    index,
                    name: name.clone(),
                    method,
                    metrics: Some(report),
                    seconds: Some(seconds),
                    error: None,
                },
                Err(message) => {
                    log::error!("{name} [{method}]: {message}");
                    ImageRow {
                        index,
                        name: name.clone(),
                        method,
                        metrics: None,
                        seconds: None,
                        error: Some(message),
                    }
                }
            };
            rows.push(row);
        }
    }
    let summaries = summarize(&rows, &cfg.methods);
    Ok(EvaluationReport {
        config: cfg.clone(),
        ssim_convention: SSIM_CONVENTION.to_string(),
        rows,
        summaries,
        environment: Environment::current(),
    })
}

fn fmt_db(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.4}")
    } else {
        format!("{v}")
    }
}

impl EvaluationReport {
    pub fn summary(&self, method: Method) -> Option<&MethodSummary> {
        self.summaries.iter().find(|s| s.method == method)
    }

    pub fn has_failures(&self) -> bool {
        self.rows.iter().any(|r| r.error.is_some())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn write_json(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut out = BufWriter::new(File::create(path)?);
        out.write_all(self.to_json()?.as_bytes())?;
        out.write_all(b"\n")?;
        out.flush()?;
        Ok(())
    }

    /// Per-row table. Leading `#` lines carry the config, the environment and
    /// the per-method aggregates.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "# config: {}", serde_json::to_string(&self.config)?)?;
        writeln!(out, "# ssim: {}", self.ssim_convention)?;
        writeln!(out, "# environment: {}", serde_json::to_string(&self.environment)?)?;
        for s in &self.summaries {
            writeln!(out, "# summary: {}", serde_json::to_string(s)?)?;
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "index", "name", "method", "psnr_r", "psnr_g", "psnr_b", "cpsnr", "ssim", "shave",
            "region_width", "region_height", "seconds", "error",
        ])?;
        for row in &self.rows {
            let m = row.metrics.as_ref();
            let num = |f: fn(&MetricReport) -> f64| m.map(|m| f(m).to_string()).unwrap_or_default();
            let int = |f: fn(&MetricReport) -> usize| m.map(|m| f(m).to_string()).unwrap_or_default();
            w.write_record([
                row.index.to_string(),
                row.name.clone(),
                row.method.to_string(),
                num(|m| m.psnr_r),
                num(|m| m.psnr_g),
                num(|m| m.psnr_b),
                num(|m| m.cpsnr),
                num(|m| m.ssim),
                int(|m| m.shave),
                int(|m| m.region_width),
                int(|m| m.region_height),
                row.seconds.map(|s| s.to_string()).unwrap_or_default(),
                row.error.clone().unwrap_or_default(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_csv_file(&self, path: impl AsRef<Path>) -> Result<()> {
        self.write_csv(BufWriter::new(File::create(path)?))
    }

    /// Human-readable summary table.
    pub fn table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:<10} {:>6} {:>6} {:>12} {:>10} {:>14}",
            "method", "ok", "failed", "mean cPSNR", "mean SSIM", "median time s"
        );
        for m in &self.summaries {
            let time = m
                .median_seconds
                .map(|t| format!("{t:.4}"))
                .unwrap_or_else(|| "-".into());
            let _ = writeln!(
                s,
                "{:<10} {:>6} {:>6} {:>12} {:>10.4} {:>14}",
                m.method.name(),
                m.succeeded,
                m.failed,
                fmt_db(m.mean_cpsnr),
                m.mean_ssim,
                time
            );
            if m.infinite_rows > 0 {
                let _ = writeln!(s, "{:<10} {} exact reconstruction(s) excluded from the mean", "", m.infinite_rows);
            }
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub k: f64,
    #[serde(with = "db")]
    pub mean_cpsnr: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub config: ExperimentConfig,
    pub rows: Vec<SweepRow>,
    pub best_k: f64,
    #[serde(with = "db")]
    pub best_cpsnr: f64,
    /// The maximum is at neither end of the grid.
    pub interior_max: bool,
    pub images: usize,
}

/// `k_min, k_min + k_step, ...` up to `k_max` inclusive (within 1e-9 steps).
pub fn k_grid(k_min: f64, k_max: f64, k_step: f64) -> Result<Vec<f64>> {
    if !(k_min > 0.0 && k_step > 0.0 && k_min <= k_max && k_max.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "invalid k range: min {k_min}, max {k_max}, step {k_step}"
        )));
    }
    let steps = ((k_max - k_min) / k_step + 1e-9).floor() as usize;
    Ok((0..=steps)
        .map(|i| ((k_min + i as f64 * k_step) * 1e12).round() / 1e12)
        .collect())
}

/// Mean cPSNR of the logistic method for every `k` on the grid.
pub fn sweep_k(cfg: &ExperimentConfig, k_min: f64, k_max: f64, k_step: f64) -> Result<SweepTable> {
    cfg.validate()?;
    let grid = k_grid(k_min, k_max, k_step)?;
    let mut data = Vec::new();
    for path in list_images(&cfg.dataset_dir)? {
        match io::read_rgb(&path).and_then(|t| {
            let m = mosaic(&t, cfg.layout)?;
            let shaved = metrics::shave(&t, cfg.shave)?;
            Ok((shaved, m))
        }) {
            Ok(pair) => data.push(pair),
            Err(e) => log::error!("{}: {e}", path.display()),
        }
    }
    if data.is_empty() {
        return Err(Error::EmptyDataset(cfg.dataset_dir.clone()));
    }

    let mut rows = Vec::with_capacity(grid.len());
    for k in grid {
        let params = LedParams {
            k,
            ..cfg.led_params
        };
        let mut values = Vec::with_capacity(data.len());
        for (truth, m) in &data {
            let rgb = led_demosaic(m, &params)?;
            values.push(metrics::cpsnr(truth, &metrics::shave(&rgb, cfg.shave)?)?);
        }
        rows.push(SweepRow {
            k,
            mean_cpsnr: mean(values.into_iter().filter(|v| v.is_finite())),
        });
    }
    let (best_index, best) = rows
        .iter()
        .enumerate()
        .filter(|(_, r)| !r.mean_cpsnr.is_nan())
        .max_by(|a, b| a.1.mean_cpsnr.total_cmp(&b.1.mean_cpsnr))
        .map(|(i, r)| (i, r.clone()))
        .unwrap_or((0, rows[0].clone()));
    Ok(SweepTable {
        config: cfg.clone(),
        interior_max: best_index > 0 && best_index + 1 < rows.len(),
        best_k: best.k,
        best_cpsnr: best.mean_cpsnr,
        images: data.len(),
        rows,
    })
}

impl SweepTable {
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "# config: {}", serde_json::to_string(&self.config)?)?;
        writeln!(out, "# images: {}", self.images)?;
        writeln!(out, "# best_k: {} ({})", self.best_k, fmt_db(self.best_cpsnr))?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["k", "mean_cpsnr"])?;
        for r in &self.rows {
            w.write_record([r.k.to_string(), r.mean_cpsnr.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_csv_file(&self, path: impl AsRef<Path>) -> Result<()> {
        self.write_csv(BufWriter::new(File::create(path)?))
    }

    pub fn write_json(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut out = BufWriter::new(File::create(path)?);
        serde_json::to_writer_pretty(&mut out, self)?;
        out.write_all(b"\n")?;
        out.flush()?;
        Ok(())
    }
}
