//! Bayer CFA demosaicking with logistic edge sensing.
//!
//! The crate reconstructs RGB images from single-plane Bayer mosaics. Besides
//! the logistic edge-sensing method ([`led`]) it ships Hamilton-Adams and
//! bilinear baselines ([`baselines`]), the usual quality measures
//! ([`metrics`]), and a dataset driver that mosaics ground-truth images, runs
//! each method and reports accuracy and timing ([`harness`]).
//!
//! ```no_run
//! use led_demosaic::{cfa, io, led};
//!
//! let truth = io::read_rgb("kodim01.png")?;
//! let m = cfa::mosaic(&truth, cfa::CfaLayout::CANONICAL)?;
//! let rgb = led::led_demosaic(&m, &led::LedParams::default())?;
//! io::write_rgb("kodim01_led.png", &rgb)?;
//! # Ok::<(), led_demosaic::Error>(())
//! ```

pub mod baselines;
pub mod cfa;
pub mod error;
pub mod harness;
pub mod image;
pub mod io;
pub mod led;
pub mod metrics;
pub mod parallel;

pub use cfa::{mosaic, BayerMosaic, CfaLayout, CfaPhase, Channel};
pub use error::{Error, Result};
pub use image::{Plane, RgbImage};
pub use led::{led_demosaic, LedParams};
