//! Samples an RGB image through every Bayer phase, stores the mosaic in the
//! packed `.ledm` format, reads it back and checks that demosaicking keeps
//! the captured samples.
//!
//! cargo run --example mosaic_roundtrip [image.png]

mod common;

use led_demosaic::io::{read_ledm, write_ledm};
use led_demosaic::{led_demosaic, mosaic, CfaLayout, CfaPhase, LedParams, Result};

fn main() -> Result<()> {
    let (name, truth) = common::image_from_args(64, 48)?;
    println!("input: {name}, {}x{}", truth.width(), truth.height());
    let dir = std::env::temp_dir();
    for phase in CfaPhase::ALL {
        let m = mosaic(&truth, CfaLayout::new(phase))?;
        let path = dir.join(format!("mosaic-{}-{}.ledm", phase.name(), std::process::id()));
        write_ledm(&path, &m)?;
        let back = read_ledm(&path)?;
        std::fs::remove_file(&path)?;

        let rgb = led_demosaic(&back, &LedParams::default())?;
        let remosaic = mosaic(&rgb, back.layout())?;
        println!(
            "{phase}: top-left tile {:?} {:?} / {:?} {:?}, file round trip exact: {}, samples preserved: {}",
            m.site(0, 0),
            m.site(0, 1),
            m.site(1, 0),
            m.site(1, 1),
            back == m,
            remosaic.plane() == m.plane()
        );
    }
    Ok(())
}
