use std::path::{Path, PathBuf};
use std::time::Instant;

use num_complex::Complex64;
use ridgeflow::period::estimate_period_in;
use ridgeflow::preprocess::preprocess;
use ridgeflow::refine::{estimate_with_length, refine};
use ridgeflow::synth::angular_error;
use ridgeflow::{BinaryMask, OrientationField, PipelineParams};

use crate::error::CliResult;
use crate::io::{ensure_dir, read_field, read_image, write_atomic, write_field, write_image, write_mask, write_png};
use crate::overlay::render_overlay;
use crate::report::PipelineReport;

/// Artifact names written by [`run_pipeline`], in writing order.
pub const ARTIFACTS: [&str; 7] = [
    "equalized.pgm",
    "mask.pgm",
    "amplified.pgm",
    "orientation.orf",
    "refined.orf",
    "overlay.png",
    "report.txt",
];

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub output: PathBuf,
    pub overlay_stride: usize,
    /// Ground-truth field for the error lines of the report.
    pub truth: Option<PathBuf>,
}

impl RunOptions {
    pub fn new(output: impl Into<PathBuf>) -> Self {
        Self {
            output: output.into(),
            overlay_stride: 16,
            truth: None,
        }
    }
}

/// Zero outside `mask`.
pub fn masked(field: &OrientationField, mask: &BinaryMask) -> OrientationField {
    field.zip_map(mask, |&z, &m| if m { z } else { Complex64::new(0.0, 0.0) })
}

struct Clock {
    last: Instant,
    timings: Vec<(&'static str, f64)>,
}

impl Clock {
    fn new() -> Self {
        Self {
            last: Instant::now(),
            timings: Vec::new(),
        }
    }

    fn lap(&mut self, stage: &'static str) {
        let now = Instant::now();
        self.timings.push((stage, (now - self.last).as_secs_f64()));
        self.last = now;
    }
}

/// Preprocess, estimate, measure the period, refine, and write every
/// artifact into `options.output`. A run that hits the iteration cap still
/// writes its artifacts; the report then has `converged = false`.
pub fn run_pipeline(input: &Path, params: &PipelineParams, options: &RunOptions) -> CliResult<PipelineReport> {
    let image = read_image(input)?;
    let truth = options.truth.as_deref().map(read_field).transpose()?;
    ensure_dir(&options.output)?;
    let out = |name: &str| options.output.join(name);
    let mut clock = Clock::new();

    let pre = preprocess(&image, params)?;
    let mask = pre.mask();
    clock.lap("preprocess");
    write_image(&out("equalized.pgm"), &pre.equalized.image)?;
    write_mask(&out("mask.pgm"), mask)?;
    write_image(&out("amplified.pgm"), &pre.amplified)?;

    let field = estimate_with_length(&pre.amplified, params.r as f64, params)?;
    clock.lap("orientation");
    write_field(&out("orientation.orf"), &field)?;

    let period = estimate_period_in(&field, &pre.equalized.image, Some(mask), params)?;
    clock.lap("period");

    let refined = refine(&pre.amplified, &field, mask, period.period, params)?;
    clock.lap("refine");
    write_field(&out("refined.orf"), &refined.field)?;
    let overlay = render_overlay(&pre.amplified, &masked(&refined.field, mask), options.overlay_stride)?;
    write_png(&out("overlay.png"), &overlay)?;
    clock.lap("write");

    let errors = truth
        .map(|t| angular_error(&refined.field, &t, mask))
        .transpose()?;
    let report = PipelineReport {
        input: input.to_path_buf(),
        width: image.width(),
        height: image.height(),
        foreground_pixels: mask.count(),
        period: period.period,
        reliable_segments: period.reliable_count,
        grid_points: period.grid_points,
        iterations: refined.trace.iterations,
        converged: refined.trace.converged,
        timings: clock.timings,
        errors,
    };
    write_atomic(&out("report.txt"), report.to_text().as_bytes())?;
    Ok(report)
}
