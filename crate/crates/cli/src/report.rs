use std::fmt::Write;
use std::path::PathBuf;

use ridgeflow::ErrorStats;

/// Summary of one pipeline run, written as `key = value` lines.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineReport {
    pub input: PathBuf,
    pub width: usize,
    pub height: usize,
    pub foreground_pixels: usize,
    pub period: f64,
    pub reliable_segments: usize,
    pub grid_points: usize,
    pub iterations: usize,
    pub converged: bool,
    /// Wall-clock seconds per stage, in pipeline order.
    pub timings: Vec<(&'static str, f64)>,
    /// Refined field against a supplied ground truth.
    pub errors: Option<ErrorStats>,
}

impl PipelineReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut line = |k: &str, v: String| writeln!(out, "{k} = {v}").unwrap();
        line("input", self.input.display().to_string());
        line("width", self.width.to_string());
        line("height", self.height.to_string());
        line("foreground_pixels", self.foreground_pixels.to_string());
        line("period", format!("{:.6}", self.period));
        line("reliable_segments", self.reliable_segments.to_string());
        line("grid_points", self.grid_points.to_string());
        line("iterations", self.iterations.to_string());
        line("converged", self.converged.to_string());
        for (stage, seconds) in &self.timings {
            line(&format!("time.{stage}"), format!("{seconds:.6}"));
        }
        if let Some(e) = &self.errors {
            out.push_str(&error_text(e));
        }
        out
    }
}

/// `mean_deg`, `rmse_deg`, `max_deg` and `pixel_count` lines.
pub fn error_text(e: &ErrorStats) -> String {
    format!(
        "mean_deg = {:.6}\nrmse_deg = {:.6}\nmax_deg = {:.6}\npixel_count = {}\n",
        e.mean_deg, e.rmse_deg, e.max_deg, e.pixel_count
    )
}
