//! Deterministic inputs shared by the benchmarks.

use std::f64::consts::PI;

use ridgeflow::synth::{render_ridges, synth_field, Singularity};
use ridgeflow::{GrayImage, OrientationField};

/// Rendered loop pattern with its generator field.
pub fn loop_print(size: usize, period: f64) -> (GrayImage, OrientationField) {
    let c = size as f64 / 2.0;
    let field = synth_field(size, size, &[Singularity::looping(c + 0.3, c - 0.4)], PI / 2.0).expect("valid field");
    let image = render_ridges(&field, period, 7, 4).expect("valid period");
    (image, field)
}

/// Oblique sinusoidal ridges.
pub fn stripes(size: usize, ridge_angle: f64, period: f64) -> GrayImage {
    let (nx, ny) = (-ridge_angle.sin(), ridge_angle.cos());
    GrayImage::from_fn(size, size, |x, y| {
        let u = x as f64 * nx + y as f64 * ny;
        (127.5 + 100.0 * (2.0 * PI * u / period).cos()).round() as u8
    })
}
