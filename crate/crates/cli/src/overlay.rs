use image::{GrayAlphaImage, LumaA};
use ridgeflow::orientation::phase;
use ridgeflow::{Error, GrayImage, OrientationField};

use crate::error::{CliError, CliResult};

/// Grid points of the overlay: cell centres of a `stride` grid.
pub fn overlay_grid(width: usize, height: usize, stride: usize) -> Vec<(usize, usize)> {
    let (nx, ny) = (width / stride, height / stride);
    (0..ny)
        .flat_map(|j| (0..nx).map(move |i| (i * stride + stride / 2, j * stride + stride / 2)))
        .collect()
}

/// Pixels covered by a segment of `length` centred on `center` along `angle`.
pub fn segment_pixels(center: (usize, usize), angle: f64, length: f64, width: usize, height: usize) -> Vec<(usize, usize)> {
    let (dx, dy) = (angle.cos(), angle.sin());
    let steps = (2.0 * length).ceil() as i64;
    let mut pixels = Vec::new();
    for i in 0..=steps {
        let t = (i as f64 / steps as f64 - 0.5) * length;
        let x = (center.0 as f64 + t * dx).round();
        let y = (center.1 as f64 + t * dy).round();
        if x < 0.0 || y < 0.0 || x >= width as f64 || y >= height as f64 {
            continue;
        }
        let p = (x as usize, y as usize);
        if !pixels.contains(&p) {
            pixels.push(p);
        }
    }
    pixels
}

/// Draws a black segment of length 0.8·stride at each grid point, along
/// the field phase, with opacity equal to the magnitude (clamped to 1).
pub fn render_overlay(image: &GrayImage, field: &OrientationField, stride: usize) -> CliResult<GrayAlphaImage> {
    if stride < 4 {
        return Err(CliError::Argument(format!("overlay stride must be at least 4, got {stride}")));
    }
    if !image.same_dims(field) {
        return Err(Error::DimensionMismatch(format!(
            "overlay image {}x{} vs field {}x{}",
            image.width(),
            image.height(),
            field.width(),
            field.height()
        ))
        .into());
    }
    let (w, h) = (image.width(), image.height());
    let mut canvas: Vec<f64> = image.data().iter().map(|&v| v as f64).collect();
    for (x, y) in overlay_grid(w, h, stride) {
        let z = field.at(x, y);
        let alpha = z.norm().min(1.0);
        if alpha == 0.0 {
            continue;
        }
        for (px, py) in segment_pixels((x, y), phase(z), 0.8 * stride as f64, w, h) {
            let v = &mut canvas[py * w + px];
            *v *= 1.0 - alpha;
        }
    }
    Ok(GrayAlphaImage::from_fn(w as u32, h as u32, |x, y| {
        let v = canvas[y as usize * w + x as usize].round().clamp(0.0, 255.0) as u8;
        LumaA([v, 255])
    }))
}
