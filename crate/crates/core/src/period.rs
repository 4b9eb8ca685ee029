//! Mean ridge period from intensity profiles taken across the ridges.

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::imgproc::{BinaryMask, GrayImage};
use crate::orientation::{phase, DoubledSampler, OrientationField};
use crate::params::PipelineParams;

/// Samples along one segment orthogonal to the local orientation.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    /// (x, y) sample positions.
    pub points: Vec<(f64, f64)>,
    /// Interpolated field values at the samples.
    pub orientations: Vec<Complex64>,
    /// Interpolated intensities at the samples.
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentFrequency {
    /// Grid point (x, y).
    pub center: (usize, usize),
    /// Cycles per segment.
    pub frequency: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodEstimate {
    /// Mean cycles per segment over the reliable segments.
    pub frequency: f64,
    /// Ridge period in pixels.
    pub period: f64,
    pub per_segment: Vec<SegmentFrequency>,
    pub reliable_count: usize,
    pub grid_points: usize,
}

fn bilinear(image: &GrayImage, x: f64, y: f64) -> f64 {
    let x0 = (x.floor() as usize).min(image.width() - 1);
    let y0 = (y.floor() as usize).min(image.height() - 1);
    let x1 = (x0 + 1).min(image.width() - 1);
    let y1 = (y0 + 1).min(image.height() - 1);
    let (fx, fy) = (x - x0 as f64, y - y0 as f64);
    let v = |x, y| image.at(x, y) as f64;
    v(x0, y0) * (1.0 - fx) * (1.0 - fy) + v(x1, y0) * fx * (1.0 - fy) + v(x0, y1) * (1.0 - fx) * fy + v(x1, y1) * fx * fy
}

fn segment_points(
    sampler: &DoubledSampler,
    center: (f64, f64),
    length: f64,
    n_samples: usize,
) -> Vec<(f64, f64)> {
    let theta = phase(sampler.at(center.0, center.1));
    let (nx, ny) = (-theta.sin(), theta.cos());
    let step = length / n_samples as f64;
    let mid = (n_samples as f64 - 1.0) / 2.0;
    (0..n_samples)
        .map(|k| {
            let t = (k as f64 - mid) * step;
            (center.0 + t * nx, center.1 + t * ny)
        })
        .collect()
}

fn inside(image: &GrayImage, (x, y): (f64, f64)) -> bool {
    x >= 0.0 && y >= 0.0 && x <= (image.width() - 1) as f64 && y <= (image.height() - 1) as f64
}

fn profile_with(
    sampler: &DoubledSampler,
    image: &GrayImage,
    center: (f64, f64),
    length: f64,
    n_samples: usize,
) -> Result<Profile> {
    let points = segment_points(sampler, center, length, n_samples);
    if let Some(&(x, y)) = points.iter().find(|&&p| !inside(image, p)) {
        return Err(Error::OutOfBounds { x, y });
    }
    let orientations = points.iter().map(|&(x, y)| sampler.at(x, y)).collect();
    let values = points.iter().map(|&(x, y)| bilinear(image, x, y)).collect();
    Ok(Profile {
        points,
        orientations,
        values,
    })
}

/// `n_samples` points spaced `length / n_samples` apart, centered on
/// `center` and running along the normal to the orientation there.
pub fn sample_profile(
    field: &OrientationField,
    image: &GrayImage,
    center: (f64, f64),
    length: f64,
    n_samples: usize,
) -> Result<Profile> {
    field.ensure_same_dims(image, "image")?;
    if n_samples < 8 {
        return Err(Error::InvalidParameter(format!("need at least 8 samples, got {n_samples}")));
    }
    profile_with(&DoubledSampler::new(field), image, center, length, n_samples)
}

/// Index of the first spectral peak at or above `min_frequency`, after a
/// width-3 moving average and mean removal. Peaks weaker than
/// `peak_fraction` of the strongest such frequency are skipped. `None` for
/// flat profiles.
pub fn profile_frequency(values: &[f64], peak_fraction: f64, min_frequency: usize) -> Option<usize> {
    let n = values.len();
    if n < 4 {
        return None;
    }
    let smoothed: Vec<f64> = (0..n)
        .map(|i| (values[i.saturating_sub(1)] + values[i] + values[(i + 1).min(n - 1)]) / 3.0)
        .collect();
    let mean = smoothed.iter().sum::<f64>() / n as f64;
    let mut buf: Vec<Complex64> = smoothed.iter().map(|&v| Complex64::new(v - mean, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let half = n / 2;
    let mag: Vec<f64> = buf[..=half].iter().map(|z| z.norm()).collect();
    let lowest = min_frequency.max(1);
    if lowest > half {
        return None;
    }
    let strongest = mag[lowest..].iter().copied().fold(0.0, f64::max);
    if strongest <= 1e-9 * n as f64 {
        return None;
    }
    (lowest..=half).find(|&k| {
        let next = if k < half { mag[k + 1] } else { f64::NEG_INFINITY };
        mag[k] > mag[k - 1] && mag[k] >= next && mag[k] >= peak_fraction * strongest
    })
}

/// Period over a grid covering the whole raster.
pub fn estimate_period(field: &OrientationField, image: &GrayImage, params: &PipelineParams) -> Result<PeriodEstimate> {
    estimate_period_in(field, image, None, params)
}

/// Period over the grid points that fall inside `mask` (all of them when
/// `mask` is `None`). Segments leaving the raster or the mask, crossing a
/// field value weaker than `t_tilde`, or carrying no spectral peak are
/// discarded.
pub fn estimate_period_in(
    field: &OrientationField,
    image: &GrayImage,
    mask: Option<&BinaryMask>,
    params: &PipelineParams,
) -> Result<PeriodEstimate> {
    field.ensure_same_dims(image, "image")?;
    if let Some(m) = mask {
        field.ensure_same_dims(m, "mask")?;
    }
    if params.grid_step == 0 || params.n_samples < 8 {
        return Err(Error::InvalidParameter("grid_step > 0 and n_samples >= 8 are required".into()));
    }
    let step = params.grid_step;
    let centers: Vec<(usize, usize)> = (step / 2..image.height())
        .step_by(step)
        .flat_map(|y| (step / 2..image.width()).step_by(step).map(move |x| (x, y)))
        .filter(|&(x, y)| mask.map_or(true, |m| m.at(x, y)))
        .collect();

    let sampler = DoubledSampler::new(field);
    let results: Vec<Option<usize>> = centers
        .par_iter()
        .map(|&(x, y)| {
            let profile =
                profile_with(&sampler, image, (x as f64, y as f64), params.segment_length, params.n_samples).ok()?;
            let weakest = profile.orientations.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
            let inside = mask.map_or(true, |m| {
                profile
                    .points
                    .iter()
                    .all(|&(px, py)| m.at_or(px.round() as isize, py.round() as isize, false))
            });
            if inside && weakest > params.t_tilde {
                profile_frequency(&profile.values, params.peak_fraction, params.min_frequency)
            } else {
                None
            }
        })
        .collect();

    let per_segment: Vec<SegmentFrequency> = centers
        .iter()
        .zip(&results)
        .filter_map(|(&center, f)| f.map(|frequency| SegmentFrequency { center, frequency }))
        .collect();
    if per_segment.is_empty() {
        return Err(Error::NoReliableSegments);
    }
    let frequency = per_segment.iter().map(|s| s.frequency as f64).sum::<f64>() / per_segment.len() as f64;
    Ok(PeriodEstimate {
        frequency,
        period: params.segment_length / frequency,
        reliable_count: per_segment.len(),
        grid_points: centers.len(),
        per_segment,
    })
}
