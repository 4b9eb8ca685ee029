use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::bank::FilterBank;
use super::field::{halve, normalize_field, smooth_field, OrientationField};
use crate::error::Result;
use crate::imgproc::{convolve2d, gaussian_blur, Border, GrayImage, RealMap};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateOptions {
    /// Doubled-space smoothing of the combined field.
    pub smooth_sigma: f64,
    /// Gaussian blur of each absolute filter response.
    pub response_sigma: f64,
    /// Sum unit vectors at the single ridge angles instead of doubled ones.
    pub strict_single_angle: bool,
}

impl EstimateOptions {
    /// Defaults tied to the bank size: smoothing r/3, response blur r/6.
    pub fn for_bank(bank: &FilterBank) -> Self {
        let r = bank.size() as f64;
        Self {
            smooth_sigma: r / 3.0,
            response_sigma: r / 6.0,
            strict_single_angle: false,
        }
    }
}

/// Ridge orientation (normal to the derivative direction θ) in [0, π).
pub fn ridge_angle(theta: f64) -> f64 {
    (theta + PI / 2.0).rem_euclid(PI)
}

/// Blurred absolute response of every kernel, in bank order.
pub fn response_maps(image: &GrayImage, bank: &FilterBank, response_sigma: f64) -> Result<Vec<RealMap>> {
    // Kernels sum to zero only up to rounding; removing the mean keeps flat
    // images exactly flat.
    let input = RealMap::from_gray(image);
    let mean = input.sum() / input.len() as f64;
    let input = input.map(|v| v - mean);
    bank.kernels()
        .par_iter()
        .map(|k| {
            let response = convolve2d(&input, k, Border::Clamp)?;
            gaussian_blur(&response.map(|v| v.abs()), response_sigma)
        })
        .collect()
}

/// Weighted orientation mean of the responses, without smoothing or
/// normalization. Pixels with zero total weight are zero.
pub fn combine_responses(responses: &[RealMap], bank: &FilterBank, strict_single_angle: bool) -> OrientationField {
    let (w, h) = (responses[0].width(), responses[0].height());
    let units: Vec<Complex64> = bank
        .angles()
        .iter()
        .map(|&theta| {
            let phi = ridge_angle(theta);
            let angle = if strict_single_angle { phi } else { 2.0 * phi };
            Complex64::from_polar(1.0, angle)
        })
        .collect();
    OrientationField::par_from_rows(w, h, |y, row| {
        for (x, out) in row.iter_mut().enumerate() {
            let i = y * w + x;
            let mut num = Complex64::new(0.0, 0.0);
            let mut den = 0.0;
            for (map, unit) in responses.iter().zip(&units) {
                let wk = map.data()[i];
                num += unit * wk;
                den += wk;
            }
            *out = if den == 0.0 {
                Complex64::new(0.0, 0.0)
            } else if strict_single_angle {
                super::field::canonical(num / den)
            } else {
                halve(num / den)
            };
        }
    })
}

/// Orientation field from the gradient filter bank, smoothed with
/// `smooth_sigma` and normalized to a maximum magnitude of one.
pub fn estimate_orientation(image: &GrayImage, bank: &FilterBank, smooth_sigma: f64) -> Result<OrientationField> {
    let options = EstimateOptions {
        smooth_sigma,
        ..EstimateOptions::for_bank(bank)
    };
    estimate_orientation_with(image, bank, &options)
}

pub fn estimate_orientation_with(
    image: &GrayImage,
    bank: &FilterBank,
    options: &EstimateOptions,
) -> Result<OrientationField> {
    let responses = response_maps(image, bank, options.response_sigma)?;
    let raw = combine_responses(&responses, bank, options.strict_single_angle);
    Ok(normalize_field(&smooth_field(&raw, options.smooth_sigma)?))
}
