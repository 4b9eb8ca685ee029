use num_complex::Complex64;

use super::operators::{adjuster, loop_delta_response, smoother, drift_strength, Strength, Weighting};
use super::pattern::CirclePattern;
use crate::error::{Error, Result};
use crate::imgproc::{components, dilate, erode, gaussian_blur, BinaryMask, ComponentMode, GrayImage, RealMap};
use crate::orientation::{
    build_filter_bank, conjugate_field, double, estimate_orientation_with, EstimateOptions, KernelShape,
    OrientationField,
};
use crate::params::PipelineParams;

/// Intermediate fields and masks of the refinement stage.
#[derive(Debug, Clone)]
pub struct RefinementMasks {
    /// Estimate with the large filter radius.
    pub o1: OrientationField,
    /// Estimate with the small filter radius.
    pub o2: OrientationField,
    /// Adjusted large-radius estimate; the field the iterative smoothing starts from.
    pub o3: OrientationField,
    /// False around deltas.
    pub m1: BinaryMask,
    /// Where the two estimates disagree.
    pub m2: BinaryMask,
    /// Around singularities.
    pub m3: BinaryMask,
    /// Area handed to the iterative smoothing.
    pub m4: BinaryMask,
    /// Per-pixel adjuster strength.
    pub s1: RealMap,
    /// Blurred loop/delta response of `o3`.
    pub i3: RealMap,
}

pub(crate) fn dilate_by(mask: &BinaryMask, radius: usize) -> Result<BinaryMask> {
    if radius == 0 {
        Ok(mask.clone())
    } else {
        dilate(mask, radius)
    }
}

pub(crate) fn erode_by(mask: &BinaryMask, radius: usize) -> Result<BinaryMask> {
    if radius == 0 {
        Ok(mask.clone())
    } else {
        erode(mask, radius)
    }
}

fn odd_size(length: f64) -> usize {
    let n = (length.round() as usize).max(3);
    n | 1
}

/// Orientation estimate with a filter bank of roughly `length` pixels.
pub fn estimate_with_length(image: &GrayImage, length: f64, params: &PipelineParams) -> Result<OrientationField> {
    let shape = KernelShape {
        sigma1: params.sigma1,
        alpha1: params.alpha1,
        sigma2: params.sigma2,
        alpha2: params.alpha2,
    };
    let size = odd_size(length);
    let bank = build_filter_bank(size, shape, params.n_angles)?;
    let options = EstimateOptions {
        smooth_sigma: size as f64 * params.smooth_ratio,
        response_sigma: size as f64 * params.response_ratio,
        strict_single_angle: params.strict_single_angle,
    };
    estimate_orientation_with(image, &bank, &options)
}

/// Fraction of foreground pixels where the field is zero.
pub fn zero_fraction(field: &OrientationField, foreground: &BinaryMask) -> f64 {
    let total = foreground.count();
    if total == 0 {
        return 0.0;
    }
    let zero = field
        .data()
        .iter()
        .zip(foreground.data())
        .filter(|(z, &m)| m && z.norm() == 0.0)
        .count();
    zero as f64 / total as f64
}

/// Unit doubled-angle vectors, zero where the field is zero.
fn unit_doubled(z: Complex64) -> Complex64 {
    let d = double(z);
    let m = d.norm();
    if m == 0.0 {
        d
    } else {
        d / m
    }
}

/// |sin Δθ| between two orientations (0 when either is zero).
pub fn orientation_gap(a: Complex64, b: Complex64) -> f64 {
    (unit_doubled(a) - unit_doubled(b)).norm() / 2.0
}

/// Estimates, operator passes and masks that precede the iterative
/// smoothing.
pub fn build_refinement_masks(
    image: &GrayImage,
    field: &OrientationField,
    foreground: &BinaryMask,
    period: f64,
    params: &PipelineParams,
) -> Result<RefinementMasks> {
    image.ensure_same_dims(field, "orientation field")?;
    image.ensure_same_dims(foreground, "foreground mask")?;
    if !(period > 0.0 && period.is_finite()) {
        return Err(Error::InvalidParameter(format!("period must be positive, got {period}")));
    }
    if !foreground.any() {
        return Err(Error::EmptyForeground);
    }
    let zero_fraction = zero_fraction(field, foreground);
    if zero_fraction > 0.99 {
        return Err(Error::DegenerateField { zero_fraction });
    }
    let weighting = Weighting::from_params(params);
    let pattern = |rho: f64| CirclePattern::with_count_or_default((rho * period).max(1.0), params.n_circle);
    let smooth_pattern = pattern(params.rho_s)?;
    let drift_pattern = pattern(params.rho_d1)?;
    let adjust_pattern = pattern(params.rho_a)?;
    let min_area = (period * period).ceil() as usize;

    let o1 = estimate_with_length(image, 1.5 * period, params)?;
    let so1 = smoother(&o1, &smooth_pattern, params.s, weighting);
    let so1_dual = smoother(&conjugate_field(&o1), &smooth_pattern, params.s, weighting);
    let direct = drift_strength(&so1, &drift_pattern, weighting);
    let dual = drift_strength(&so1_dual, &drift_pattern, weighting);
    let m1 = direct.zip_map(&dual, |&a, &b| (a - b) * 0.5 > -params.tau1);
    let m1 = erode_by(&m1.and(foreground), params.m1_erode)?;

    let s1 = gaussian_blur(&RealMap::from_mask(&m1), params.strength_sigma)?.map(|v| v.clamp(0.0, 1.0));

    let o2 = estimate_with_length(image, 0.5 * period, params)?;
    // S1 reaches 1 inside M1; scaling by s keeps the relaxation below one.
    let strength = s1.map(|v| v * params.s);
    let a1 = adjuster(&so1, &adjust_pattern, Strength::PerPixel(&strength), weighting)?;
    let a2 = adjuster(&o2, &adjust_pattern, Strength::PerPixel(&strength), weighting)?;
    let m2 = a1.zip_map(&a2, |&a, &b| orientation_gap(a, b) > params.tau2).and(foreground);
    let m2 = components(&m2, ComponentMode::FilterMinArea(min_area));
    let m2 = dilate_by(&m2, params.m2_dilate)?;

    let o3 = a1;
    let i3 = gaussian_blur(&loop_delta_response(&o3, &drift_pattern, weighting), params.i3_sigma)?;
    let core = erode_by(foreground, params.mf_erode)?;
    let m3 = i3.map(|v| v.abs() > params.tau3).and(&core);
    let m3 = components(&m3, ComponentMode::FilterMinArea(min_area));

    let m4 = dilate_by(&m2.and(&m3.not()), params.m4_dilate)?;

    Ok(RefinementMasks {
        o1,
        o2,
        o3,
        m1,
        m2,
        m3,
        m4,
        s1,
        i3,
    })
}
