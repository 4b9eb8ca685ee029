use super::masks::{dilate_by, erode_by, orientation_gap};
use super::operators::{smoother_in, Weighting};
use super::pattern::CirclePattern;
use crate::error::{Error, Result};
use crate::imgproc::{gaussian_blur, gaussian_kernel_1d, BinaryMask, RealMap};
use crate::orientation::{double, halve, OrientationField};
use crate::params::PipelineParams;

#[derive(Debug, Clone)]
pub struct SmoothingOutcome {
    pub field: OrientationField,
    /// Passes performed, at least one.
    pub iterations: usize,
    /// False when the iteration cap stopped the loop before the mask emptied.
    pub converged: bool,
    /// True-pixel count of the mask after each pass.
    pub mask_counts: Vec<usize>,
}

impl SmoothingOutcome {
    /// Turns a capped run into [`Error::IterationCapExceeded`].
    pub fn into_result(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::IterationCapExceeded(self.iterations))
        }
    }
}

/// Upper bound on the passes of [`iterative_smoothing`] for a raster.
pub fn shrink_bound(width: usize, height: usize, erode_radius: usize, dilate_radius: usize) -> usize {
    let step = 2 * erode_radius.saturating_sub(dilate_radius).max(1);
    width.min(height).div_ceil(step)
}

/// Repeatedly smooths the field inside a shrinking mask. Each pass keeps
/// only the pixels of the eroded mask that the smoother still changes by
/// more than `tau4`, so the mask empties in finitely many passes.
pub fn iterative_smoothing(
    field: &OrientationField,
    initial: &BinaryMask,
    foreground: &BinaryMask,
    pattern: &CirclePattern,
    params: &PipelineParams,
) -> Result<SmoothingOutcome> {
    field.ensure_same_dims(initial, "initial mask")?;
    field.ensure_same_dims(foreground, "foreground mask")?;
    if params.iter_erode <= params.iter_dilate {
        return Err(Error::InvalidParameter(
            "iter_erode must exceed iter_dilate for iterative smoothing to terminate".into(),
        ));
    }
    let weighting = Weighting::from_params(params);
    // Pixels farther than this from the mask never receive blend weight.
    let reach = gaussian_kernel_1d(params.blend_sigma)?.len() / 2 + params.iter_dilate + 1;

    let mut current = field.clone();
    let mut mask = initial.clone();
    let mut iterations = 0;
    let mut mask_counts = Vec::new();
    loop {
        iterations += 1;
        let region = dilate_by(&mask, reach)?;
        let smoothed = smoother_in(&current, pattern, params.s, weighting, &region);
        let changed = smoothed.zip_map(&current, |&a, &b| orientation_gap(a, b) > params.tau4);
        let next = dilate_by(
            &erode_by(&mask, params.iter_erode)?.and(&dilate_by(&changed, params.change_dilate)?),
            params.iter_dilate,
        )?
        .and(foreground);

        let weight = gaussian_blur(&RealMap::from_mask(&next), params.blend_sigma)?;
        for ((out, &new), &w) in current.data_mut().iter_mut().zip(smoothed.data()).zip(weight.data()) {
            if w > 0.0 {
                *out = halve(double(new) * w + double(*out) * (1.0 - w));
            }
        }
        mask = next;
        mask_counts.push(mask.count());
        if !mask.any() {
            return Ok(SmoothingOutcome {
                field: current,
                iterations,
                converged: true,
                mask_counts,
            });
        }
        if iterations >= params.iteration_cap {
            return Ok(SmoothingOutcome {
                field: current,
                iterations,
                converged: false,
                mask_counts,
            });
        }
    }
}
