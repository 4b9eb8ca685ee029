//! Orientation-field refinement with circle-sampling operators.
//!
//! Three operators sample the field on a circle of radius R around each
//! pixel:
//!
//! * the adjuster pulls the field towards circular flow, which rounds loops;
//! * the smoother regularizes the field against its neighborhood;
//! * the drifters respond strongly at singular points. Comparing a field
//!   with its complex conjugate separates loops (positive) from deltas
//!   (negative).
//!
//! [`refine`] chains them: two estimates at different filter radii locate
//! unreliable areas, singularities are excluded from those areas, and the
//! remaining mask is smoothed iteratively.

mod iterate;
mod masks;
mod operators;
mod pattern;

pub use iterate::{iterative_smoothing, shrink_bound, SmoothingOutcome};
pub use masks::{build_refinement_masks, estimate_with_length, orientation_gap, zero_fraction, RefinementMasks};
pub use operators::{
    adjuster, drift_strength, drifter, loop_delta_response, point, radial_weights, self_weights, smoother,
    tangential_weights, DriftMode, Strength, Weighting,
};
pub use pattern::{circle_pattern, default_circle_count, CirclePattern};

use crate::error::Result;
use crate::imgproc::{BinaryMask, GrayImage};
use crate::orientation::OrientationField;
use crate::params::PipelineParams;

/// Everything the refinement computed, for inspection.
#[derive(Debug, Clone)]
pub struct RefineTrace {
    pub masks: RefinementMasks,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone)]
pub struct RefineOutcome {
    pub field: OrientationField,
    pub trace: RefineTrace,
}

/// Full refinement of the orientation of `image` inside `foreground`.
///
/// `field` is the initial estimate, used to reject inputs without usable
/// orientation. A run that hits the iteration cap still returns its field,
/// with `trace.converged` false.
pub fn refine(
    image: &GrayImage,
    field: &OrientationField,
    foreground: &BinaryMask,
    period: f64,
    params: &PipelineParams,
) -> Result<RefineOutcome> {
    let masks = build_refinement_masks(image, field, foreground, period, params)?;
    let pattern = CirclePattern::with_count_or_default((params.rho_s * period).max(1.0), params.n_circle)?;
    let outcome = iterative_smoothing(&masks.o3, &masks.m4, foreground, &pattern, params)?;
    Ok(RefineOutcome {
        field: outcome.field,
        trace: RefineTrace {
            masks,
            iterations: outcome.iterations,
            converged: outcome.converged,
        },
    })
}
