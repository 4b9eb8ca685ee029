//! Image preparation: contrast equalization, removal of scanner borders,
//! foreground segmentation and local ridge/valley amplification.

mod amplify;
mod border;
mod equalize;
mod segment;

pub use amplify::{amplify_ridges, AmplifyParams};
pub use border::{oblique_kernel, remove_border, BorderParams, BorderRemoval, Line, LinePair};
pub use equalize::{equalize, EqualizeResult};
pub use segment::{hysteresis, prefilter, segment, segment_traced, SegmentTrace};

use crate::error::Result;
use crate::imgproc::{BinaryMask, GrayImage};
use crate::params::PipelineParams;

impl BorderParams {
    pub fn from_params(params: &PipelineParams) -> Self {
        Self {
            tau_v: params.tau_v,
            line_strength: params.line_strength,
            line_coverage: params.line_coverage,
        }
    }
}

impl AmplifyParams {
    pub fn from_params(params: &PipelineParams) -> Self {
        Self {
            radius: params.amplify_radius,
            t_min_lo: params.t_min_lo,
            t_min_hi: params.t_min_hi,
            t_max_lo: params.t_max_lo,
            t_max_hi: params.t_max_hi,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Preprocessed {
    pub equalized: EqualizeResult,
    pub border: BorderRemoval,
    pub segmentation: SegmentTrace,
    pub amplified: GrayImage,
}

impl Preprocessed {
    /// Foreground mask.
    pub fn mask(&self) -> &BinaryMask {
        &self.segmentation.mask
    }
}

/// Equalize, remove borders, segment, amplify.
pub fn preprocess(image: &GrayImage, params: &PipelineParams) -> Result<Preprocessed> {
    let equalized = equalize(image, params.hist_sigma, params.clip_fraction);
    let border = remove_border(&equalized.image, &BorderParams::from_params(params))?;
    let segmentation = segment_traced(&equalized.image, &border.mask, params)?;
    let amplified = amplify_ridges(&equalized.image, &segmentation.mask, &AmplifyParams::from_params(params))?;
    Ok(Preprocessed {
        equalized,
        border,
        segmentation,
        amplified,
    })
}
