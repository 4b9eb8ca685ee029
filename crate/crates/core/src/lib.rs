//! Fingerprint orientation-field extraction and refinement.
//!
//! The pipeline runs in three stages:
//!
//! * [`preprocess`]: contrast equalization, scanner border removal,
//!   foreground segmentation and ridge amplification;
//! * [`orientation`] and [`period`]: a gradient filter bank produces a first
//!   orientation field, from which the mean ridge period is measured;
//! * [`refine`]: circle-pattern operators locate noisy areas and
//!   singularities and repair the field around them.
//!
//! [`synth`] generates analytic fields and ridge images for testing.

pub mod error;
pub mod imgproc;
pub mod orientation;
pub mod params;
pub mod period;
pub mod preprocess;
pub mod refine;
pub mod synth;

pub use error::{Error, Result};
pub use imgproc::{BinaryMask, GrayImage, Raster, RealMap};
pub use orientation::{FilterBank, KernelShape, OrientationField};
pub use params::{PipelineParams, WeightNorm};
pub use period::PeriodEstimate;
pub use preprocess::{Preprocessed, SegmentTrace};
pub use refine::{RefineOutcome, RefineTrace};
pub use synth::{ErrorStats, Singularity, SingularityKind};
