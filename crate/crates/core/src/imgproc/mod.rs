//! Raster primitives shared by every pipeline stage.

mod filter;
mod hull;
mod morph;
mod pgm;
mod raster;

pub use filter::{
    convolve2d, disk_offsets, gaussian_blur, gaussian_blur_with_border, gaussian_kernel_1d,
    rank_filter, rescale_linear, Border, Kernel, Rank,
};
pub use hull::{convex_hull, hull_vertices};
pub use morph::{
    components, dilate, erode, label_components, morphology, morphology_with_outside,
    ComponentMode, Connectivity, Labeling, MorphOp,
};
pub use pgm::{decode_pgm, encode_pgm, read_pgm, write_mask_pgm, write_pgm};
pub use raster::{BinaryMask, GrayImage, Raster, RealMap};
