use crate::error::Result;
use crate::imgproc::{rank_filter, BinaryMask, GrayImage, Rank};

/// Affine map sending `lo` to 0 and `hi` to 255, clamped.
fn stretch(v: f64, lo: f64, hi: f64) -> f64 {
    ((v - lo) / (hi - lo) * 255.0).clamp(0.0, 255.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplifyParams {
    pub radius: usize,
    /// Local minima in [t_min_lo, t_min_hi] are stretched to [0, 255].
    pub t_min_lo: f64,
    pub t_min_hi: f64,
    /// Local maxima in [t_max_lo, t_max_hi] are stretched to [0, 255].
    pub t_max_lo: f64,
    pub t_max_hi: f64,
}

/// Stretches every pixel between its local minimum and maximum, each
/// remapped through its own threshold pair. Outside `mask` the result is
/// white.
pub fn amplify_ridges(image: &GrayImage, mask: &BinaryMask, params: &AmplifyParams) -> Result<GrayImage> {
    image.ensure_same_dims(mask, "foreground mask")?;
    let filled = image.zip_map(mask, |&v, &m| if m { v } else { 255 });
    let local_max = rank_filter(&filled, params.radius, Rank::Max)?;
    let local_min = rank_filter(&filled, params.radius, Rank::Min)?;
    let out = GrayImage::from_fn(image.width(), image.height(), |x, y| {
        if !mask.at(x, y) {
            return 255;
        }
        let v = filled.at(x, y) as f64;
        let (hi, lo) = (local_max.at(x, y) as f64, local_min.at(x, y) as f64);
        let hi2 = stretch(hi, params.t_max_lo, params.t_max_hi);
        let lo2 = stretch(lo, params.t_min_lo, params.t_min_hi);
        let value = if hi == lo {
            lo2
        } else {
            lo2 + (v - lo) / (hi - lo) * (hi2 - lo2)
        };
        value.round().clamp(0.0, 255.0) as u8
    });
    Ok(out)
}
