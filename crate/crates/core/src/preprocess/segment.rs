use crate::error::{Error, Result};
use crate::imgproc::{
    components, convex_hull, convolve2d, dilate, erode, gaussian_blur, label_components, rank_filter, rescale_linear,
    BinaryMask, Border, ComponentMode, Connectivity, GrayImage, Kernel, Rank, RealMap,
};
use crate::params::PipelineParams;

/// Intermediate masks of [`segment_traced`].
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentTrace {
    /// Image after rank filtering and contrast shaping.
    pub filtered: GrayImage,
    /// Dark pixels.
    pub dark: BinaryMask,
    /// Cleaned dark-pixel mask.
    pub m1: BinaryMask,
    /// Hysteresis edges inside the border mask.
    pub edges: BinaryMask,
    /// Cleaned mask of dense edge components.
    pub m2: BinaryMask,
    pub mask: BinaryMask,
}

/// Closing-like cleanup shared by both masks: grow, shrink harder, keep the
/// biggest blobs, fill their holes, grow back.
fn clean(mask: &BinaryMask, params: &PipelineParams) -> Result<BinaryMask> {
    let mut m = mask.clone();
    if params.seg_dilate > 0 {
        m = dilate(&m, params.seg_dilate)?;
    }
    if params.seg_erode > 0 {
        m = erode(&m, params.seg_erode)?;
    }
    m = components(&m, ComponentMode::KeepLargest(params.keep_components));
    m = components(&m, ComponentMode::FillHoles);
    if params.seg_final_dilate > 0 {
        m = dilate(&m, params.seg_final_dilate)?;
    }
    Ok(m)
}

fn sobel_magnitude(map: &RealMap) -> Result<RealMap> {
    let gx = Kernel::new(3, 3, vec![-1.0, 0.0, 1.0, -2.0, 0.0, 2.0, -1.0, 0.0, 1.0])?;
    let gy = gx.transpose();
    let a = convolve2d(map, &gx, Border::Clamp)?;
    let b = convolve2d(map, &gy, Border::Clamp)?;
    Ok(a.zip_map(&b, |x, y| x.hypot(*y)))
}

/// Weak edges connected to at least one strong edge.
pub fn hysteresis(magnitude: &RealMap, low: f64, high: f64) -> BinaryMask {
    let weak = magnitude.map(|&v| v >= low && v > 0.0);
    let labels = label_components(&weak, true, Connectivity::Eight);
    let mut keep = vec![false; labels.count()];
    for (&l, &v) in labels.labels.iter().zip(magnitude.data()) {
        if l != 0 && v >= high {
            keep[l as usize - 1] = true;
        }
    }
    let data = labels.labels.iter().map(|&l| l != 0 && keep[l as usize - 1]).collect();
    BinaryMask::from_vec(magnitude.width(), magnitude.height(), data).expect("same dimensions")
}

/// Rank filtering, blur and contrast shaping applied before thresholding.
pub fn prefilter(image: &GrayImage, params: &PipelineParams) -> Result<GrayImage> {
    let mut img = image.clone();
    if params.median_radius > 0 {
        img = rank_filter(&img, params.median_radius, Rank::Median)?;
    }
    let blurred = gaussian_blur(&RealMap::from_gray(&img), params.seg_sigma)?.to_gray();
    let img = if params.min_radius > 0 {
        rank_filter(&blurred, params.min_radius, Rank::Min)?
    } else {
        blurred
    };
    let values = RealMap::from_gray(&img);
    let (lo, hi) = values.min_max();
    if lo == hi {
        // Nothing to stretch; a flat white card must stay white.
        return Ok(img);
    }
    let unit = rescale_linear(&values, 0.0, 1.0).map(|v| v * v);
    Ok(rescale_linear(&unit, 0.0, 255.0).to_gray())
}

/// Foreground mask with every intermediate step.
pub fn segment_traced(image: &GrayImage, border: &BinaryMask, params: &PipelineParams) -> Result<SegmentTrace> {
    image.ensure_same_dims(border, "border mask")?;
    let filtered = prefilter(image, params)?;
    let dark = filtered.map(|&v| (v as f64) < params.tau0);
    let m1 = clean(&dark.and(border), params)?;

    let magnitude = sobel_magnitude(&RealMap::from_gray(&filtered))?;
    let (_, peak) = magnitude.min_max();
    let edges = hysteresis(&magnitude, params.edge_low * peak, params.edge_high * peak).and(border);
    let density = gaussian_blur(&RealMap::from_mask(&edges), params.edge_sigma)?;
    let (_, top) = density.min_max();
    let density = density.map(|&v| if top > 0.0 { v / top } else { 0.0 });
    let labels = label_components(&edges, true, Connectivity::Eight);
    let mut sums = vec![0.0; labels.count()];
    for (&l, &d) in labels.labels.iter().zip(density.data()) {
        if l != 0 {
            sums[l as usize - 1] += d;
        }
    }
    let dense: Vec<bool> = sums
        .iter()
        .zip(&labels.areas)
        .map(|(&s, &a)| s / a as f64 > params.tau_edge)
        .collect();
    let kept_edges = BinaryMask::from_vec(
        edges.width(),
        edges.height(),
        labels.labels.iter().map(|&l| l != 0 && dense[l as usize - 1]).collect(),
    )?;
    let m2 = clean(&kept_edges, params)?;

    // Morphology can grow back over the border; the border mask is convex,
    // so the intersection stays convex.
    let mask = convex_hull(&m1.or(&m2)).and(border);
    if !mask.any() {
        return Err(Error::EmptyForeground);
    }
    Ok(SegmentTrace {
        filtered,
        dark,
        m1,
        edges,
        m2,
        mask,
    })
}

/// Convex foreground mask of the fingerprint inside `border`.
pub fn segment(image: &GrayImage, border: &BinaryMask, params: &PipelineParams) -> Result<BinaryMask> {
    segment_traced(image, border, params).map(|t| t.mask)
}
